#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "jsbl/model.hpp"

namespace jsbl::io {

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

/// Comma-separated rows without a header; one text row per matrix row.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// A single column or a single row of numbers.
Vector read_vector_csv(const std::filesystem::path& path);
void write_vector_csv(const std::filesystem::path& path, const Vector& v);

/// One 1-based index per line; returned 0-based.
std::vector<Index> read_index_set(const std::filesystem::path& path);
void write_index_set(const std::filesystem::path& path, const std::vector<Index>& idx);

/// CSV with a fixed header. Cells are written verbatim.
class Table {
 public:
  explicit Table(std::vector<std::string> header);

  Table& row();
  Table& add(const std::string& cell);
  Table& add(double v);
  Table& add(Index v);
  Table& add(int v) { return add(static_cast<Index>(v)); }

  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& at(std::size_t i) const { return rows_.at(i); }

  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Creates the directory (and parents) if needed.
void ensure_directory(const std::filesystem::path& dir);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace jsbl::io
