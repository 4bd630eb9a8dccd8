#include "jsbl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace jsbl::io {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, const fs::path& path, std::size_t line) {
  const std::string t = trim(cell);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw Error(ErrorCode::Io, path.string() + ":" + std::to_string(line) + ": not a number: '" + t + "'");
  return v;
}

std::vector<std::vector<double>> read_rows(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_number(cell, path, lineno));
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::Io, path.string() + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(rows.front().size()) + " columns, found " +
                                     std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::Io, path.string() + " is empty");
  return rows;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

Matrix read_matrix_csv(const fs::path& path) {
  const auto rows = read_rows(path);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  auto out = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

Vector read_vector_csv(const fs::path& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw Error(ErrorCode::Io, path.string() + " holds a " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + " matrix, expected a vector");
}

void write_vector_csv(const fs::path& path, const Vector& v) {
  auto out = open_out(path);
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

std::vector<Index> read_index_set(const fs::path& path) {
  const Vector v = read_vector_csv(path);
  std::vector<Index> idx;
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) < 1.0 || v(i) != std::floor(v(i)))
      throw Error(ErrorCode::Io, path.string() + ": indices must be positive integers (1-based)");
    idx.push_back(static_cast<Index>(v(i)) - 1);
  }
  return idx;
}

void write_index_set(const fs::path& path, const std::vector<Index>& idx) {
  auto out = open_out(path);
  for (Index i : idx) out << i + 1 << '\n';
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

Table& Table::row() {
  rows_.emplace_back();
  return *this;
}

Table& Table::add(const std::string& cell) {
  if (rows_.empty()) row();
  rows_.back().push_back(cell);
  return *this;
}

Table& Table::add(double v) { return add(format_double(v)); }
Table& Table::add(Index v) { return add(std::to_string(v)); }

void Table::write(const fs::path& path) const {
  auto out = open_out(path);
  for (std::size_t j = 0; j < header_.size(); ++j) out << (j ? "," : "") << header_[j];
  out << '\n';
  for (const auto& r : rows_) {
    if (r.size() != header_.size())
      throw Error(ErrorCode::Io, "row has " + std::to_string(r.size()) + " cells, header has " +
                                     std::to_string(header_.size()));
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << r[j];
    out << '\n';
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace jsbl::io
