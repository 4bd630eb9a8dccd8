#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "jsbl/cli.hpp"
#include "jsbl/io.hpp"

using namespace jsbl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "jsbl");
  return jsbl::cli::parse_and_dispatch(args);
}

}  // namespace

TEST(Io, MatrixVectorIndexRoundTrip) {
  const fs::path dir = testutil::scratch_dir("io");
  std::mt19937_64 g(61);
  const Matrix m = testutil::randn(3, 4, g);
  io::write_matrix_csv(dir / "m.csv", m);
  EXPECT_EQ(io::read_matrix_csv(dir / "m.csv"), m);
  const Vector v = testutil::randn(5, g);
  io::write_vector_csv(dir / "v.csv", v);
  EXPECT_EQ(io::read_vector_csv(dir / "v.csv"), v);
  spit(dir / "row.csv", "1, 2 ,3\n");
  EXPECT_EQ(io::read_vector_csv(dir / "row.csv"), Vector::LinSpaced(3, 1, 3));
  spit(dir / "idx.csv", "1\n5\n3\n");
  EXPECT_EQ(io::read_index_set(dir / "idx.csv"), (std::vector<Index>{0, 4, 2}));
  io::write_index_set(dir / "idx2.csv", {0, 4, 2});
  EXPECT_EQ(slurp(dir / "idx2.csv"), "1\n5\n3\n");
  spit(dir / "bad.csv", "1,2\n3\n");
  EXPECT_THROW(io::read_matrix_csv(dir / "bad.csv"), Error);
  spit(dir / "nan.csv", "1,x\n");
  EXPECT_THROW(io::read_matrix_csv(dir / "nan.csv"), Error);
  spit(dir / "zero.csv", "0\n");
  EXPECT_THROW(io::read_index_set(dir / "zero.csv"), Error);
  EXPECT_THROW(io::read_matrix_csv(dir / "missing.csv"), Error);
}

TEST(Io, FormatAndTable) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(io::format_double(1.0 / 3.0)), 1.0 / 3.0);
  const fs::path dir = testutil::scratch_dir("table");
  io::Table t({"a", "b"});
  t.row().add(std::string("x")).add(1.5);
  t.write(dir / "t.csv");
  EXPECT_EQ(slurp(dir / "t.csv"), "a,b\nx,1.5\n");
  t.row().add(Index{1});
  EXPECT_THROW(t.write(dir / "t2.csv"), Error);
}

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run_cli({"--help"}), 0);
  EXPECT_EQ(run_cli({}), cli::UsageError);
  EXPECT_EQ(run_cli({"deblur", "--no-such-flag"}), cli::UsageError);
  EXPECT_EQ(run_cli({"deblur", "--seed", "abc"}), cli::UsageError);
}

TEST(Cli, SolveValidation) {
  const fs::path dir = testutil::scratch_dir("cli_solve_bad");
  io::write_matrix_csv(dir / "F.csv", Matrix::Identity(3, 3));
  io::write_matrix_csv(dir / "F2.csv", Matrix::Identity(4, 4));
  io::write_vector_csv(dir / "y.csv", Vector::Ones(3));
  io::write_matrix_csv(dir / "R.csv", Matrix::Identity(3, 3));
  const std::string F = (dir / "F.csv").string(), F2 = (dir / "F2.csv").string();
  const std::string y = (dir / "y.csv").string(), R = (dir / "R.csv").string();
  const std::string out = (dir / "out").string();
  testing::internal::CaptureStderr();
  EXPECT_EQ(run_cli({"solve", "--F", F + "," + F2, "--y", y + "," + y, "--R", R, "--outdir", out}), cli::ValidationError);
  const std::string msg = testing::internal::GetCapturedStderr();
  EXPECT_NE(msg.find("4x4"), std::string::npos) << msg;
  EXPECT_EQ(std::count(msg.begin(), msg.end(), '\n'), 1);
  EXPECT_EQ(run_cli({"solve", "--F", F, "--y", y, "--outdir", out}), cli::ValidationError);
  EXPECT_EQ(run_cli({"solve", "--F", F, "--y", y, "--R", R, "--beta", "-1", "--outdir", out}), cli::ValidationError);
  EXPECT_EQ(run_cli({"solve", "--F", F, "--y", (dir / "nope.csv").string(), "--R", R, "--outdir", out}),
            cli::ValidationError);
}

TEST(Cli, SolveIdentityShrinksAndUq) {
  const fs::path dir = testutil::scratch_dir("cli_solve");
  io::write_matrix_csv(dir / "F.csv", Matrix::Identity(6, 6));
  io::write_vector_csv(dir / "y.csv", Vector::Unit(6, 0));
  io::write_matrix_csv(dir / "R.csv", Matrix::Identity(6, 6));
  const fs::path out = dir / "out";
  ASSERT_EQ(run_cli({"solve", "--algorithm", "ias", "--F", (dir / "F.csv").string(), "--y", (dir / "y.csv").string(), "--R",
                 (dir / "R.csv").string(), "--outdir", out.string(), "--uq", "--samples", "1000", "--level", "0.999"}),
            0);
  const Matrix x = io::read_matrix_csv(out / "x_hat.csv");
  Index arg = 0;
  x.col(0).maxCoeff(&arg);
  EXPECT_EQ(arg, 0);
  EXPECT_LE(x(0, 0), 1.0);
  std::ifstream in(out / "intervals_1.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 1 + 6);
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
  EXPECT_EQ(io::read_matrix_csv(out / "samples_1.csv").rows(), 1000);
}

TEST(Cli, DeblurDeterministic) {
  const fs::path a = testutil::scratch_dir("cli_deblur_a"), b = testutil::scratch_dir("cli_deblur_b");
  ASSERT_EQ(run_cli({"deblur", "--seed", "7", "--samples", "2000", "--outdir", a.string()}), 0);
  ASSERT_EQ(run_cli({"deblur", "--seed", "7", "--samples", "2000", "--outdir", b.string()}), 0);
  for (const char* f : {"signals.csv", "errors.csv", "estimates.csv", "theta.csv", "trace.csv", "edges.csv"}) {
    EXPECT_FALSE(slurp(a / f).empty()) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  EXPECT_EQ(slurp(a / "errors.csv").substr(0, 26), "algorithm,signal,rel_error");
}

TEST(Cli, SuccessHasBothAlgorithms) {
  const fs::path dir = testutil::scratch_dir("cli_success");
  ASSERT_EQ(run_cli({"success", "--L", "16", "--algs", "ias,mmv-ias", "--M", "40,100", "--trials", "2", "--outdir",
                 dir.string()}),
            0);
  const std::string csv = slurp(dir / "success.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "algorithm,L,M,avg_error,esp");
  EXPECT_NE(csv.find("\nias,16,40,"), std::string::npos);
  EXPECT_NE(csv.find("\nmmv-ias,16,100,"), std::string::npos);
}
