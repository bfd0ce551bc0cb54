#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "omplab/error.hpp"
#include "omplab/omp.hpp"
#include "omplab/sensing.hpp"
#include "omplab/text_io.hpp"

using namespace omplab;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("omplab_test_" + name);
  fs::remove_all(p);
  return p;
}
}  // namespace

TEST(TextIo, MatrixRoundTripIsExact) {
  const Matrix a = gaussian_sensing_matrix(5, 7, 3, false);
  std::stringstream ss;
  write_matrix(ss, a);
  EXPECT_EQ(read_matrix(ss), a);
}

TEST(TextIo, MatrixLayoutIsRowWise) {
  std::stringstream ss;
  write_matrix(ss, Matrix(2, 2, {1, 3, 2, 4}));
  EXPECT_EQ(ss.str(), "2 2\n1 2\n3 4\n");
}

TEST(TextIo, VectorAndSignalRoundTrip) {
  const Vector v{0.1, -1e-300, 12345.678901234567};
  std::stringstream vs;
  write_vector(vs, v);
  EXPECT_EQ(read_vector(vs), v);
  const SparseSignal x(9, {2, 5}, {0.3, -7.25});
  std::stringstream xs;
  write_signal(xs, x);
  EXPECT_EQ(xs.str().substr(0, 4), "9 2\n");
  EXPECT_EQ(read_signal(xs), x);
}

TEST(TextIo, MalformedInputRejected) {
  std::stringstream bad1("2 2\n1 2\n3\n");
  EXPECT_THROW(read_matrix(bad1), ValidationError);
  std::stringstream bad2("2 2\n1 2\n3 nan\n");
  EXPECT_THROW(read_matrix(bad2), ValidationError);
  std::stringstream bad3("4 1\n7 1.0\n");
  EXPECT_THROW(read_signal(bad3), ValidationError);
  EXPECT_THROW(load_matrix("/nonexistent/file.mat"), ValidationError);
}

TEST(TextIo, FilesWithTrailingContentRejected) {
  const fs::path dir = scratch("trailing");
  fs::create_directories(dir);
  save_matrix(dir / "ok.mat", Matrix::identity(2));
  EXPECT_EQ(load_matrix(dir / "ok.mat"), Matrix::identity(2));
  {
    std::ofstream os(dir / "bad.mat");
    os << "2 2\n1 0\n0 1\n1\n";
  }
  EXPECT_THROW(load_matrix(dir / "bad.mat"), ValidationError);
  {
    std::ofstream os(dir / "bad.vec");
    os << "2\n1 2 3\n";
  }
  EXPECT_THROW(load_vector(dir / "bad.vec"), ValidationError);
  fs::remove_all(dir);
}

TEST(TextIo, InstanceDirectoryRoundTrip) {
  const Matrix a = gaussian_sensing_matrix(6, 9, 8, true);
  const SparseSignal x = random_sparse_signal(9, 2, 1.0, 2.0, 4);
  const ProblemInstance inst = generate_measurement(a, x, {NoiseKind::l2_ball, 0.3, 5});
  const fs::path dir = scratch("instance");
  save_instance(dir, inst);
  for (const char* f : {"A.mat", "x.sig", "v.vec", "y.vec"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
  const ProblemInstance back = load_instance(dir);
  EXPECT_EQ(back.matrix, inst.matrix);
  EXPECT_EQ(back.signal, inst.signal);
  EXPECT_EQ(back.noise, inst.noise);
  EXPECT_EQ(back.measurement, inst.measurement);
  fs::remove_all(dir);
}

TEST(TextIo, TraceCsv) {
  const OmpResult r = omp_run(Matrix::identity(3), Vector{0, 2, 0}, StopRule::residual_at_most(0.0),
                              {IndexSet{1}, kDefaultRankTolerance});
  std::stringstream ss;
  write_trace_csv(ss, r);
  EXPECT_EQ(ss.str(), "k,selected_index,correlation,residual_norm,in_true_support\n1,1,2,0,true\n");
}

TEST(TextIo, FormatExactKeepsSeventeenDigits) {
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_exact(v)), v);
  EXPECT_EQ(format_shortest(0.5), "0.5");
}
