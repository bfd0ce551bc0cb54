#include "omplab/text_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "omplab/error.hpp"

namespace omplab {

std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// Reads the next non-blank line and splits it into whitespace tokens.
std::vector<std::string> next_tokens(std::istream& is, const char* what) {
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    if (!toks.empty()) return toks;
  }
  throw ValidationError(std::string(what) + ": unexpected end of input");
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError(std::string(what) + ": invalid number '" + s + "'");
  }
  return v;
}

std::size_t parse_size(const std::string& s, const char* what) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ValidationError(std::string(what) + ": invalid integer '" + s + "'");
  }
  return v;
}

template <class Writer>
void write_file(const std::filesystem::path& p, Writer&& w) {
  std::ofstream os(p);
  if (!os) throw ValidationError("cannot open " + p.string() + " for writing");
  w(os);
  if (!os) throw ValidationError("failed writing " + p.string());
}

std::ifstream open_input(const std::filesystem::path& p) {
  std::ifstream is(p);
  if (!is) throw ValidationError("cannot open " + p.string());
  return is;
}

}  // namespace

void write_matrix(std::ostream& os, const Matrix& a) {
  os << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) os << ' ';
      os << format_exact(a(i, j));
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is) {
  const auto header = next_tokens(is, "matrix");
  if (header.size() != 2) throw ValidationError("matrix: header must be 'rows cols'");
  const std::size_t rows = parse_size(header[0], "matrix rows");
  const std::size_t cols = parse_size(header[1], "matrix cols");
  if (rows == 0 || cols == 0) throw ValidationError("matrix: dimensions must be positive");
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto toks = next_tokens(is, "matrix");
    if (toks.size() != cols) {
      throw ValidationError("matrix: row " + std::to_string(i) + " has " +
                            std::to_string(toks.size()) + " values, expected " +
                            std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) data[j * rows + i] = parse_double(toks[j], "matrix");
  }
  return Matrix(rows, cols, std::move(data));
}

void write_vector(std::ostream& os, std::span<const double> v) {
  os << v.size() << '\n';
  for (double x : v) os << format_exact(x) << '\n';
}

Vector read_vector(std::istream& is) {
  const auto header = next_tokens(is, "vector");
  if (header.size() != 1) throw ValidationError("vector: header must be the length");
  const std::size_t n = parse_size(header[0], "vector length");
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto toks = next_tokens(is, "vector");
    if (toks.size() != 1) throw ValidationError("vector: expected one value per line");
    v[i] = parse_double(toks[0], "vector");
  }
  return v;
}

void write_signal(std::ostream& os, const SparseSignal& x) {
  os << x.dimension() << ' ' << x.sparsity() << '\n';
  for (std::size_t k = 0; k < x.sparsity(); ++k) {
    os << x.support()[k] << ' ' << format_exact(x.values()[k]) << '\n';
  }
}

SparseSignal read_signal(std::istream& is) {
  const auto header = next_tokens(is, "signal");
  if (header.size() != 2) throw ValidationError("signal: header must be 'n K'");
  const std::size_t n = parse_size(header[0], "signal n");
  const std::size_t k = parse_size(header[1], "signal K");
  IndexSet support(k);
  Vector values(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto toks = next_tokens(is, "signal");
    if (toks.size() != 2) throw ValidationError("signal: expected 'index value'");
    support[i] = parse_size(toks[0], "signal index");
    values[i] = parse_double(toks[1], "signal value");
  }
  return SparseSignal(n, std::move(support), std::move(values));
}

void save_matrix(const std::filesystem::path& p, const Matrix& a) {
  write_file(p, [&](std::ostream& os) { write_matrix(os, a); });
}
namespace {
void expect_end(std::istream& is, const std::filesystem::path& p) {
  is >> std::ws;
  if (!is.eof()) throw ValidationError(p.string() + ": unexpected trailing content");
}
}  // namespace

Matrix load_matrix(const std::filesystem::path& p) {
  auto is = open_input(p);
  Matrix out = read_matrix(is);
  expect_end(is, p);
  return out;
}
void save_vector(const std::filesystem::path& p, std::span<const double> v) {
  write_file(p, [&](std::ostream& os) { write_vector(os, v); });
}
Vector load_vector(const std::filesystem::path& p) {
  auto is = open_input(p);
  Vector out = read_vector(is);
  expect_end(is, p);
  return out;
}
void save_signal(const std::filesystem::path& p, const SparseSignal& x) {
  write_file(p, [&](std::ostream& os) { write_signal(os, x); });
}
SparseSignal load_signal(const std::filesystem::path& p) {
  auto is = open_input(p);
  SparseSignal out = read_signal(is);
  expect_end(is, p);
  return out;
}

void save_instance(const std::filesystem::path& dir, const ProblemInstance& inst) {
  std::filesystem::create_directories(dir);
  save_matrix(dir / "A.mat", inst.matrix);
  save_signal(dir / "x.sig", inst.signal);
  save_vector(dir / "v.vec", inst.noise);
  save_vector(dir / "y.vec", inst.measurement);
}

ProblemInstance load_instance(const std::filesystem::path& dir) {
  ProblemInstance inst{load_matrix(dir / "A.mat"), load_signal(dir / "x.sig"),
                       load_vector(dir / "v.vec"), load_vector(dir / "y.vec")};
  if (inst.matrix.cols() != inst.signal.dimension() || inst.noise.size() != inst.matrix.rows() ||
      inst.measurement.size() != inst.matrix.rows()) {
    throw ValidationError("instance " + dir.string() + ": inconsistent dimensions");
  }
  return inst;
}

void write_trace_csv(std::ostream& os, const OmpResult& result) {
  os << "k,selected_index,correlation,residual_norm,in_true_support\n";
  for (const auto& r : result.trace) {
    os << r.k << ',' << r.selected_index << ',' << format_exact(r.correlation) << ','
       << format_exact(r.residual_norm) << ',';
    if (r.in_true_support) os << (*r.in_true_support ? "true" : "false");
    os << '\n';
  }
}

}  // namespace omplab
