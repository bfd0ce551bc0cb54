#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "omplab/dense.hpp"
#include "omplab/omp.hpp"
#include "omplab/sensing.hpp"
#include "omplab/signal.hpp"

namespace omplab {

// Plain-text formats shared by the library, the CLI and serialized failures.
//
//   matrix (.mat):  "rows cols", then `rows` lines of `cols` values
//   vector (.vec):  "length", then one value per line
//   signal (.sig):  "n K", then K lines "index value"
//
// Values are written with 17 significant digits so a read recovers the exact
// double. Readers throw ValidationError on malformed or non-finite input.

/// printf("%.17g")
std::string format_exact(double v);
/// Shortest decimal that round-trips (std::to_chars).
std::string format_shortest(double v);

void write_matrix(std::ostream& os, const Matrix& a);
Matrix read_matrix(std::istream& is);
void write_vector(std::ostream& os, std::span<const double> v);
Vector read_vector(std::istream& is);
void write_signal(std::ostream& os, const SparseSignal& x);
SparseSignal read_signal(std::istream& is);

void save_matrix(const std::filesystem::path& p, const Matrix& a);
Matrix load_matrix(const std::filesystem::path& p);
void save_vector(const std::filesystem::path& p, std::span<const double> v);
Vector load_vector(const std::filesystem::path& p);
void save_signal(const std::filesystem::path& p, const SparseSignal& x);
SparseSignal load_signal(const std::filesystem::path& p);

/// Directory with A.mat, x.sig, v.vec, y.vec.
void save_instance(const std::filesystem::path& dir, const ProblemInstance& inst);
ProblemInstance load_instance(const std::filesystem::path& dir);

/// One row per iteration: k,selected_index,correlation,residual_norm,in_true_support
void write_trace_csv(std::ostream& os, const OmpResult& result);

}  // namespace omplab
