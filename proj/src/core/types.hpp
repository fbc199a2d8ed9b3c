#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace incl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical thresholds shared by every check in the toolkit.
///
/// `eq_tol` bounds identity defects, `rank_tol` is the singular-value cutoff
/// for every rank or dimension decision, `sample_count` drives randomized
/// positivity checks and `seed` makes those samples reproducible.
struct Tolerance {
  double eq_tol = 1e-9;
  double rank_tol = 1e-10;
  int sample_count = 64;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class ErrorKind {
  InvalidArgument,
  Conformance,
  Parse,
  Verification,
  InfiniteIndex,
  Precondition,
  Limit,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

/// `defect <= tol * max(1, scale)`.
inline bool within(double defect, double tol, double scale = 1.0) {
  return defect <= tol * (scale > 1.0 ? scale : 1.0);
}

}  // namespace incl
