#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sapsm {

/// Dense point in R^J. Every iterate, set parameter and subgradient uses it.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a caller violates the documented hypotheses of an operation
/// (as opposed to a bad argument shape, which is std::invalid_argument).
class PreconditionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Iterative method ran out of budget before reaching its tolerance.
/// Carries the best point found so callers can still inspect it.
class NonConvergenceError : public std::runtime_error {
public:
  NonConvergenceError(const std::string& what, Vector best, std::size_t sweeps)
      : std::runtime_error(what), best_(std::move(best)), sweeps_(sweeps) {}

  const Vector& best() const { return best_; }
  std::size_t sweeps() const { return sweeps_; }

private:
  Vector best_;
  std::size_t sweeps_;
};

inline bool all_finite(const Vector& x) { return x.allFinite(); }

inline void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
  }
}

inline void require_dimension(Eigen::Index expected, const Vector& x,
                              const char* what) {
  if (x.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                std::to_string(expected) + ", got " +
                                std::to_string(x.size()) + ")");
  }
}

inline Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> to_std(const Vector& v) {
  return {v.data(), v.data() + v.size()};
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace sapsm
