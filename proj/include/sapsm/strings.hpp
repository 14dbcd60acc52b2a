#pragma once

#include "sapsm/convex_sets.hpp"

#include <cstddef>
#include <vector>

namespace sapsm {

/// Ordered tuple of constraint indices (t_1, ..., t_q). The string operator
/// applies the projection onto C_{t_1} first and C_{t_q} last.
class IndexVector {
public:
  IndexVector(std::vector<std::size_t> indices);  // NOLINT: implicit from a list is intended
  IndexVector(std::initializer_list<std::size_t> indices)
      : IndexVector(std::vector<std::size_t>(indices)) {}

  std::size_t length() const { return idx_.size(); }
  const std::vector<std::size_t>& indices() const { return idx_; }
  std::size_t operator[](std::size_t u) const { return idx_[u]; }
  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

  bool operator==(const IndexVector&) const = default;

private:
  std::vector<std::size_t> idx_;
};

/// Bounds defining the admissible amalgamators: every string has length at
/// most q_bar and every weight is at least delta.
struct MStarParams {
  double delta = 0.0;
  std::size_t q_bar = 0;
  std::size_t m = 0;

  /// Throws std::invalid_argument unless 0 < delta < 1/m and q_bar >= m.
  void validate() const;
};

inline constexpr double kWeightRenormalizeTol = 1e-9;
inline constexpr double kWeightSumTol = 1e-12;

/// A fit set of strings with positive weights summing to one.
///
/// The constructor renormalizes weights whose sum is off by at most 1e-9 and
/// rejects anything further away, non-positive weights, out-of-range indices
/// and sets of strings that miss some index in [0, m).
class Amalgamator {
public:
  Amalgamator(std::vector<IndexVector> strings, std::vector<double> weights, std::size_t m);

  const std::vector<IndexVector>& strings() const { return strings_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return strings_.size(); }
  std::size_t num_sets() const { return m_; }

  /// The single string (0, 1, ..., m-1) with weight 1.
  static Amalgamator cyclic(std::size_t m);
  /// m singleton strings (i) with equal weights 1/m.
  static Amalgamator simultaneous(std::size_t m);

private:
  std::vector<IndexVector> strings_;
  std::vector<double> weights_;
  std::size_t m_;
};

/// P[t](x): successive projections onto C_{t_1}, ..., C_{t_q}.
Vector apply_string(const Problem& problem, const IndexVector& t, const Vector& x);

/// True iff every index in [0, m) occurs in some string.
bool is_fit(const std::vector<IndexVector>& strings, std::size_t m);

/// Fit, and every string visits at least one set whose enclosing radius is <= radius.
/// Only sets with a computable enclosing radius count.
bool is_m_fit(const std::vector<IndexVector>& strings, const Problem& problem, double radius);

/// Membership of `a` in the admissible class for `params`.
bool validate_amalgamator(const Amalgamator& a, const MStarParams& params);

/// Weighted average of the string end-points, accumulated in stored order.
Vector apply_amalgamator(const Problem& problem, const Amalgamator& a, const Vector& x);

}  // namespace sapsm
