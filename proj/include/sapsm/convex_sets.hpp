#pragma once

#include "sapsm/types.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sapsm {

/// {y : <a, y> <= b}
struct Halfspace {
  Vector a;
  double b = 0.0;
};

/// {y : <a, y> = b}
struct Hyperplane {
  Vector a;
  double b = 0.0;
};

/// {y : lo <= y <= hi} componentwise.
struct Box {
  Vector lo;
  Vector hi;
};

/// Closed ball {y : ||y - center|| <= radius}.
struct Ball {
  Vector center;
  double radius = 1.0;
};

/// Scaled probability simplex {y >= 0 : sum(y) = scale} in R^dimension.
struct Simplex {
  Eigen::Index dimension = 1;
  double scale = 1.0;
};

/// A closed convex set from the catalog. Construct through the named factories,
/// which reject degenerate parameters; a ConvexSet is therefore never empty.
class ConvexSet {
public:
  using Variant = std::variant<Halfspace, Hyperplane, Box, Ball, Simplex>;

  static ConvexSet halfspace(Vector a, double b);
  static ConvexSet hyperplane(Vector a, double b);
  static ConvexSet box(Vector lo, Vector hi);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet simplex(Eigen::Index dimension, double scale);

  Eigen::Index dimension() const;
  const Variant& variant() const { return v_; }
  /// "halfspace", "hyperplane", "box", "ball" or "simplex".
  std::string kind() const;

private:
  explicit ConvexSet(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Nearest point of `set` to `x`.
Vector project(const ConvexSet& set, const Vector& x);

/// Euclidean distance from `x` to `set`.
double distance(const ConvexSet& set, const Vector& x);

inline constexpr double kDefaultMembershipTol = 1e-9;

/// True iff distance(set, x) <= tol.
bool contains(const ConvexSet& set, const Vector& x, double tol = kDefaultMembershipTol);

/// Radius M of the smallest origin-centred ball known to contain the set, or
/// nothing for unbounded variants.
std::optional<double> enclosing_radius(const ConvexSet& set);

/// Index s and radius M with C_s inside B(0, M).
struct BoundedWitness {
  std::size_t index = 0;
  double radius = 0.0;
};

/// The feasibility problem: find a point of the intersection of `sets`.
/// Set indices are 0-based throughout the library.
class Problem {
public:
  explicit Problem(std::vector<ConvexSet> sets,
                   std::optional<BoundedWitness> witness = std::nullopt);

  Eigen::Index dimension() const { return dim_; }
  std::size_t size() const { return sets_.size(); }
  const ConvexSet& set(std::size_t i) const { return sets_.at(i); }
  const std::vector<ConvexSet>& sets() const { return sets_; }
  const std::optional<BoundedWitness>& witness() const { return witness_; }

  /// Indices whose sets fit inside B(0, radius) by a computable enclosing radius.
  std::vector<std::size_t> bounded_indices(double radius) const;

private:
  std::vector<ConvexSet> sets_;
  std::optional<BoundedWitness> witness_;
  Eigen::Index dim_ = 0;
};

}  // namespace sapsm
