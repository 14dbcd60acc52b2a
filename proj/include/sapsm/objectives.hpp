#pragma once

#include "sapsm/types.hpp"

#include <string>
#include <variant>
#include <vector>

namespace sapsm {

/// phi(x) = <c, x>
struct Linear {
  Vector c;
};

/// phi(x) = 1/2 x'Qx + <c, x>, Q symmetric positive semidefinite.
struct Quadratic {
  Matrix Q;
  Vector c;
};

struct AffinePiece {
  Vector a;
  double b = 0.0;
};

/// phi(x) = max_i (<a_i, x> + b_i)
struct MaxAffine {
  std::vector<AffinePiece> pieces;
};

/// phi(x) = sum_j w_j |x_j|, w >= 0.
struct OneNorm {
  Vector weights;
};

/// Convex objective from the catalog, validated at construction.
class Objective {
public:
  using Variant = std::variant<Linear, Quadratic, MaxAffine, OneNorm>;

  static Objective linear(Vector c);
  /// Rejects Q that is not symmetric or has an eigenvalue below -1e-10.
  static Objective quadratic(Matrix Q, Vector c);
  static Objective max_affine(std::vector<AffinePiece> pieces);
  static Objective one_norm(Vector weights);

  Eigen::Index dimension() const;
  const Variant& variant() const { return v_; }
  std::string kind() const;

private:
  explicit Objective(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

double evaluate(const Objective& obj, const Vector& x);

/// A deterministic element of the subdifferential. At kinks: MaxAffine takes
/// the lowest-index maximizing piece, OneNorm uses sign(x_j) with sign(0) = 0.
Vector subgradient(const Objective& obj, const Vector& x);

inline constexpr double kDefaultZeroSubgradientTol = 1e-12;

/// Decides whether 0 lies in the subdifferential at x.
///
/// For MaxAffine the pieces within `tol` of the maximum are active, and the
/// test asks whether the minimum-norm point of the hull of their gradients has
/// norm <= tol.
bool has_zero_subgradient(const Objective& obj, const Vector& x,
                          double tol = kDefaultZeroSubgradientTol);

/// Lipschitz constant L > 1 valid on B(0, ball_radius).
struct LipschitzBound {
  double value = 1.0;
  double ball_radius = 0.0;
};

inline constexpr double kLipschitzFloor = 1.0 + 1e-9;

LipschitzBound lipschitz_on_ball(const Objective& obj, double radius);

/// Minimum-norm point of conv{points[i]} (Wolfe's algorithm). Exposed for tests.
Vector min_norm_in_hull(const std::vector<Vector>& points, double tol = 1e-14);

}  // namespace sapsm
