// Hand-rolled random generators and small reference oracles shared by the tests.
#pragma once

#include "sapsm/commands.hpp"
#include "sapsm/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdint>
#include <functional>
#include <limits>
#include <variant>
#include <vector>

namespace testing {

using sapsm::ConvexSet;
using sapsm::Problem;
using sapsm::Vector;

class Gen {
public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * sapsm::uniform_unit(eng_); }
  std::size_t index(std::size_t n) { return sapsm::uniform_index(eng_, n); }
  bool coin() { return index(2) == 1; }

  Vector vec(Eigen::Index dim, double lo, double hi) {
    Vector v(dim);
    for (Eigen::Index j = 0; j < dim; ++j) v[j] = uniform(lo, hi);
    return v;
  }

  Vector direction(Eigen::Index dim) { return sapsm::unit_direction(eng_, dim); }

  /// Uniform point of the ball B(center, r).
  Vector in_ball(const Vector& center, double r) {
    const double rho = r * std::pow(uniform(0.0, 1.0), 1.0 / static_cast<double>(center.size()));
    return center + rho * direction(center.size());
  }

  sapsm::Engine& engine() { return eng_; }

private:
  sapsm::Engine eng_;
};

/// A random set of any catalog kind in R^dim (simplex only when asked).
inline ConvexSet random_set(Gen& g, Eigen::Index dim, bool allow_simplex = true) {
  const std::size_t kind = g.index(allow_simplex ? 5 : 4);
  switch (kind) {
    case 0: return ConvexSet::halfspace(g.direction(dim) * g.uniform(0.5, 2.0), g.uniform(-1.0, 1.0));
    case 1: return ConvexSet::hyperplane(g.direction(dim) * g.uniform(0.5, 2.0), g.uniform(-1.0, 1.0));
    case 2: {
      const Vector lo = g.vec(dim, -2.0, 0.5);
      return ConvexSet::box(lo, lo + g.vec(dim, 0.0, 2.0));
    }
    case 3: return ConvexSet::ball(g.vec(dim, -1.0, 1.0), g.uniform(0.2, 2.0));
    default: return ConvexSet::simplex(dim, g.uniform(0.5, 3.0));
  }
}

/// A point of the set, built from its parameters rather than by projection.
inline Vector member_of(Gen& g, const ConvexSet& s) {
  const auto dim = s.dimension();
  return std::visit(
      [&](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, sapsm::Halfspace>) {
          const Vector z = g.vec(dim, -3.0, 3.0);
          const double excess = v.a.dot(z) - v.b;
          return excess <= 0.0 ? z : Vector(z - (excess + g.uniform(0.0, 1.0)) / v.a.squaredNorm() * v.a);
        } else if constexpr (std::is_same_v<T, sapsm::Hyperplane>) {
          const Vector z = g.vec(dim, -3.0, 3.0);
          return z - (v.a.dot(z) - v.b) / v.a.squaredNorm() * v.a;
        } else if constexpr (std::is_same_v<T, sapsm::Box>) {
          Vector z(dim);
          for (Eigen::Index j = 0; j < dim; ++j) z[j] = g.uniform(v.lo[j], v.hi[j]);
          return z;
        } else if constexpr (std::is_same_v<T, sapsm::Ball>) {
          return g.in_ball(v.center, v.radius);
        } else {
          // Normalized exponentials are a point of the simplex.
          Vector z(dim);
          for (Eigen::Index j = 0; j < dim; ++j) z[j] = -std::log(g.uniform(1e-12, 1.0));
          return v.scale * z / z.sum();
        }
      },
      s.variant());
}

struct FeasibleInstance {
  Problem problem;
  Vector interior;  // a point of C
  double M = 0.0;   // witness radius
};

/// m sets in R^dim sharing the point z, one of them Ball(0, M) (the bounded witness).
/// Halfspaces are given slack so that C has nonempty interior when `slack` > 0.
inline FeasibleInstance random_feasible_instance(Gen& g, Eigen::Index dim, std::size_t m, double M,
                                                 double slack = 0.1) {
  const Vector z = g.in_ball(Vector::Zero(dim), 0.5 * M);
  std::vector<ConvexSet> sets;
  const std::size_t ball_at = g.index(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (i == ball_at) {
      sets.push_back(ConvexSet::ball(Vector::Zero(dim), M));
      continue;
    }
    switch (g.index(3)) {
      case 0: {
        const Vector a = g.direction(dim);
        sets.push_back(ConvexSet::halfspace(a, a.dot(z) + g.uniform(slack, slack + 0.5)));
        break;
      }
      case 1: {
        const Vector lo = z - g.vec(dim, slack, 1.5);
        sets.push_back(ConvexSet::box(lo, z + g.vec(dim, slack, 1.5)));
        break;
      }
      default: {
        const Vector c = z + g.direction(dim) * g.uniform(0.0, 1.0);
        sets.push_back(ConvexSet::ball(c, (c - z).norm() + g.uniform(slack, slack + 1.0)));
      }
    }
  }
  return {Problem(std::move(sets), sapsm::BoundedWitness{ball_at, M}), z, M};
}

/// Random index vector over {0,...,m-1} of length 1..max_len.
inline sapsm::IndexVector random_string(Gen& g, std::size_t m, std::size_t max_len) {
  std::vector<std::size_t> idx(1 + g.index(max_len));
  for (auto& i : idx) i = g.index(m);
  return sapsm::IndexVector(idx);
}

/// Reference simplex projection by bisection on the threshold tau with
/// sum(max(x - tau, 0)) = scale.
inline Vector simplex_by_bisection(const Vector& x, double scale) {
  double lo = x.minCoeff() - scale;
  double hi = x.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((x.array() - mid).max(0.0).sum() > scale) lo = mid;
    else hi = mid;
  }
  return (x.array() - 0.5 * (lo + hi)).max(0.0).matrix();
}

/// Nearest feasible point on a 2-D grid of step h over [lo, hi]^2.
inline Vector grid_nearest(const std::function<bool(const Vector&)>& feasible, const Vector& x,
                           double lo, double hi, double h) {
  Vector best;
  double best_d = std::numeric_limits<double>::infinity();
  const long n = static_cast<long>(std::floor((hi - lo) / h + 1e-9));
  Vector p(2);
  for (long i = 0; i <= n; ++i) {
    for (long j = 0; j <= n; ++j) {
      p << lo + static_cast<double>(i) * h, lo + static_cast<double>(j) * h;
      if (!feasible(p)) continue;
      const double d = (p - x).norm();
      if (d < best_d) {
        best_d = d;
        best = p;
      }
    }
  }
  return best;
}

/// Is 0 in conv{points} for 2-D points? Checks every point, segment and triangle.
inline bool zero_in_hull_2d(const std::vector<Vector>& pts, double tol) {
  for (const auto& p : pts) {
    if (p.norm() <= tol) return true;
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Vector d = pts[j] - pts[i];
      const double dd = d.squaredNorm();
      if (dd == 0.0) continue;
      const double t = std::clamp(-pts[i].dot(d) / dd, 0.0, 1.0);
      if ((pts[i] + t * d).norm() <= tol) return true;
    }
  }
  auto cross = [](const Vector& a, const Vector& b) { return a[0] * b[1] - a[1] * b[0]; };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        if (std::abs(cross(pts[j] - pts[i], pts[k] - pts[i])) <= 1e-15) continue;
        const double s1 = cross(pts[i], pts[j]);
        const double s2 = cross(pts[j], pts[k]);
        const double s3 = cross(pts[k], pts[i]);
        if ((s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0)) return true;
      }
    }
  }
  return false;
}

inline bool bit_equal(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    if (std::memcmp(&a[j], &b[j], sizeof(double)) != 0) return false;
  }
  return true;
}

inline Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }
inline Vector v3(double a, double b, double c) { return (Vector(3) << a, b, c).finished(); }

}  // namespace testing
