#include "sapsm/convex_sets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace sapsm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_normal(const Vector& a, const char* what) {
  if (a.size() < 1) throw std::invalid_argument(std::string(what) + ": empty normal vector");
  require_finite(a, what);
  if (!(a.norm() > 0.0)) throw std::invalid_argument(std::string(what) + ": normal vector must be nonzero");
}

void require_finite_scalar(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite parameter");
}

Vector project_simplex(const Simplex& s, const Vector& x) {
  // Sort-and-threshold: find the largest rho with u_rho > (sum_{i<=rho} u_i - scale) / rho.
  std::vector<double> u(x.data(), x.data() + x.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - s.scale) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return (x.array() - theta).max(0.0).matrix();
}

}  // namespace

ConvexSet ConvexSet::halfspace(Vector a, double b) {
  require_normal(a, "halfspace");
  require_finite_scalar(b, "halfspace");
  return ConvexSet(Halfspace{std::move(a), b});
}

ConvexSet ConvexSet::hyperplane(Vector a, double b) {
  require_normal(a, "hyperplane");
  require_finite_scalar(b, "hyperplane");
  return ConvexSet(Hyperplane{std::move(a), b});
}

ConvexSet ConvexSet::box(Vector lo, Vector hi) {
  if (lo.size() < 1 || lo.size() != hi.size()) {
    throw std::invalid_argument("box: lo and hi must be nonempty and of equal length");
  }
  require_finite(lo, "box lo");
  require_finite(hi, "box hi");
  if ((lo.array() > hi.array()).any()) throw std::invalid_argument("box: requires lo <= hi componentwise");
  return ConvexSet(Box{std::move(lo), std::move(hi)});
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (center.size() < 1) throw std::invalid_argument("ball: empty center");
  require_finite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball: radius must be finite and > 0");
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::simplex(Eigen::Index dimension, double scale) {
  if (dimension < 1) throw std::invalid_argument("simplex: dimension must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("simplex: scale must be finite and > 0");
  return ConvexSet(Simplex{dimension, scale});
}

Eigen::Index ConvexSet::dimension() const {
  return std::visit(overloaded{
                        [](const Halfspace& s) { return s.a.size(); },
                        [](const Hyperplane& s) { return s.a.size(); },
                        [](const Box& s) { return s.lo.size(); },
                        [](const Ball& s) { return s.center.size(); },
                        [](const Simplex& s) { return s.dimension; },
                    },
                    v_);
}

std::string ConvexSet::kind() const {
  static const char* names[] = {"halfspace", "hyperplane", "box", "ball", "simplex"};
  return names[v_.index()];
}

Vector project(const ConvexSet& set, const Vector& x) {
  require_dimension(set.dimension(), x, "project");
  require_finite(x, "project");
  return std::visit(overloaded{
                        [&](const Halfspace& s) -> Vector {
                          const double excess = s.a.dot(x) - s.b;
                          if (excess <= 0.0) return x;
                          return x - (excess / s.a.squaredNorm()) * s.a;
                        },
                        [&](const Hyperplane& s) -> Vector {
                          return x - ((s.a.dot(x) - s.b) / s.a.squaredNorm()) * s.a;
                        },
                        [&](const Box& s) -> Vector {
                          return x.cwiseMax(s.lo).cwiseMin(s.hi);
                        },
                        [&](const Ball& s) -> Vector {
                          const Vector d = x - s.center;
                          const double n = d.norm();
                          if (n <= s.radius) return x;
                          return s.center + (d / n) * s.radius;
                        },
                        [&](const Simplex& s) -> Vector { return project_simplex(s, x); },
                    },
                    set.variant());
}

double distance(const ConvexSet& set, const Vector& x) {
  return (x - project(set, x)).norm();
}

bool contains(const ConvexSet& set, const Vector& x, double tol) {
  if (tol < 0.0) throw std::invalid_argument("contains: tol must be >= 0");
  return distance(set, x) <= tol;
}

std::optional<double> enclosing_radius(const ConvexSet& set) {
  return std::visit(overloaded{
                        [](const Halfspace&) -> std::optional<double> { return std::nullopt; },
                        [](const Hyperplane&) -> std::optional<double> { return std::nullopt; },
                        [](const Box& s) -> std::optional<double> {
                          return s.lo.cwiseAbs().cwiseMax(s.hi.cwiseAbs()).norm();
                        },
                        [](const Ball& s) -> std::optional<double> { return s.center.norm() + s.radius; },
                        [](const Simplex& s) -> std::optional<double> { return s.scale; },
                    },
                    set.variant());
}

Problem::Problem(std::vector<ConvexSet> sets, std::optional<BoundedWitness> witness)
    : sets_(std::move(sets)), witness_(witness) {
  if (sets_.empty()) throw std::invalid_argument("problem: at least one set is required");
  dim_ = sets_.front().dimension();
  for (std::size_t i = 1; i < sets_.size(); ++i) {
    if (sets_[i].dimension() != dim_) {
      throw std::invalid_argument("problem: set " + std::to_string(i) + " has dimension " +
                                  std::to_string(sets_[i].dimension()) + ", expected " +
                                  std::to_string(dim_));
    }
  }
  if (witness_) {
    if (witness_->index >= sets_.size()) {
      throw std::invalid_argument("problem: bounded witness index out of range");
    }
    if (!(witness_->radius > 0.0)) throw std::invalid_argument("problem: witness radius must be > 0");
    const auto r = enclosing_radius(sets_[witness_->index]);
    if (!r || *r > witness_->radius) {
      throw std::invalid_argument("problem: set " + std::to_string(witness_->index) +
                                  " is not provably inside B(0, " +
                                  std::to_string(witness_->radius) + ")");
    }
  }
}

std::vector<std::size_t> Problem::bounded_indices(double radius) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    const auto r = enclosing_radius(sets_[i]);
    if (r && *r <= radius) out.push_back(i);
  }
  return out;
}

}  // namespace sapsm
