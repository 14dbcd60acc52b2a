#include "sapsm/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sapsm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double spectral_norm(const Matrix& Q) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> piece_values(const MaxAffine& f, const Vector& x) {
  std::vector<double> v;
  v.reserve(f.pieces.size());
  for (const auto& p : f.pieces) v.push_back(p.a.dot(x) + p.b);
  return v;
}

}  // namespace

Objective Objective::linear(Vector c) {
  if (c.size() < 1) throw std::invalid_argument("linear objective: empty coefficient vector");
  require_finite(c, "linear objective");
  return Objective(Linear{std::move(c)});
}

Objective Objective::quadratic(Matrix Q, Vector c) {
  if (c.size() < 1 || Q.rows() != c.size() || Q.cols() != c.size()) {
    throw std::invalid_argument("quadratic objective: Q must be J x J with J = len(c) >= 1");
  }
  if (!Q.allFinite()) throw std::invalid_argument("quadratic objective: non-finite Q");
  require_finite(c, "quadratic objective");
  const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("quadratic objective: Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("quadratic objective: Q must be positive semidefinite (min eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
  return Objective(Quadratic{std::move(Q), std::move(c)});
}

Objective Objective::max_affine(std::vector<AffinePiece> pieces) {
  if (pieces.empty()) throw std::invalid_argument("max-affine objective: no pieces");
  const auto dim = pieces.front().a.size();
  if (dim < 1) throw std::invalid_argument("max-affine objective: empty slope vector");
  for (const auto& p : pieces) {
    if (p.a.size() != dim) throw std::invalid_argument("max-affine objective: pieces differ in dimension");
    require_finite(p.a, "max-affine objective");
    if (!std::isfinite(p.b)) throw std::invalid_argument("max-affine objective: non-finite offset");
  }
  return Objective(MaxAffine{std::move(pieces)});
}

Objective Objective::one_norm(Vector weights) {
  if (weights.size() < 1) throw std::invalid_argument("one-norm objective: empty weights");
  require_finite(weights, "one-norm objective");
  if ((weights.array() < 0.0).any()) throw std::invalid_argument("one-norm objective: weights must be >= 0");
  return Objective(OneNorm{std::move(weights)});
}

Eigen::Index Objective::dimension() const {
  return std::visit(overloaded{
                        [](const Linear& f) { return f.c.size(); },
                        [](const Quadratic& f) { return f.c.size(); },
                        [](const MaxAffine& f) { return f.pieces.front().a.size(); },
                        [](const OneNorm& f) { return f.weights.size(); },
                    },
                    v_);
}

std::string Objective::kind() const {
  static const char* names[] = {"linear", "quadratic", "max_affine", "one_norm"};
  return names[v_.index()];
}

double evaluate(const Objective& obj, const Vector& x) {
  require_dimension(obj.dimension(), x, "evaluate");
  return std::visit(overloaded{
                        [&](const Linear& f) { return f.c.dot(x); },
                        [&](const Quadratic& f) { return 0.5 * x.dot(f.Q * x) + f.c.dot(x); },
                        [&](const MaxAffine& f) {
                          const auto v = piece_values(f, x);
                          return *std::max_element(v.begin(), v.end());
                        },
                        [&](const OneNorm& f) { return f.weights.dot(x.cwiseAbs()); },
                    },
                    obj.variant());
}

Vector subgradient(const Objective& obj, const Vector& x) {
  require_dimension(obj.dimension(), x, "subgradient");
  return std::visit(overloaded{
                        [&](const Linear& f) -> Vector { return f.c; },
                        [&](const Quadratic& f) -> Vector { return f.Q * x + f.c; },
                        [&](const MaxAffine& f) -> Vector {
                          const auto v = piece_values(f, x);
                          // max_element returns the first maximizer.
                          const auto i = std::max_element(v.begin(), v.end()) - v.begin();
                          return f.pieces[static_cast<std::size_t>(i)].a;
                        },
                        [&](const OneNorm& f) -> Vector {
                          Vector s(x.size());
                          for (Eigen::Index j = 0; j < x.size(); ++j) {
                            s[j] = x[j] > 0.0 ? f.weights[j] : (x[j] < 0.0 ? -f.weights[j] : 0.0);
                          }
                          return s;
                        },
                    },
                    obj.variant());
}

bool has_zero_subgradient(const Objective& obj, const Vector& x, double tol) {
  if (tol < 0.0) throw std::invalid_argument("has_zero_subgradient: tol must be >= 0");
  require_dimension(obj.dimension(), x, "has_zero_subgradient");
  return std::visit(overloaded{
                        [&](const Linear& f) { return f.c.norm() <= tol; },
                        [&](const Quadratic& f) { return (f.Q * x + f.c).norm() <= tol; },
                        [&](const MaxAffine& f) {
                          const auto v = piece_values(f, x);
                          const double top = *std::max_element(v.begin(), v.end());
                          std::vector<Vector> active;
                          for (std::size_t i = 0; i < v.size(); ++i) {
                            if (v[i] >= top - tol) active.push_back(f.pieces[i].a);
                          }
                          return min_norm_in_hull(active).norm() <= tol;
                        },
                        [&](const OneNorm& f) {
                          for (Eigen::Index j = 0; j < x.size(); ++j) {
                            if (f.weights[j] > 0.0 && std::abs(x[j]) > tol) return false;
                          }
                          return true;
                        },
                    },
                    obj.variant());
}

LipschitzBound lipschitz_on_ball(const Objective& obj, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("lipschitz_on_ball: radius must be > 0");
  const double raw = std::visit(overloaded{
                                    [](const Linear& f) { return f.c.norm(); },
                                    [&](const Quadratic& f) { return spectral_norm(f.Q) * radius + f.c.norm(); },
                                    [](const MaxAffine& f) {
                                      double best = 0.0;
                                      for (const auto& p : f.pieces) best = std::max(best, p.a.norm());
                                      return best;
                                    },
                                    [](const OneNorm& f) { return f.weights.sum(); },
                                },
                                obj.variant());
  return {std::max(raw, kLipschitzFloor), radius};
}

Vector min_norm_in_hull(const std::vector<Vector>& points, double tol) {
  if (points.empty()) throw std::invalid_argument("min_norm_in_hull: no points");
  const auto n = points.size();
  const auto dim = points.front().size();
  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, p.squaredNorm());
  scale = std::max(scale, 1.0);

  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (points[i].squaredNorm() < points[start].squaredNorm()) start = i;
  }
  std::vector<std::size_t> active{start};
  std::vector<double> lambda{1.0};
  Vector x = points[start];

  const auto combine = [&](const std::vector<double>& coef) {
    Vector y = Vector::Zero(dim);
    for (std::size_t s = 0; s < active.size(); ++s) y += coef[s] * points[active[s]];
    return y;
  };

  for (std::size_t major = 0; major < 10 * n + 10; ++major) {
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x.dot(points[i]);
      if (d < best) {
        best = d;
        j = i;
      }
    }
    if (x.squaredNorm() - best <= tol * scale) return x;
    if (std::find(active.begin(), active.end(), j) != active.end()) return x;
    active.push_back(j);
    lambda.push_back(0.0);

    for (std::size_t minor = 0; minor <= n + 1; ++minor) {
      // Minimum-norm point of the affine hull of the active points.
      const auto s = static_cast<Eigen::Index>(active.size());
      Matrix kkt = Matrix::Zero(s + 1, s + 1);
      for (Eigen::Index a = 0; a < s; ++a) {
        for (Eigen::Index b = 0; b < s; ++b) kkt(a, b) = points[active[a]].dot(points[active[b]]);
        kkt(a, s) = 1.0;
        kkt(s, a) = 1.0;
      }
      Vector rhs = Vector::Zero(s + 1);
      rhs[s] = 1.0;
      const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      std::vector<double> mu(sol.data(), sol.data() + s);

      if (std::all_of(mu.begin(), mu.end(), [](double v) { return v > 0.0; })) {
        lambda = mu;
        x = combine(lambda);
        break;
      }
      double theta = 1.0;
      for (std::size_t a = 0; a < mu.size(); ++a) {
        if (mu[a] <= 0.0) theta = std::min(theta, lambda[a] / (lambda[a] - mu[a]));
      }
      for (std::size_t a = 0; a < mu.size(); ++a) lambda[a] = (1.0 - theta) * lambda[a] + theta * mu[a];
      // Drop the points whose coefficient hit zero (at least one does).
      std::size_t drop = 0;
      for (std::size_t a = 1; a < lambda.size(); ++a) {
        if (lambda[a] < lambda[drop]) drop = a;
      }
      std::vector<std::size_t> keep_idx;
      std::vector<double> keep_lambda;
      for (std::size_t a = 0; a < lambda.size(); ++a) {
        if (a != drop && lambda[a] > 0.0) {
          keep_idx.push_back(active[a]);
          keep_lambda.push_back(lambda[a]);
        }
      }
      double sum = 0.0;
      for (double v : keep_lambda) sum += v;
      for (double& v : keep_lambda) v /= sum;
      active = std::move(keep_idx);
      lambda = std::move(keep_lambda);
      x = combine(lambda);
    }
  }
  return x;
}

}  // namespace sapsm
