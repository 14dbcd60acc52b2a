#include "sapsm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sapsm {

IntersectionProjection project_intersection(const Problem& problem, const Vector& x,
                                            double tol, std::size_t max_sweeps) {
  require_dimension(problem.dimension(), x, "project_intersection");
  require_finite(x, "project_intersection");
  if (!(tol > 0.0)) throw std::invalid_argument("project_intersection: tol must be > 0");

  const std::size_t m = problem.size();
  std::vector<Vector> corr(m, Vector::Zero(x.size()));
  Vector y = x;
  for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    const Vector start = y;
    double corr_change = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Vector z = y + corr[i];
      y = project(problem.set(i), z);
      const Vector next = z - y;
      corr_change += (next - corr[i]).squaredNorm();
      corr[i] = next;
    }
    if ((y - start).norm() <= tol && std::sqrt(corr_change) <= tol && proximity(problem, y) <= tol) {
      return {y, sweep};
    }
  }
  throw NonConvergenceError("project_intersection: no convergence within " +
                                std::to_string(max_sweeps) + " sweeps",
                            y, max_sweeps);
}

double distance_to_intersection(const Problem& problem, const Vector& x, double tol,
                                std::size_t max_sweeps) {
  return (x - project_intersection(problem, x, tol, max_sweeps).point).norm();
}

MinimizationResult classical_psm(const Problem& problem, const Objective& obj,
                                 const StepSizeRule& rule, const Vector& x0,
                                 std::size_t max_iters, double proj_tol, double zero_tol) {
  require_dimension(problem.dimension(), x0, "classical_psm x0");
  if (obj.dimension() != problem.dimension()) {
    throw std::invalid_argument("classical_psm: objective and problem dimensions differ");
  }
  if (auto len = rule.length(); len && *len < max_iters) {
    throw std::invalid_argument("classical_psm: explicit step rule shorter than max_iters");
  }

  MinimizationResult result;
  Vector x = x0;
  for (std::size_t k = 0;; ++k) {
    TraceRecord rec = make_record(problem, k, x, 0);
    StepRecord step;
    step.phi = evaluate(obj, x);
    const auto len = rule.length();
    step.alpha = (!len || k < *len) ? rule.alpha(k) : 0.0;
    step.zero_branch = has_zero_subgradient(obj, x, zero_tol);
    Vector displaced = x;
    if (!step.zero_branch) {
      const Vector s = subgradient(obj, x);
      step.snorm = s.norm();
      displaced = x - (step.alpha / step.snorm) * s;
    }
    rec.step = step;
    result.trace.records.push_back(std::move(rec));
    if (k == max_iters) break;
    (step.zero_branch ? result.zero_branch_count : result.descent_branch_count) += 1;
    x = project_intersection(problem, displaced, proj_tol).point;
  }
  result.final_iterate = x;
  result.report_threshold = 10.0 * proj_tol;
  result.best_value = std::numeric_limits<double>::infinity();
  for (const auto& rec : result.trace.records) {
    if (rec.proximity <= result.report_threshold && rec.step->phi < result.best_value) {
      result.best_value = rec.step->phi;
      result.best_iterate = rec.x;
      result.best_found = true;
    }
  }
  if (!result.best_found) {
    result.best_iterate = x;
    result.best_value = result.trace.records.back().step->phi;
  }
  return result;
}

GridBounds enclosing_grid_bounds(const Problem& problem) {
  std::optional<double> r;
  if (problem.witness()) {
    r = problem.witness()->radius;
  } else {
    for (const auto& s : problem.sets()) {
      const auto e = enclosing_radius(s);
      if (e && (!r || *e < *r)) r = e;
    }
  }
  if (!r) throw std::invalid_argument("enclosing_grid_bounds: no bounded set in the problem");
  const Vector ones = Vector::Ones(problem.dimension());
  return {-*r * ones, *r * ones};
}

namespace {

struct GridResult {
  Vector best;
  double value = std::numeric_limits<double>::infinity();
  bool found = false;
};

using ObjectiveFn = std::function<double(const Vector&)>;

constexpr double kProjectedCandidateTol = 1e-10;
constexpr std::size_t kCandidateMaxSweeps = 10000;

// Visits lo + i*h for every multi-index i with lo + i*h <= hi, in lexicographic order.
template <class F>
void for_each_grid_point(const Vector& lo, const Vector& hi, double h, F&& f) {
  const auto dim = lo.size();
  std::vector<long> count(static_cast<std::size_t>(dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    count[static_cast<std::size_t>(j)] = static_cast<long>(std::floor((hi[j] - lo[j]) / h + 1e-9)) + 1;
  }
  std::vector<long> idx(static_cast<std::size_t>(dim), 0);
  Vector p(dim);
  while (true) {
    for (Eigen::Index j = 0; j < dim; ++j) p[j] = lo[j] + static_cast<double>(idx[static_cast<std::size_t>(j)]) * h;
    f(p);
    Eigen::Index j = dim - 1;
    while (j >= 0) {
      auto& c = idx[static_cast<std::size_t>(j)];
      if (++c < count[static_cast<std::size_t>(j)]) break;
      c = 0;
      --j;
    }
    if (j < 0) return;
  }
}

// Candidates are the feasible grid points plus the projections onto C of grid
// points within h sqrt(J) of every set, which samples the boundary of C exactly.
// Strict improvement only, so ties keep the lexicographically first candidate.
GridResult grid_search(const Problem& problem, const ObjectiveFn& f, const Vector& lo,
                       const Vector& hi, double h, double feas_tol) {
  const double near = std::max(feas_tol, h * std::sqrt(static_cast<double>(lo.size())));
  const double accept = std::max(feas_tol, kProjectedCandidateTol);
  GridResult r;
  for_each_grid_point(lo, hi, h, [&](const Vector& p) {
    Vector q = p;
    const double prox = proximity(problem, p);
    if (prox > feas_tol) {
      if (prox > near) return;
      try {
        q = project_intersection(problem, p, kDefaultProjTol, kCandidateMaxSweeps).point;
      } catch (const NonConvergenceError&) {
        return;
      }
      if (proximity(problem, q) > accept) return;
    }
    const double v = f(q);
    if (v < r.value) {
      r.value = v;
      r.best = q;
      r.found = true;
    }
  });
  return r;
}

struct RefinedResult {
  GridResult res;
  double h = 0.0;
};

RefinedResult refined_search(const Problem& problem, const ObjectiveFn& f, const GridBounds& bounds,
                             double grid_step, std::size_t refine_rounds, double feas_tol) {
  const auto dim = problem.dimension();
  double h = grid_step;
  GridResult res = grid_search(problem, f, bounds.lo, bounds.hi, h, feas_tol);
  if (!res.found) {
    throw std::runtime_error("brute_force_minimize: no feasible candidate; C may be empty or thinner than the grid");
  }
  for (std::size_t round = 0; round < refine_rounds; ++round) {
    const double half = 5.0 * h;
    h /= 10.0;
    // Re-centre until the incumbent sits strictly inside the search window.
    for (int walk = 0; walk < 200; ++walk) {
      const Vector win_lo = (res.best.array() - half).max(bounds.lo.array()).matrix();
      const Vector win_hi = (res.best.array() + half).min(bounds.hi.array()).matrix();
      GridResult next = grid_search(problem, f, win_lo, win_hi, h, feas_tol);
      if (next.found && next.value <= res.value) res = next;
      bool on_edge = false;
      for (Eigen::Index j = 0; j < dim; ++j) {
        // The last grid point of a window may fall up to h short of win_hi.
        const bool at_lo = res.best[j] - win_lo[j] < 1.5 * h && win_lo[j] > bounds.lo[j];
        const bool at_hi = win_hi[j] - res.best[j] < 1.5 * h && win_hi[j] < bounds.hi[j];
        on_edge = on_edge || at_lo || at_hi;
      }
      if (!on_edge) break;
    }
  }
  return {res, h};
}

}  // namespace

OracleSolution brute_force_minimize(const Problem& problem, const Objective& obj,
                                    const GridBounds& bounds, double grid_step,
                                    std::size_t refine_rounds, double feas_tol,
                                    double uniqueness_radius) {
  const auto dim = problem.dimension();
  if (dim > 3) throw std::invalid_argument("brute_force_minimize: only J <= 3 is supported");
  if (obj.dimension() != dim || bounds.lo.size() != dim || bounds.hi.size() != dim) {
    throw std::invalid_argument("brute_force_minimize: dimension mismatch");
  }
  if (!(grid_step > 0.0)) throw std::invalid_argument("brute_force_minimize: grid_step must be > 0");

  const ObjectiveFn f = [&](const Vector& p) { return evaluate(obj, p); };
  const RefinedResult base = refined_search(problem, f, bounds, grid_step, refine_rounds, feas_tol);

  // Tilt probe: a unique minimizer barely moves when phi is tilted by +-eta e_j,
  // while a non-singleton SOL lets the tilted minimizers slide apart.
  const double eta = kUniquenessTilt * std::max(1.0, subgradient(obj, base.res.best).norm());
  double spread = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (double sign : {-1.0, 1.0}) {
      const ObjectiveFn tilted = [&](const Vector& p) { return evaluate(obj, p) + sign * eta * p[j]; };
      const RefinedResult t = refined_search(problem, tilted, bounds, grid_step, refine_rounds, feas_tol);
      spread = std::max(spread, (t.res.best - base.res.best).norm());
    }
  }

  OracleSolution out;
  out.minimizer = base.res.best;
  out.min_value = base.res.value;
  out.method = "grid";
  out.accuracy = base.h;
  out.tilt_spread = spread;
  out.unique = spread <= uniqueness_radius;
  return out;
}

double distance_to_solution_set(const OracleSolution& oracle, const Objective& obj,
                                const Problem& problem, const Vector& x, double value_tol) {
  if (!oracle.unique) throw std::invalid_argument("distance_to_solution_set: oracle minimizer is not unique");
  if (std::abs(evaluate(obj, oracle.minimizer) - oracle.min_value) > value_tol) {
    throw std::invalid_argument("distance_to_solution_set: oracle value does not match the objective");
  }
  require_dimension(problem.dimension(), x, "distance_to_solution_set");
  return (x - oracle.minimizer).norm();
}

}  // namespace sapsm
