#pragma once

#include "sapsm/sa_psm.hpp"

#include <string>

namespace sapsm {

struct IntersectionProjection {
  Vector point;
  std::size_t sweeps = 0;
};

inline constexpr double kDefaultProjTol = 1e-12;
inline constexpr std::size_t kDefaultMaxSweeps = 1'000'000;

/// Metric projection onto the intersection of the problem's sets by Dykstra's
/// alternating scheme with correction terms.
///
/// Stops once proximity, the change of the iterate over a sweep and the change
/// of the correction terms are all <= tol. Throws NonConvergenceError (carrying
/// the last point) when max_sweeps runs out.
IntersectionProjection project_intersection(const Problem& problem, const Vector& x,
                                            double tol = kDefaultProjTol,
                                            std::size_t max_sweeps = kDefaultMaxSweeps);

/// d(x, C) through project_intersection.
double distance_to_intersection(const Problem& problem, const Vector& x,
                                double tol = kDefaultProjTol,
                                std::size_t max_sweeps = kDefaultMaxSweeps);

/// Projected subgradient method with an exact projection onto C:
/// x^{k+1} = P_C(x^k - alpha_k s^k / ||s^k||), P_C(x^k) on the zero branch.
/// Trace records follow the sapsm_run layout.
MinimizationResult classical_psm(const Problem& problem, const Objective& obj,
                                 const StepSizeRule& rule, const Vector& x0,
                                 std::size_t max_iters, double proj_tol = kDefaultProjTol,
                                 double zero_tol = kDefaultZeroSubgradientTol);

/// Certified minimizer of a small instance.
struct OracleSolution {
  Vector minimizer;
  double min_value = 0.0;
  std::string method;
  /// Final grid step.
  double accuracy = 0.0;
  /// Largest displacement of the grid minimizer when phi is tilted by +-eta e_j.
  double tilt_spread = 0.0;
  /// tilt_spread <= uniqueness_radius.
  bool unique = true;
};

struct GridBounds {
  Vector lo;
  Vector hi;
};

/// Box [-r, r]^J with r from the problem's bounded witness (or the tightest
/// enclosing radius among its sets). Throws if no set is bounded.
GridBounds enclosing_grid_bounds(const Problem& problem);

/// Relative tilt eta / max(1, ||s(minimizer)||) used by the uniqueness probe.
inline constexpr double kUniquenessTilt = 1e-3;

/// Exhaustive search over the grid points of `bounds`, then `refine_rounds`
/// rounds of local search with a ten times finer grid around the incumbent.
/// Candidates are grid points with proximity <= feas_tol and the Dykstra
/// projections onto C (proximity <= max(feas_tol, 1e-10)) of grid points with
/// proximity <= h sqrt(J). Requires J <= 3.
///
/// Uniqueness is probed by repeating the search for phi(x) +- eta x_j, j < J:
/// the minimizer is reported unique when every tilted minimizer lies within
/// uniqueness_radius of the untilted one. Costs 2J + 1 searches.
OracleSolution brute_force_minimize(const Problem& problem, const Objective& obj,
                                    const GridBounds& bounds, double grid_step = 1e-2,
                                    std::size_t refine_rounds = 3, double feas_tol = 0.0,
                                    double uniqueness_radius = 1e-2);

/// ||x - minimizer|| for a certified unique minimizer. Throws if the oracle is
/// not unique or its value disagrees with evaluate(obj, minimizer) by more than value_tol.
double distance_to_solution_set(const OracleSolution& oracle, const Objective& obj,
                                const Problem& problem, const Vector& x,
                                double value_tol = 1e-9);

}  // namespace sapsm
