#pragma once

#include "sapsm/dsap.hpp"
#include "sapsm/objectives.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sapsm {

/// Step sizes alpha_k in (0, 1].
class StepSizeRule {
public:
  /// alpha_k = min(1, a / (k+1)).
  static StepSizeRule harmonic(double a);
  /// alpha_k = min(1, a / (k+1)^p), 0 < p <= 1.
  static StepSizeRule power_law(double a, double p);
  /// Caller-supplied values; alpha_k -> 0 and sum alpha_k = infinity are not
  /// checked (is_asymptotically_valid() reports false).
  static StepSizeRule explicit_values(std::vector<double> values);

  double alpha(std::size_t k) const;
  /// Largest k for which alpha(k) is defined plus one, or nothing if unbounded.
  std::optional<std::size_t> length() const;
  bool is_asymptotically_valid() const { return kind_ != Kind::explicit_values; }

  enum class Kind { harmonic, power_law, explicit_values };
  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double p() const { return p_; }
  const std::vector<double>& values() const { return values_; }

private:
  StepSizeRule() = default;
  Kind kind_ = Kind::harmonic;
  double a_ = 1.0;
  double p_ = 1.0;
  std::vector<double> values_;
};

/// What happened during one SA-PSM step.
struct StepInfo {
  bool zero_branch = false;
  Vector subgradient;  // s^k; zero on the zero branch
  Vector displaced;    // x^k - alpha s^k / ||s^k|| (x^k on the zero branch)
  double alpha = 0.0;
};

struct StepResult {
  Vector x;
  StepInfo info;
};

/// One SA-PSM iteration: zero branch P_{Omega,w}(x), otherwise
/// P_{Omega,w}(x - alpha s / ||s||) with s = subgradient(obj, x).
StepResult sapsm_step(const Problem& problem, const Objective& obj, const Amalgamator& a,
                      const Vector& x, double alpha,
                      double zero_tol = kDefaultZeroSubgradientTol);

struct SapsmOptions {
  double zero_tol = kDefaultZeroSubgradientTol;
  /// Proximity bound for the best-iterate report. When unset it is
  /// 10 * (terminal proximity of a pure DSAP run with the same schedule and budget).
  std::optional<double> report_threshold;
  double report_threshold_floor = 1e-12;
  /// Enforce the M-fit hypothesis on every emitted amalgamator.
  bool require_m_fit = true;
};

struct MinimizationResult {
  RunTrace trace;  // records carry StepRecord data
  Vector final_iterate;
  /// Lowest-phi iterate among those with proximity <= report_threshold.
  Vector best_iterate;
  double best_value = 0.0;
  bool best_found = false;
  double report_threshold = 0.0;
  std::size_t zero_branch_count = 0;
  std::size_t descent_branch_count = 0;
};

/// Runs max_iters SA-PSM steps from x0.
///
/// Requires a problem with a bounded witness and (unless disabled) M-fit
/// amalgamators; throws on an inadmissible amalgamator or a non-finite iterate.
/// Record k holds x^k, phi(x^k), alpha_k and the branch/subgradient at x^k.
MinimizationResult sapsm_run(const Problem& problem, const Objective& obj,
                             const Scheduler& scheduler, const StepSizeRule& rule,
                             const Vector& x0, std::size_t max_iters,
                             const SapsmOptions& options = {});

/// Checks ||y - xbar||^2 <= ||x - xbar||^2 - 2 alpha margin / (4 Lbar) + alpha^2 for
/// y = P_{Omega,w}(x - alpha v / ||v||), v = subgradient(obj, x), with slack 1e-9.
///
/// Throws PreconditionError unless ||x|| <= 3M + 2, phi(x) > phi(xbar) + margin,
/// 0 < margin <= 1, alpha > 0 and xbar is feasible to 1e-8.
bool check_descent_inequality(const Problem& problem, const Objective& obj, const Vector& xbar,
                              const Vector& x, double alpha, const Amalgamator& a, double margin,
                              double lbar);

}  // namespace sapsm
