#include "sapsm/sa_psm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sapsm {

StepSizeRule StepSizeRule::harmonic(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("harmonic step rule: a must be finite and > 0");
  StepSizeRule r;
  r.kind_ = Kind::harmonic;
  r.a_ = a;
  return r;
}

StepSizeRule StepSizeRule::power_law(double a, double p) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("power-law step rule: a must be finite and > 0");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("power-law step rule: p must lie in (0, 1]");
  StepSizeRule r;
  r.kind_ = Kind::power_law;
  r.a_ = a;
  r.p_ = p;
  return r;
}

StepSizeRule StepSizeRule::explicit_values(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("explicit step rule: no values");
  for (double v : values) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("explicit step rule: every alpha_k must lie in (0, 1]");
  }
  StepSizeRule r;
  r.kind_ = Kind::explicit_values;
  r.values_ = std::move(values);
  return r;
}

double StepSizeRule::alpha(std::size_t k) const {
  const double kk = static_cast<double>(k + 1);
  switch (kind_) {
    case Kind::harmonic:
      return std::min(1.0, a_ / kk);
    case Kind::power_law:
      return std::min(1.0, a_ / std::pow(kk, p_));
    case Kind::explicit_values:
      if (k >= values_.size()) {
        throw std::out_of_range("explicit step rule has " + std::to_string(values_.size()) +
                                " values, alpha_" + std::to_string(k) + " requested");
      }
      return values_[k];
  }
  throw std::logic_error("unknown step rule");
}

std::optional<std::size_t> StepSizeRule::length() const {
  if (kind_ == Kind::explicit_values) return values_.size();
  return std::nullopt;
}

StepResult sapsm_step(const Problem& problem, const Objective& obj, const Amalgamator& a,
                      const Vector& x, double alpha, double zero_tol) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("sapsm_step: alpha must lie in (0, 1]");
  StepResult r;
  r.info.alpha = alpha;
  if (has_zero_subgradient(obj, x, zero_tol)) {
    r.info.zero_branch = true;
    r.info.subgradient = Vector::Zero(x.size());
    r.info.displaced = x;
  } else {
    r.info.subgradient = subgradient(obj, x);
    const double snorm = r.info.subgradient.norm();
    if (!(snorm > 0.0)) {
      throw std::logic_error("sapsm_step: zero subgradient on the descent branch");
    }
    r.info.displaced = x - (alpha / snorm) * r.info.subgradient;
  }
  r.x = apply_amalgamator(problem, a, r.info.displaced);
  return r;
}

MinimizationResult sapsm_run(const Problem& problem, const Objective& obj,
                             const Scheduler& scheduler, const StepSizeRule& rule,
                             const Vector& x0, std::size_t max_iters,
                             const SapsmOptions& options) {
  require_dimension(problem.dimension(), x0, "sapsm_run x0");
  if (obj.dimension() != problem.dimension()) {
    throw std::invalid_argument("sapsm_run: objective and problem dimensions differ");
  }
  require_finite(x0, "sapsm_run x0");
  if (options.require_m_fit && !problem.witness()) {
    throw PreconditionError("sapsm_run: the problem needs a bounded witness C_s inside B(0, M)");
  }
  if (auto len = rule.length(); len && *len < max_iters) {
    throw std::invalid_argument("sapsm_run: explicit step rule shorter than max_iters");
  }
  const MStarParams params = scheduler.params(problem.size());
  params.validate();

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0).count();
  };

  MinimizationResult result;
  RunTrace& trace = result.trace;
  Vector x = x0;
  for (std::size_t k = 0;; ++k) {
    TraceRecord rec = make_record(problem, k, x, elapsed());
    StepRecord step;
    step.phi = evaluate(obj, x);
    const auto len = rule.length();
    step.alpha = (!len || k < *len) ? rule.alpha(k) : 0.0;
    step.zero_branch = has_zero_subgradient(obj, x, options.zero_tol);
    step.snorm = step.zero_branch ? 0.0 : subgradient(obj, x).norm();
    rec.step = step;
    trace.records.push_back(std::move(rec));
    if (k == max_iters) break;

    const Amalgamator a = scheduler.at(k, problem);
    if (!validate_amalgamator(a, params)) {
      throw RunFailure("sapsm_run: scheduler emitted an inadmissible amalgamator at iteration " +
                           std::to_string(k),
                       std::move(trace));
    }
    if (options.require_m_fit && !is_m_fit(a.strings(), problem, problem.witness()->radius)) {
      throw RunFailure("sapsm_run: amalgamator at iteration " + std::to_string(k) +
                           " is not M-fit; use an anchored scheduler",
                       std::move(trace));
    }
    const StepResult r = sapsm_step(problem, obj, a, x, step.alpha, options.zero_tol);
    (r.info.zero_branch ? result.zero_branch_count : result.descent_branch_count) += 1;
    x = r.x;
    if (!x.allFinite()) {
      throw RunFailure("sapsm_run: non-finite iterate at iteration " + std::to_string(k + 1),
                       std::move(trace));
    }
  }
  result.final_iterate = x;

  double threshold = 0.0;
  if (options.report_threshold) {
    threshold = *options.report_threshold;
  } else {
    const RunTrace ref = dsap_run(problem, scheduler, x0, max_iters, 0.0);
    threshold = 10.0 * ref.final_proximity();
  }
  threshold = std::max(threshold, options.report_threshold_floor);
  result.report_threshold = threshold;
  result.best_value = std::numeric_limits<double>::infinity();
  for (const auto& rec : trace.records) {
    if (rec.proximity <= threshold && rec.step->phi < result.best_value) {
      result.best_value = rec.step->phi;
      result.best_iterate = rec.x;
      result.best_found = true;
    }
  }
  if (!result.best_found) {
    result.best_iterate = x;
    result.best_value = trace.records.back().step->phi;
  }
  return result;
}

bool check_descent_inequality(const Problem& problem, const Objective& obj, const Vector& xbar,
                              const Vector& x, double alpha, const Amalgamator& a, double margin,
                              double lbar) {
  if (!problem.witness()) throw PreconditionError("check_descent_inequality: problem has no bounded witness");
  const double M = problem.witness()->radius;
  if (!(alpha > 0.0)) throw PreconditionError("check_descent_inequality: alpha must be > 0");
  if (!(margin > 0.0 && margin <= 1.0)) throw PreconditionError("check_descent_inequality: margin must lie in (0, 1]");
  if (!(lbar > 1.0)) throw PreconditionError("check_descent_inequality: Lbar must exceed 1");
  if (x.norm() > 3.0 * M + 2.0) throw PreconditionError("check_descent_inequality: ||x|| exceeds 3M + 2");
  if (proximity(problem, xbar) > 1e-8) throw PreconditionError("check_descent_inequality: xbar is not feasible");
  if (!(evaluate(obj, x) > evaluate(obj, xbar) + margin)) {
    throw PreconditionError("check_descent_inequality: requires phi(x) > phi(xbar) + margin");
  }
  const Vector v = subgradient(obj, x);
  const Vector y = apply_amalgamator(problem, a, x - (alpha / v.norm()) * v);
  const double lhs = (y - xbar).squaredNorm();
  const double rhs = (x - xbar).squaredNorm() - 2.0 * alpha * margin / (4.0 * lbar) + alpha * alpha;
  return lhs <= rhs + 1e-9;
}

}  // namespace sapsm
