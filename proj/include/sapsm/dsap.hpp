#pragma once

#include "sapsm/strings.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sapsm {

/// Chooses the amalgamator used at iteration k. Every variant is a
/// deterministic function of k (and, for RandomDynamic, of its seed).
///
/// An anchored scheduler makes its strings M-fit: any string that visits no
/// set inside B(0, M) gets the witness index appended (RandomDynamic inserts it
/// at a random position instead).
class Scheduler {
public:
  enum class Kind { cyclic_singleton, fully_simultaneous, fixed_plan, random_dynamic };

  static Scheduler cyclic_singleton();
  static Scheduler fully_simultaneous();
  /// Cycles through `plan`; plan[k % plan.size()] is used at iteration k.
  static Scheduler fixed_plan(std::vector<Amalgamator> plan, MStarParams params);
  static Scheduler random_dynamic(std::uint64_t seed, MStarParams params);

  /// Copy that anchors every string to the problem's bounded witness.
  Scheduler anchored() const;
  /// Copy with explicit admissibility bounds (cyclic and simultaneous derive
  /// delta = 1/(2m), q_bar = m otherwise).
  Scheduler with_params(MStarParams params) const;

  Kind kind() const { return kind_; }
  bool is_anchored() const { return anchored_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Amalgamator>& plan() const { return plan_; }
  const std::optional<MStarParams>& explicit_params() const { return params_; }

  /// Admissibility bounds the emitted amalgamators are validated against.
  MStarParams params(std::size_t m) const;

  Amalgamator at(std::size_t k, const Problem& problem) const;

private:
  Scheduler() = default;
  Amalgamator random_at(std::size_t k, const Problem& problem) const;

  Kind kind_ = Kind::cyclic_singleton;
  std::vector<Amalgamator> plan_;
  std::optional<MStarParams> params_;
  std::uint64_t seed_ = 0;
  bool anchored_ = false;
};

/// Controlled errors for exercising perturbation resilience. The step leaving
/// x^k is displaced by a vector of norm exactly gamma(k) = min(1, scale / (k+1)^power)
/// in a seeded uniformly random direction.
struct PerturbationPlan {
  double scale = 1.0;
  double power = 1.0;
  std::uint64_t seed = 0;

  double gamma(std::size_t k) const;
  void validate() const;
};

/// Data specific to a subgradient step, absent for pure feasibility runs.
struct StepRecord {
  double alpha = 0.0;
  double phi = 0.0;
  double snorm = 0.0;
  bool zero_branch = false;
};

struct TraceRecord {
  std::size_t k = 0;
  Vector x;
  std::vector<double> distances;
  double proximity = 0.0;
  double norm_x = 0.0;
  std::int64_t elapsed_ns = 0;
  std::optional<StepRecord> step;
};

/// One record per iterate x^0, x^1, ..., in order.
struct RunTrace {
  std::vector<TraceRecord> records;
  bool converged = false;

  std::size_t iterations() const { return records.empty() ? 0 : records.size() - 1; }
  const Vector& final_iterate() const { return records.back().x; }
  double final_proximity() const { return records.back().proximity; }
};

/// A run stopped on a hard error; `partial` holds every record written so far.
class RunFailure : public std::runtime_error {
public:
  RunFailure(const std::string& what, RunTrace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const RunTrace& partial() const { return partial_; }

private:
  RunTrace partial_;
};

/// max_i d(x, C_i).
double proximity(const Problem& problem, const Vector& x);

/// Per-set distances d(x, C_i) in set order.
std::vector<double> distances(const Problem& problem, const Vector& x);

/// One DSAP iteration x -> P_{Omega,w}(x).
Vector dsap_step(const Problem& problem, const Amalgamator& a, const Vector& x);

/// Iterates dsap_step until proximity <= eps or `max_iters` steps were taken.
///
/// Every emitted amalgamator is validated against the scheduler's bounds; a
/// failure throws RunFailure naming the iteration. With a perturbation the
/// problem must carry a bounded witness (else PreconditionError) and every
/// amalgamator must be M-fit for its radius (else RunFailure).
RunTrace dsap_run(const Problem& problem, const Scheduler& scheduler, const Vector& x0,
                  std::size_t max_iters, double eps,
                  const std::optional<PerturbationPlan>& perturbation = std::nullopt);

/// Fills the feasibility part of a trace record for iterate x.
TraceRecord make_record(const Problem& problem, std::size_t k, const Vector& x,
                        std::int64_t elapsed_ns);

}  // namespace sapsm
