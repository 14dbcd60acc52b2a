#include "sapsm/dsap.hpp"

#include "sapsm/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sapsm {

namespace {

// Strings that miss every set inside B(0, M) get the witness index appended.
std::vector<IndexVector> anchor_strings(const std::vector<IndexVector>& strings,
                                        const Problem& problem) {
  const auto& w = problem.witness();
  if (!w) throw PreconditionError("anchored scheduler requires a problem with a bounded witness");
  const auto bounded = problem.bounded_indices(w->radius);
  std::vector<IndexVector> out;
  out.reserve(strings.size());
  for (const auto& t : strings) {
    const bool ok = std::any_of(t.begin(), t.end(), [&](std::size_t i) {
      return std::find(bounded.begin(), bounded.end(), i) != bounded.end();
    });
    if (ok) {
      out.push_back(t);
    } else {
      auto idx = t.indices();
      idx.push_back(w->index);
      out.emplace_back(std::move(idx));
    }
  }
  return out;
}

}  // namespace

Scheduler Scheduler::cyclic_singleton() {
  Scheduler s;
  s.kind_ = Kind::cyclic_singleton;
  return s;
}

Scheduler Scheduler::fully_simultaneous() {
  Scheduler s;
  s.kind_ = Kind::fully_simultaneous;
  return s;
}

Scheduler Scheduler::fixed_plan(std::vector<Amalgamator> plan, MStarParams params) {
  if (plan.empty()) throw std::invalid_argument("fixed plan scheduler: empty plan");
  params.validate();
  Scheduler s;
  s.kind_ = Kind::fixed_plan;
  s.plan_ = std::move(plan);
  s.params_ = params;
  return s;
}

Scheduler Scheduler::random_dynamic(std::uint64_t seed, MStarParams params) {
  params.validate();
  Scheduler s;
  s.kind_ = Kind::random_dynamic;
  s.seed_ = seed;
  s.params_ = params;
  return s;
}

Scheduler Scheduler::anchored() const {
  Scheduler s = *this;
  s.anchored_ = true;
  return s;
}

Scheduler Scheduler::with_params(MStarParams params) const {
  params.validate();
  Scheduler s = *this;
  s.params_ = params;
  return s;
}

MStarParams Scheduler::params(std::size_t m) const {
  if (params_) {
    if (params_->m != m) {
      throw std::invalid_argument("scheduler bounds were built for m = " + std::to_string(params_->m) +
                                  ", problem has m = " + std::to_string(m));
    }
    return *params_;
  }
  return MStarParams{0.5 / static_cast<double>(m), m, m};
}

Amalgamator Scheduler::at(std::size_t k, const Problem& problem) const {
  const std::size_t m = problem.size();
  switch (kind_) {
    case Kind::cyclic_singleton: {
      auto a = Amalgamator::cyclic(m);
      if (!anchored_) return a;
      return Amalgamator(anchor_strings(a.strings(), problem), a.weights(), m);
    }
    case Kind::fully_simultaneous: {
      auto a = Amalgamator::simultaneous(m);
      if (!anchored_) return a;
      return Amalgamator(anchor_strings(a.strings(), problem), a.weights(), m);
    }
    case Kind::fixed_plan: {
      const auto& a = plan_[k % plan_.size()];
      if (!anchored_) return a;
      return Amalgamator(anchor_strings(a.strings(), problem), a.weights(), m);
    }
    case Kind::random_dynamic:
      return random_at(k, problem);
  }
  throw std::logic_error("unknown scheduler kind");
}

Amalgamator Scheduler::random_at(std::size_t k, const Problem& problem) const {
  const std::size_t m = problem.size();
  const MStarParams p = params(m);
  Engine eng = derive_stream(seed_, StreamTag::scheduler, k);

  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = m; i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(eng, i)]);

  // Number of strings in [1, m]; m <= floor(1/delta) so the weight floor is attainable.
  const std::size_t n = 1 + uniform_index(eng, m);
  std::vector<std::size_t> cuts(m - 1);
  std::iota(cuts.begin(), cuts.end(), std::size_t{1});
  for (std::size_t i = 0; i + 1 < n; ++i) std::swap(cuts[i], cuts[i + uniform_index(eng, cuts.size() - i)]);
  cuts.resize(n - 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(m);

  std::vector<std::size_t> bounded;
  if (anchored_) {
    if (!problem.witness()) throw PreconditionError("anchored scheduler requires a problem with a bounded witness");
    bounded = problem.bounded_indices(problem.witness()->radius);
  }

  std::vector<IndexVector> strings;
  strings.reserve(n);
  std::size_t begin = 0;
  for (std::size_t end : cuts) {
    std::vector<std::size_t> idx(perm.begin() + static_cast<std::ptrdiff_t>(begin),
                                 perm.begin() + static_cast<std::ptrdiff_t>(end));
    if (anchored_) {
      const bool ok = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) {
        return std::find(bounded.begin(), bounded.end(), i) != bounded.end();
      });
      if (!ok) {
        // A chunk shorter than m gains one index, so its length stays <= m <= q_bar.
        const std::size_t pos = uniform_index(eng, idx.size() + 1);
        idx.insert(idx.begin() + static_cast<std::ptrdiff_t>(pos), problem.witness()->index);
      }
    }
    strings.emplace_back(std::move(idx));
    begin = end;
  }

  // w_t = delta + (1 - n delta) u_t / sum(u): strictly above the floor, sums to one.
  std::vector<double> u(n);
  for (auto& v : u) v = 0.5 + uniform_unit(eng);
  const double usum = std::accumulate(u.begin(), u.end(), 0.0);
  const double free_mass = 1.0 - static_cast<double>(n) * p.delta;
  std::vector<double> w(n);
  for (std::size_t t = 0; t < n; ++t) w[t] = p.delta + free_mass * u[t] / usum;
  return Amalgamator(std::move(strings), std::move(w), m);
}

double PerturbationPlan::gamma(std::size_t k) const {
  return std::min(1.0, scale / std::pow(static_cast<double>(k + 1), power));
}

void PerturbationPlan::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("perturbation scale must be finite and > 0");
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw std::invalid_argument("perturbation power must be finite and > 0 so that gamma_k -> 0");
  }
}

double proximity(const Problem& problem, const Vector& x) {
  double best = 0.0;
  for (const auto& s : problem.sets()) best = std::max(best, distance(s, x));
  return best;
}

std::vector<double> distances(const Problem& problem, const Vector& x) {
  std::vector<double> d;
  d.reserve(problem.size());
  for (const auto& s : problem.sets()) d.push_back(distance(s, x));
  return d;
}

Vector dsap_step(const Problem& problem, const Amalgamator& a, const Vector& x) {
  return apply_amalgamator(problem, a, x);
}

TraceRecord make_record(const Problem& problem, std::size_t k, const Vector& x,
                        std::int64_t elapsed_ns) {
  TraceRecord r;
  r.k = k;
  r.x = x;
  r.distances = distances(problem, x);
  r.proximity = r.distances.empty() ? 0.0 : *std::max_element(r.distances.begin(), r.distances.end());
  r.norm_x = x.norm();
  r.elapsed_ns = elapsed_ns;
  return r;
}

RunTrace dsap_run(const Problem& problem, const Scheduler& scheduler, const Vector& x0,
                  std::size_t max_iters, double eps,
                  const std::optional<PerturbationPlan>& perturbation) {
  require_dimension(problem.dimension(), x0, "dsap_run x0");
  require_finite(x0, "dsap_run x0");
  if (eps < 0.0) throw std::invalid_argument("dsap_run: eps must be >= 0");
  if (perturbation) {
    perturbation->validate();
    if (!problem.witness()) {
      throw PreconditionError("dsap_run: perturbed runs require a bounded witness C_s inside B(0, M)");
    }
  }
  const MStarParams params = scheduler.params(problem.size());
  params.validate();

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0).count();
  };

  RunTrace trace;
  Vector x = x0;
  for (std::size_t k = 0;; ++k) {
    trace.records.push_back(make_record(problem, k, x, elapsed()));
    if (trace.records.back().proximity <= eps) {
      trace.converged = true;
      break;
    }
    if (k == max_iters) break;

    const Amalgamator a = scheduler.at(k, problem);
    if (!validate_amalgamator(a, params)) {
      throw RunFailure("dsap_run: scheduler emitted an inadmissible amalgamator at iteration " +
                           std::to_string(k),
                       std::move(trace));
    }
    if (perturbation && !is_m_fit(a.strings(), problem, problem.witness()->radius)) {
      throw RunFailure("dsap_run: amalgamator at iteration " + std::to_string(k) +
                           " is not M-fit; use an anchored scheduler",
                       std::move(trace));
    }
    x = dsap_step(problem, a, x);
    if (perturbation) {
      Engine eng = derive_stream(perturbation->seed, StreamTag::perturbation, k);
      x += perturbation->gamma(k) * unit_direction(eng, x.size());
    }
    if (!x.allFinite()) {
      throw RunFailure("dsap_run: non-finite iterate at iteration " + std::to_string(k + 1),
                       std::move(trace));
    }
  }
  return trace;
}

}  // namespace sapsm
