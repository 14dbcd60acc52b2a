#include "sapsm/problem_file.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace sapsm {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string out = "invalid problem file:";
  for (const auto& e : errors) out += "\n  " + e;
  return out;
}

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw FieldError(path + ": " + msg);
}

// Runs f, turning any failure into an error entry. Returns whether f succeeded.
bool attempt(std::vector<std::string>& errors, const std::string& path,
             const std::function<void()>& f) {
  try {
    f();
    return true;
  } catch (const FieldError& e) {
    errors.emplace_back(e.what());
  } catch (const std::exception& e) {
    errors.push_back(path + ": " + e.what());
  }
  return false;
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed,
                std::vector<std::string>& errors) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) errors.push_back((path.empty() ? key : path + "." + key) + ": unknown field");
  }
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "required field is missing");
  return *it;
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

std::uint64_t get_count(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) fail(path, "must be >= 0");
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  fail(path, "expected a non-negative integer");
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Vector get_vector(const json& j, const std::string& path, std::optional<Eigen::Index> dim) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = get_number(j[i], path + "[" + std::to_string(i) + "]");
  }
  if (dim && v.size() != *dim) {
    fail(path, "expected length " + std::to_string(*dim) + ", got " + std::to_string(v.size()));
  }
  return v;
}

ConvexSet parse_set(const json& j, const std::string& path, Eigen::Index dim) {
  require_object(j, path);
  const std::string type = get_string(member(j, "type", path), path + ".type");
  std::vector<std::string> errors;
  ConvexSet out = ConvexSet::simplex(1, 1.0);
  if (type == "halfspace" || type == "hyperplane") {
    check_keys(j, path, {"type", "a", "b"}, errors);
    Vector a = get_vector(member(j, "a", path), path + ".a", dim);
    const double b = get_number(member(j, "b", path), path + ".b");
    try {
      out = type == "halfspace" ? ConvexSet::halfspace(a, b) : ConvexSet::hyperplane(a, b);
    } catch (const std::invalid_argument& e) {
      fail(path + ".a", e.what());
    }
  } else if (type == "box") {
    check_keys(j, path, {"type", "lo", "hi"}, errors);
    Vector lo = get_vector(member(j, "lo", path), path + ".lo", dim);
    Vector hi = get_vector(member(j, "hi", path), path + ".hi", dim);
    try {
      out = ConvexSet::box(lo, hi);
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  } else if (type == "ball") {
    check_keys(j, path, {"type", "center", "radius"}, errors);
    Vector c = get_vector(member(j, "center", path), path + ".center", dim);
    const double r = get_number(member(j, "radius", path), path + ".radius");
    if (!(r > 0.0)) fail(path + ".radius", "must be > 0");
    out = ConvexSet::ball(c, r);
  } else if (type == "simplex") {
    check_keys(j, path, {"type", "scale"}, errors);
    const double s = get_number(member(j, "scale", path), path + ".scale");
    if (!(s > 0.0)) fail(path + ".scale", "must be > 0");
    out = ConvexSet::simplex(dim, s);
  } else {
    fail(path + ".type", "unknown set type '" + type + "' (expected halfspace, hyperplane, box, ball or simplex)");
  }
  if (!errors.empty()) throw FieldError(errors.front());
  return out;
}

Objective parse_objective(const json& j, const std::string& path, Eigen::Index dim) {
  require_object(j, path);
  const std::string type = get_string(member(j, "type", path), path + ".type");
  std::vector<std::string> errors;
  if (type == "linear") {
    check_keys(j, path, {"type", "c"}, errors);
    if (!errors.empty()) throw FieldError(errors.front());
    return Objective::linear(get_vector(member(j, "c", path), path + ".c", dim));
  }
  if (type == "quadratic") {
    check_keys(j, path, {"type", "Q", "c"}, errors);
    if (!errors.empty()) throw FieldError(errors.front());
    const json& q = member(j, "Q", path);
    if (!q.is_array() || static_cast<Eigen::Index>(q.size()) != dim) {
      fail(path + ".Q", "expected " + std::to_string(dim) + " rows");
    }
    Matrix Q(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      Q.row(r) = get_vector(q[static_cast<std::size_t>(r)], path + ".Q[" + std::to_string(r) + "]", dim).transpose();
    }
    Vector c = j.contains("c") ? get_vector(j["c"], path + ".c", dim) : Vector::Zero(dim);
    try {
      return Objective::quadratic(Q, c);
    } catch (const std::invalid_argument& e) {
      fail(path + ".Q", e.what());
    }
  }
  if (type == "max_affine") {
    check_keys(j, path, {"type", "pieces"}, errors);
    if (!errors.empty()) throw FieldError(errors.front());
    const json& ps = member(j, "pieces", path);
    if (!ps.is_array() || ps.empty()) fail(path + ".pieces", "expected a nonempty array");
    std::vector<AffinePiece> pieces;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string pp = path + ".pieces[" + std::to_string(i) + "]";
      require_object(ps[i], pp);
      pieces.push_back({get_vector(member(ps[i], "a", pp), pp + ".a", dim),
                        ps[i].contains("b") ? get_number(ps[i]["b"], pp + ".b") : 0.0});
    }
    return Objective::max_affine(std::move(pieces));
  }
  if (type == "one_norm") {
    check_keys(j, path, {"type", "weights"}, errors);
    if (!errors.empty()) throw FieldError(errors.front());
    Vector w = get_vector(member(j, "weights", path), path + ".weights", dim);
    if ((w.array() < 0.0).any()) fail(path + ".weights", "must be >= 0");
    return Objective::one_norm(w);
  }
  fail(path + ".type", "unknown objective type '" + type + "' (expected linear, quadratic, max_affine or one_norm)");
}

StepSizeRule parse_step_size(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string type = get_string(member(j, "type", path), path + ".type");
  std::vector<std::string> errors;
  if (type == "harmonic") {
    check_keys(j, path, {"type", "a"}, errors);
    if (!errors.empty()) throw FieldError(errors.front());
    const double a = j.contains("a") ? get_number(j["a"], path + ".a") : 1.0;
    if (!(a > 0.0)) fail(path + ".a", "must be > 0");
    return StepSizeRule::harmonic(a);
  }
  if (type == "power_law") {
    check_keys(j, path, {"type", "a", "p"}, errors);
    if (!errors.empty()) throw FieldError(errors.front());
    const double a = j.contains("a") ? get_number(j["a"], path + ".a") : 1.0;
    const double p = get_number(member(j, "p", path), path + ".p");
    if (!(a > 0.0)) fail(path + ".a", "must be > 0");
    if (!(p > 0.0 && p <= 1.0)) fail(path + ".p", "must satisfy 0 < p <= 1");
    return StepSizeRule::power_law(a, p);
  }
  if (type == "explicit") {
    check_keys(j, path, {"type", "values"}, errors);
    if (!errors.empty()) throw FieldError(errors.front());
    const Vector v = get_vector(member(j, "values", path), path + ".values", std::nullopt);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0 && v[i] <= 1.0)) {
        fail(path + ".values[" + std::to_string(i) + "]", "must satisfy 0 < alpha <= 1");
      }
    }
    return StepSizeRule::explicit_values(to_std(v));
  }
  fail(path + ".type", "unknown step-size rule '" + type + "' (expected harmonic, power_law or explicit)");
}

Amalgamator parse_amalgamator(const json& j, const std::string& path, std::size_t m) {
  require_object(j, path);
  const json& ss = member(j, "strings", path);
  const json& ws = member(j, "weights", path);
  if (!ss.is_array() || ss.empty()) fail(path + ".strings", "expected a nonempty array of index arrays");
  std::vector<IndexVector> strings;
  for (std::size_t s = 0; s < ss.size(); ++s) {
    const std::string sp = path + ".strings[" + std::to_string(s) + "]";
    if (!ss[s].is_array() || ss[s].empty()) fail(sp, "expected a nonempty array of set indices");
    std::vector<std::size_t> idx;
    for (std::size_t u = 0; u < ss[s].size(); ++u) {
      const auto i = get_count(ss[s][u], sp + "[" + std::to_string(u) + "]");
      if (i >= m) fail(sp + "[" + std::to_string(u) + "]", "index " + std::to_string(i) + " out of range [0, " + std::to_string(m) + ")");
      idx.push_back(static_cast<std::size_t>(i));
    }
    strings.emplace_back(std::move(idx));
  }
  const Vector w = get_vector(ws, path + ".weights", static_cast<Eigen::Index>(strings.size()));
  if ((w.array() <= 0.0).any()) fail(path + ".weights", "weights must be > 0");
  const double sum = w.sum();
  if (std::abs(sum - 1.0) > kWeightRenormalizeTol) {
    fail(path + ".weights", "weights must sum to 1 (got " + format_double(sum) + ")");
  }
  if (!is_fit(strings, m)) fail(path + ".strings", "strings are not fit: every set index must occur in some string");
  return Amalgamator(std::move(strings), to_std(w), m);
}

Scheduler parse_scheduler(const json& j, const std::string& path, std::size_t m, std::uint64_t seed,
                          std::vector<std::string>& errors) {
  require_object(j, path);
  check_keys(j, path, {"type", "delta", "q_bar", "anchored", "plan"}, errors);
  const std::string type = j.contains("type") ? get_string(j["type"], path + ".type") : "cyclic";

  std::optional<double> delta;
  std::optional<std::size_t> q_bar;
  attempt(errors, path + ".delta", [&] {
    if (!j.contains("delta")) return;
    const double d = get_number(j["delta"], path + ".delta");
    if (!(d > 0.0 && d < 1.0 / static_cast<double>(m))) {
      fail(path + ".delta", "must satisfy 0 < delta < 1/m (m = " + std::to_string(m) + ", 1/m = " +
                                format_double(1.0 / static_cast<double>(m)) + ", got " + format_double(d) + ")");
    }
    delta = d;
  });
  attempt(errors, path + ".q_bar", [&] {
    if (!j.contains("q_bar")) return;
    const auto q = get_count(j["q_bar"], path + ".q_bar");
    if (q < m) fail(path + ".q_bar", "must satisfy q_bar >= m (m = " + std::to_string(m) + ", got " + std::to_string(q) + ")");
    q_bar = static_cast<std::size_t>(q);
  });
  bool anchored = false;
  attempt(errors, path + ".anchored", [&] {
    if (j.contains("anchored")) anchored = get_bool(j["anchored"], path + ".anchored");
  });

  std::optional<Scheduler> out;
  const auto default_delta = 0.5 / static_cast<double>(m);
  if (type == "cyclic" || type == "simultaneous") {
    if (j.contains("plan")) errors.push_back(path + ".plan: only valid for type 'fixed'");
    out = type == "cyclic" ? Scheduler::cyclic_singleton() : Scheduler::fully_simultaneous();
    if (delta || q_bar) out = out->with_params({delta.value_or(default_delta), q_bar.value_or(m), m});
  } else if (type == "fixed") {
    std::vector<Amalgamator> plan;
    bool ok = attempt(errors, path + ".plan", [&] {
      const json& pj = member(j, "plan", path);
      if (!pj.is_array() || pj.empty()) fail(path + ".plan", "expected a nonempty array of amalgamators");
      for (std::size_t i = 0; i < pj.size(); ++i) {
        if (!attempt(errors, path + ".plan[" + std::to_string(i) + "]",
                     [&] { plan.push_back(parse_amalgamator(pj[i], path + ".plan[" + std::to_string(i) + "]", m)); })) {
          throw FieldError("");
        }
      }
    });
    if (ok) {
      std::size_t longest = m;
      for (const auto& a : plan) {
        for (const auto& t : a.strings()) longest = std::max(longest, t.length());
      }
      out = Scheduler::fixed_plan(std::move(plan), {delta.value_or(default_delta), q_bar.value_or(longest), m});
    }
  } else if (type == "random") {
    if (j.contains("plan")) errors.push_back(path + ".plan: only valid for type 'fixed'");
    out = Scheduler::random_dynamic(seed, {delta.value_or(default_delta), q_bar.value_or(m), m});
  } else {
    fail(path + ".type", "unknown scheduler type '" + type + "' (expected cyclic, simultaneous, fixed or random)");
  }
  if (!out) throw FieldError("");
  return anchored ? out->anchored() : *out;
}

std::size_t line_of(const std::string& text, std::size_t byte, std::size_t& column) {
  std::size_t line = 1;
  column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return line;
}

}  // namespace

ProblemFileError::ProblemFileError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character.
    std::size_t col = 0;
    const std::size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1, col);
    throw ProblemFileError({"syntax error at line " + std::to_string(line) + ", column " +
                            std::to_string(col) + ": " + e.what()});
  }
}

ProblemFile parse_problem_file(const std::string& text) {
  return problem_file_from_json(parse_json_text(text));
}

ProblemFile problem_file_from_json(const json& doc) {
  std::vector<std::string> errors;
  if (!doc.is_object()) throw ProblemFileError({"<root>: expected a JSON object"});
  check_keys(doc, "",
             {"dimension", "sets", "bounded_witness", "objective", "scheduler", "step_size", "x0",
              "max_iters", "eps", "perturbation", "seed", "proj_tol"},
             errors);

  Eigen::Index dim = 0;
  if (!attempt(errors, "dimension", [&] {
        const auto d = get_count(member(doc, "dimension", ""), "dimension");
        if (d < 1) fail("dimension", "must be >= 1");
        dim = static_cast<Eigen::Index>(d);
      })) {
    throw ProblemFileError(errors);
  }

  std::vector<ConvexSet> sets;
  bool sets_ok = attempt(errors, "sets", [&] {
    const json& sj = member(doc, "sets", "");
    if (!sj.is_array() || sj.empty()) fail("sets", "expected a nonempty array");
    bool all = true;
    for (std::size_t i = 0; i < sj.size(); ++i) {
      all &= attempt(errors, "sets[" + std::to_string(i) + "]",
                     [&] { sets.push_back(parse_set(sj[i], "sets[" + std::to_string(i) + "]", dim)); });
    }
    if (!all) throw FieldError("");
  });
  const std::size_t m = sets.size();

  std::optional<BoundedWitness> witness;
  attempt(errors, "bounded_witness", [&] {
    if (!doc.contains("bounded_witness")) return;
    const json& w = require_object(doc["bounded_witness"], "bounded_witness");
    const auto idx = get_count(member(w, "index", "bounded_witness"), "bounded_witness.index");
    const double r = get_number(member(w, "radius", "bounded_witness"), "bounded_witness.radius");
    if (!(r > 0.0)) fail("bounded_witness.radius", "must be > 0");
    witness = BoundedWitness{static_cast<std::size_t>(idx), r};
  });

  std::optional<Problem> problem;
  if (sets_ok) {
    attempt(errors, "bounded_witness", [&] { problem.emplace(sets, witness); });
  }

  std::optional<Objective> objective;
  attempt(errors, "objective", [&] {
    if (doc.contains("objective") && !doc["objective"].is_null()) {
      objective = parse_objective(doc["objective"], "objective", dim);
    }
  });

  std::uint64_t seed = 0;
  attempt(errors, "seed", [&] {
    if (doc.contains("seed")) seed = get_count(doc["seed"], "seed");
  });

  std::optional<Scheduler> scheduler;
  if (sets_ok) {
    const json sj = doc.contains("scheduler") ? doc["scheduler"] : json::object();
    attempt(errors, "scheduler", [&] { scheduler = parse_scheduler(sj, "scheduler", m, seed, errors); });
  }

  std::optional<StepSizeRule> rule;
  attempt(errors, "step_size", [&] {
    rule = doc.contains("step_size") ? parse_step_size(doc["step_size"], "step_size")
                                     : StepSizeRule::harmonic(1.0);
  });

  Vector x0 = Vector::Zero(dim);
  attempt(errors, "x0", [&] {
    if (doc.contains("x0")) x0 = get_vector(doc["x0"], "x0", dim);
  });

  std::size_t max_iters = 1000;
  attempt(errors, "max_iters", [&] {
    if (doc.contains("max_iters")) max_iters = static_cast<std::size_t>(get_count(doc["max_iters"], "max_iters"));
  });
  double eps = 1e-8;
  attempt(errors, "eps", [&] {
    if (!doc.contains("eps")) return;
    eps = get_number(doc["eps"], "eps");
    if (eps < 0.0) fail("eps", "must be >= 0");
  });
  double proj_tol = kDefaultProjTol;
  attempt(errors, "proj_tol", [&] {
    if (!doc.contains("proj_tol")) return;
    proj_tol = get_number(doc["proj_tol"], "proj_tol");
    if (!(proj_tol > 0.0)) fail("proj_tol", "must be > 0");
  });

  std::optional<PerturbationPlan> perturbation;
  attempt(errors, "perturbation", [&] {
    if (!doc.contains("perturbation") || doc["perturbation"].is_null()) return;
    const json& pj = require_object(doc["perturbation"], "perturbation");
    check_keys(pj, "perturbation", {"scale", "power"}, errors);
    PerturbationPlan p;
    if (pj.contains("scale")) p.scale = get_number(pj["scale"], "perturbation.scale");
    if (pj.contains("power")) p.power = get_number(pj["power"], "perturbation.power");
    if (!(p.scale > 0.0)) fail("perturbation.scale", "must be > 0");
    if (!(p.power > 0.0)) fail("perturbation.power", "must be > 0 so that gamma_k -> 0");
    p.seed = seed;
    perturbation = p;
    if (!witness) fail("perturbation", "requires bounded_witness (a set C_s inside B(0, M))");
  });

  errors.erase(std::remove(errors.begin(), errors.end(), std::string()), errors.end());
  if (!errors.empty() || !problem || !scheduler || !rule) {
    if (errors.empty()) errors.emplace_back("<root>: invalid configuration");
    throw ProblemFileError(errors);
  }
  return ProblemFile{std::move(*problem), std::move(objective), std::move(*scheduler), std::move(*rule),
                     std::move(x0), max_iters, eps, perturbation, seed, proj_tol};
}

namespace {

json vec_json(const Vector& v) { return to_std(v); }

json set_json(const ConvexSet& s) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Halfspace>) return {{"type", "halfspace"}, {"a", vec_json(v.a)}, {"b", v.b}};
        if constexpr (std::is_same_v<T, Hyperplane>) return {{"type", "hyperplane"}, {"a", vec_json(v.a)}, {"b", v.b}};
        if constexpr (std::is_same_v<T, Box>) return {{"type", "box"}, {"lo", vec_json(v.lo)}, {"hi", vec_json(v.hi)}};
        if constexpr (std::is_same_v<T, Ball>) return {{"type", "ball"}, {"center", vec_json(v.center)}, {"radius", v.radius}};
        if constexpr (std::is_same_v<T, Simplex>) return {{"type", "simplex"}, {"scale", v.scale}};
      },
      s.variant());
}

json objective_json(const Objective& o) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Linear>) return {{"type", "linear"}, {"c", vec_json(v.c)}};
        if constexpr (std::is_same_v<T, Quadratic>) {
          json rows = json::array();
          for (Eigen::Index r = 0; r < v.Q.rows(); ++r) rows.push_back(vec_json(v.Q.row(r).transpose()));
          return {{"type", "quadratic"}, {"Q", rows}, {"c", vec_json(v.c)}};
        }
        if constexpr (std::is_same_v<T, MaxAffine>) {
          json pieces = json::array();
          for (const auto& p : v.pieces) pieces.push_back({{"a", vec_json(p.a)}, {"b", p.b}});
          return {{"type", "max_affine"}, {"pieces", pieces}};
        }
        if constexpr (std::is_same_v<T, OneNorm>) return {{"type", "one_norm"}, {"weights", vec_json(v.weights)}};
      },
      o.variant());
}

}  // namespace

json to_json(const ProblemFile& f) {
  json doc;
  doc["dimension"] = f.problem.dimension();
  json sets = json::array();
  for (const auto& s : f.problem.sets()) sets.push_back(set_json(s));
  doc["sets"] = sets;
  if (f.problem.witness()) {
    doc["bounded_witness"] = {{"index", f.problem.witness()->index}, {"radius", f.problem.witness()->radius}};
  }
  if (f.objective) doc["objective"] = objective_json(*f.objective);

  json sched;
  switch (f.scheduler.kind()) {
    case Scheduler::Kind::cyclic_singleton: sched["type"] = "cyclic"; break;
    case Scheduler::Kind::fully_simultaneous: sched["type"] = "simultaneous"; break;
    case Scheduler::Kind::fixed_plan: sched["type"] = "fixed"; break;
    case Scheduler::Kind::random_dynamic: sched["type"] = "random"; break;
  }
  if (const auto& p = f.scheduler.explicit_params()) {
    sched["delta"] = p->delta;
    sched["q_bar"] = p->q_bar;
  }
  sched["anchored"] = f.scheduler.is_anchored();
  if (f.scheduler.kind() == Scheduler::Kind::fixed_plan) {
    json plan = json::array();
    for (const auto& a : f.scheduler.plan()) {
      json strings = json::array();
      for (const auto& t : a.strings()) strings.push_back(t.indices());
      plan.push_back({{"strings", strings}, {"weights", a.weights()}});
    }
    sched["plan"] = plan;
  }
  doc["scheduler"] = sched;

  json rule;
  switch (f.step_size.kind()) {
    case StepSizeRule::Kind::harmonic: rule = {{"type", "harmonic"}, {"a", f.step_size.a()}}; break;
    case StepSizeRule::Kind::power_law:
      rule = {{"type", "power_law"}, {"a", f.step_size.a()}, {"p", f.step_size.p()}};
      break;
    case StepSizeRule::Kind::explicit_values: rule = {{"type", "explicit"}, {"values", f.step_size.values()}}; break;
  }
  doc["step_size"] = rule;
  doc["x0"] = vec_json(f.x0);
  doc["max_iters"] = f.max_iters;
  doc["eps"] = f.eps;
  doc["proj_tol"] = f.proj_tol;
  if (f.perturbation) doc["perturbation"] = {{"scale", f.perturbation->scale}, {"power", f.perturbation->power}};
  doc["seed"] = f.seed;
  return doc;
}

json to_json(const OracleSolution& solution) {
  return {{"minimizer", vec_json(solution.minimizer)}, {"min_value", solution.min_value},
          {"method", solution.method},                 {"accuracy", solution.accuracy},
          {"tilt_spread", solution.tilt_spread},       {"unique", solution.unique}};
}

OracleSolution oracle_solution_from_json(const json& doc) {
  std::vector<std::string> errors;
  OracleSolution out;
  if (!doc.is_object()) throw ProblemFileError({"<root>: expected an object"});
  check_keys(doc, "", {"minimizer", "min_value", "method", "accuracy", "tilt_spread", "unique"}, errors);
  attempt(errors, "minimizer", [&] { out.minimizer = get_vector(member(doc, "minimizer", ""), "minimizer", std::nullopt); });
  attempt(errors, "min_value", [&] { out.min_value = get_number(member(doc, "min_value", ""), "min_value"); });
  attempt(errors, "method", [&] { out.method = get_string(member(doc, "method", ""), "method"); });
  attempt(errors, "accuracy", [&] { out.accuracy = get_number(member(doc, "accuracy", ""), "accuracy"); });
  attempt(errors, "tilt_spread", [&] {
    if (doc.contains("tilt_spread")) out.tilt_spread = get_number(doc["tilt_spread"], "tilt_spread");
  });
  attempt(errors, "unique", [&] { out.unique = get_bool(member(doc, "unique", ""), "unique"); });
  errors.erase(std::remove(errors.begin(), errors.end(), std::string()), errors.end());
  if (!errors.empty()) throw ProblemFileError(errors);
  return out;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("override '" + assignment + "' must have the form KEY=VALUE");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw std::invalid_argument("override '" + assignment + "': empty path component");
    const bool numeric = std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (node->is_array() && numeric) {
      const auto i = std::stoul(part);
      if (i >= node->size()) throw std::invalid_argument("override '" + assignment + "': index " + part + " out of range");
      node = &(*node)[i];
    } else {
      if (!node->is_object() && !node->is_null()) {
        throw std::invalid_argument("override '" + assignment + "': '" + part + "' does not address an object field");
      }
      node = &(*node)[part];
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = value;
}

}  // namespace sapsm
