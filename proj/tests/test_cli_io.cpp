#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <sapsm/commands.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sapsm;
using testing::v2;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kMinimal = R"({
  "dimension": 2,
  "sets": [{"type": "halfspace", "a": [1, 0], "b": 0}, {"type": "halfspace", "a": [0, 1], "b": 1}]
})";

const char* kBallHalfspace = R"({
  "dimension": 2,
  "sets": [{"type": "ball", "center": [0, 0], "radius": 1}, {"type": "halfspace", "a": [-1, 0], "b": 0.5}],
  "bounded_witness": {"index": 0, "radius": 1},
  "objective": {"type": "linear", "c": [1, 1]},
  "scheduler": {"type": "random", "delta": 0.25, "q_bar": 3, "anchored": true},
  "step_size": {"type": "harmonic", "a": 1},
  "x0": [1, 1],
  "max_iters": 20000,
  "eps": 1e-4,
  "seed": 42
})";

std::vector<std::string> errors_of(const std::string& text) {
  try {
    parse_problem_file(text);
  } catch (const ProblemFileError& e) {
    return e.errors();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& errs, const std::string& needle) {
  return std::any_of(errs.begin(), errs.end(), [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

// Fresh directory under the system temp dir, removed on scope exit.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("sapsm_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& problem, const std::string& out_dir, std::optional<std::string> algorithm = {},
        std::vector<std::string> overrides = {}) {
  RunOptions opt;
  opt.problem_path = problem;
  opt.algorithm = std::move(algorithm);
  opt.out_dir = out_dir;
  opt.overrides = std::move(overrides);
  std::ostringstream out, err;
  return run_command(opt, out, err);
}

}  // namespace

TEST_CASE("minimal problem file and defaults") {
  const auto f = parse_problem_file(kMinimal);
  CHECK(f.problem.size() == 2);
  CHECK(f.problem.dimension() == 2);
  CHECK_FALSE(f.objective.has_value());
  CHECK(f.x0 == Vector::Zero(2));
  CHECK(f.max_iters == 1000);
  CHECK(f.eps == 1e-8);
  CHECK(f.seed == 0);
  CHECK_FALSE(f.perturbation.has_value());
}

TEST_CASE("semantic errors name the field and the constraint") {
  json doc = json::parse(kMinimal);
  doc["scheduler"] = {{"type", "random"}, {"delta", 0.6}};
  const auto delta = errors_of(doc.dump());
  REQUIRE(delta.size() == 1);
  CHECK(delta[0].find("scheduler.delta") != std::string::npos);
  CHECK(delta[0].find("0 < delta < 1/m") != std::string::npos);
  CHECK(delta[0].find("got 0.6") != std::string::npos);

  doc = json::parse(kMinimal);
  doc["scheduler"] = {{"type", "fixed"}, {"delta", 0.1},
                      {"plan", {{{"strings", {{0}, {1}}}, {"weights", {0.5, 0.6}}}}}};
  const auto weights = errors_of(doc.dump());
  CHECK(any_contains(weights, "scheduler.plan[0].weights"));
  CHECK(any_contains(weights, "sum to 1"));

  // Every error is reported, not just the first.
  doc = json::parse(kMinimal);
  doc["x0"] = {1, 2, 3};
  doc["eps"] = -1;
  doc["bogus"] = true;
  doc["sets"][1]["type"] = "cone";
  const auto many = errors_of(doc.dump());
  CHECK(any_contains(many, "x0"));
  CHECK(any_contains(many, "eps"));
  CHECK(any_contains(many, "bogus: unknown field"));
  CHECK(any_contains(many, "sets[1]"));
  CHECK(many.size() >= 4);

  doc = json::parse(kMinimal);
  doc["perturbation"] = {{"scale", 1.0}};
  CHECK(any_contains(errors_of(doc.dump()), "bounded_witness"));
  doc = json::parse(kMinimal);
  doc["sets"].push_back({{"type", "ball"}, {"center", {0, 0, 0}}, {"radius", 1}});
  CHECK(any_contains(errors_of(doc.dump()), "sets[2]"));
}

TEST_CASE("syntax errors carry line and column") {
  const auto errs = errors_of("{\n  \"dimension\": 2,\n  \"sets\": [,]\n}");
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("syntax error at line 3") != std::string::npos);
  CHECK(errs[0].find("column") != std::string::npos);
}

TEST_CASE("to_json round trip") {
  const auto f = parse_problem_file(kBallHalfspace);
  const json j = to_json(f);
  const auto g = problem_file_from_json(j);
  CHECK(to_json(g) == j);
  CHECK(g.seed == 42);
  CHECK(g.objective.has_value());
  CHECK(g.x0 == v2(1, 1));

  // Every scheduler and step-size variant survives the round trip.
  const json variants[] = {
      {{"type", "cyclic"}},
      {{"type", "simultaneous"}, {"anchored", false}},
      {{"type", "random"}, {"delta", 0.2}, {"q_bar", 4}},
      {{"type", "fixed"}, {"delta", 0.1}, {"plan", {{{"strings", {{0, 1}, {1}}}, {"weights", {0.7, 0.3}}}}}},
  };
  const json rules[] = {{{"type", "harmonic"}, {"a", 2}},
                        {{"type", "power_law"}, {"a", 1}, {"p", 0.75}},
                        {{"type", "explicit"}, {"values", {1.0, 0.5, 0.25}}}};
  for (const auto& s : variants) {
    for (const auto& r : rules) {
      json doc = json::parse(kBallHalfspace);
      doc["scheduler"] = s;
      doc["step_size"] = r;
      const json once = to_json(problem_file_from_json(doc));
      CHECK(to_json(problem_file_from_json(once)) == once);
    }
  }
}

TEST_CASE("apply_override") {
  json doc = json::parse(kBallHalfspace);
  apply_override(doc, "scheduler.delta=0.1");
  CHECK(doc["scheduler"]["delta"] == 0.1);
  apply_override(doc, "x0.1=0.5");
  CHECK(doc["x0"][1] == 0.5);
  apply_override(doc, "step_size.type=power_law");
  CHECK(doc["step_size"]["type"] == "power_law");
  apply_override(doc, "perturbation={\"scale\": 2}");
  CHECK(doc["perturbation"]["scale"] == 2);
  CHECK_THROWS(apply_override(doc, "no_equals_sign"));
  CHECK_THROWS(apply_override(doc, "x0.7=1"));
}

TEST_CASE("format_double and read_trace") {
  testing::Gen g(12);
  for (int i = 0; i < 1000; ++i) {
    const double v = g.uniform(-1e6, 1e6) * std::pow(10.0, g.uniform(-300, 290) / 10.0);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(INFINITY) == "inf");

  const Problem p({ConvexSet::halfspace(v2(1, 0), 0.0), ConvexSet::halfspace(v2(0, 1), 1.0)});
  const auto t = dsap_run(p, Scheduler::fully_simultaneous(), v2(3, 3), 10, 0.0);
  std::stringstream ss;
  write_trace(ss, t, 2, false);
  const auto table = read_trace(ss);
  CHECK(table.columns == std::vector<std::string>{"k", "proximity", "d_1", "d_2", "norm_x", "elapsed_ns"});
  REQUIRE(table.rows.size() == t.records.size());
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    CHECK(table.rows[k][*table.column("proximity")] == t.records[k].proximity);
    CHECK(table.rows[k][*table.column("norm_x")] == t.records[k].norm_x);
    CHECK(table.rows[k][*table.column("elapsed_ns")] == 0.0);
  }
  CHECK_FALSE(table.column("phi").has_value());
}

TEST_CASE("run: exit codes, outputs and byte-identical reruns") {
  TempDir dir("run");
  write_file(dir / "p.json", kMinimal);
  CHECK(run(dir / "p.json", dir / "a") == kExitConverged);
  CHECK(run(dir / "p.json", dir / "b") == kExitConverged);
  CHECK(slurp(dir / "a/trace.csv") == slurp(dir / "b/trace.csv"));
  const json m = json::parse(slurp(dir / "a/manifest.json"));
  CHECK(m["algorithm"] == "dsap");
  CHECK(m["exit_code"] == 0);
  CHECK(m["summary"]["converged"] == true);
  CHECK(m["library_version"] == kLibraryVersion);

  // No objective for sapsm.
  std::ostringstream out, err;
  RunOptions opt;
  opt.problem_path = dir / "p.json";
  opt.algorithm = "sapsm";
  opt.out_dir = dir / "c";
  CHECK(run_command(opt, out, err) == kExitError);
  CHECK(err.str().find("requires an 'objective'") != std::string::npos);

  CHECK(run(dir / "missing.json", dir / "d") == kExitError);
  CHECK(run(dir / "p.json", dir / "e", std::string("gradient-descent")) == kExitError);

  // Budget exhaustion: cyclic projections between overlapping balls never land exactly in C.
  json balls = json::parse(kMinimal);
  balls["sets"] = {{{"type", "ball"}, {"center", {0, 0}}, {"radius", 2}},
                   {{"type", "ball"}, {"center", {3.9, 0}}, {"radius", 2}}};
  balls["x0"] = {0, 30};
  balls["max_iters"] = 3;
  balls["eps"] = 0;
  write_file(dir / "balls.json", balls.dump());
  CHECK(run(dir / "balls.json", dir / "f") == kExitBudget);
  CHECK(json::parse(slurp(dir / "f/manifest.json"))["exit_code"] == 2);
}

TEST_CASE("run: rerunning from a manifest reproduces the trace") {
  TempDir dir("manifest");
  write_file(dir / "bh.json", kBallHalfspace);
  REQUIRE(run(dir / "bh.json", dir / "a", std::string("sapsm"), {"max_iters=500"}) != kExitError);
  CHECK(run(dir / "a/manifest.json", dir / "b") != kExitError);
  const std::string trace = slurp(dir / "a/trace.csv");
  CHECK(!trace.empty());
  CHECK(trace == slurp(dir / "b/trace.csv"));
  const json m = json::parse(slurp(dir / "b/manifest.json"));
  CHECK(m["algorithm"] == "sapsm");
  CHECK(m["config"]["max_iters"] == 500);
}

TEST_CASE("run: a failing run keeps its partial trace") {
  TempDir dir("partial");
  // Unanchored simultaneous strings are not M-fit, so the perturbed run fails at iteration 0.
  json doc = json::parse(kBallHalfspace);
  doc["scheduler"] = {{"type", "simultaneous"}, {"anchored", false}};
  doc["perturbation"] = {{"scale", 1.0}, {"power", 1.0}};
  doc["x0"] = {3, 3};
  write_file(dir / "p.json", doc.dump());
  std::ostringstream out, err;
  RunOptions opt;
  opt.problem_path = dir / "p.json";
  opt.out_dir = dir / "o";
  CHECK(run_command(opt, out, err) == kExitError);
  std::ifstream trace(dir / "o/trace.csv");
  REQUIRE(trace.good());
  CHECK(read_trace(trace).rows.size() == 1);
  const json m = json::parse(slurp(dir / "o/manifest.json"));
  CHECK(m["exit_code"] == 1);
  CHECK(m["summary"]["error"].get<std::string>().find("iteration 0") != std::string::npos);
}

TEST_CASE("compare") {
  TempDir dir("compare");
  write_file(dir / "bh.json", kBallHalfspace);
  REQUIRE(run(dir / "bh.json", dir / "s", std::string("sapsm")) != kExitError);
  REQUIRE(run(dir / "bh.json", dir / "p", std::string("psm-baseline")) != kExitError);

  const auto self = compare_command(dir / "s/manifest.json", dir / "s/manifest.json");
  CHECK(self.rows.size() == self.iterations_a + 1);
  std::stringstream deltas;
  write_deltas(deltas, self);
  const auto table = read_trace(deltas);
  CHECK(table.columns == std::vector<std::string>{"k", "d_proximity", "d_phi"});
  for (const auto& row : table.rows) {
    CHECK(row[1] == 0.0);
    CHECK(row[2] == 0.0);
  }

  const auto r = compare_command(dir / "s/manifest.json", dir / "p/manifest.json");
  CHECK(r.algorithm_a == "sapsm");
  CHECK(r.algorithm_b == "psm-baseline");
  REQUIRE(r.final_phi_a.has_value());
  REQUIRE(r.final_phi_b.has_value());
  CHECK(std::abs(*r.final_phi_a - *r.final_phi_b) <= 5e-2);
  CHECK(std::abs(*r.final_phi_b - (-1.3660254037844386)) <= 1e-3);
  const std::string summary = render_summary(r);
  CHECK(summary.find("sapsm") != std::string::npos);
  CHECK(summary.find("psm-baseline") != std::string::npos);

  json doc3 = json::parse(kMinimal);
  doc3["dimension"] = 3;
  doc3["sets"] = {{{"type", "ball"}, {"center", {0, 0, 0}}, {"radius", 1}}};
  write_file(dir / "three.json", doc3.dump());
  REQUIRE(run(dir / "three.json", dir / "t") != kExitError);
  CHECK_THROWS_WITH_AS(compare_command(dir / "s/manifest.json", dir / "t/manifest.json"),
                       doctest::Contains("mismatched dimensions"), std::invalid_argument);

  json other = json::parse(kBallHalfspace);
  other["sets"][0]["radius"] = 2;
  other["bounded_witness"]["radius"] = 2;
  write_file(dir / "other.json", other.dump());
  REQUIRE(run(dir / "other.json", dir / "o", std::string("sapsm"), {"max_iters=10"}) != kExitError);
  CHECK_THROWS_AS(compare_command(dir / "s/manifest.json", dir / "o/manifest.json"), std::invalid_argument);
}

TEST_CASE("validate_command") {
  TempDir dir("validate");
  write_file(dir / "ok.json", kMinimal);
  write_file(dir / "bad.json", R"({"dimension": 2, "sets": [], "eps": -1})");
  std::ostringstream out, err;
  CHECK(validate_command(dir / "ok.json", out, err) == 0);
  std::ostringstream out2, err2;
  CHECK(validate_command(dir / "bad.json", out2, err2) == 1);
  CHECK(err2.str().find("eps") != std::string::npos);
}

TEST_CASE("oracle certificates round-trip") {
  const auto f = parse_problem_file(kBallHalfspace);
  const auto o = brute_force_minimize(f.problem, *f.objective, enclosing_grid_bounds(f.problem));
  const json cert = to_json(o);
  const auto back = oracle_solution_from_json(json::parse(cert.dump()));
  CHECK(testing::bit_equal(back.minimizer, o.minimizer));
  CHECK(back.min_value == o.min_value);
  CHECK(back.method == "grid");
  CHECK(back.accuracy == o.accuracy);
  CHECK(back.tilt_spread == o.tilt_spread);
  CHECK(back.unique == o.unique);
  CHECK(distance_to_solution_set(back, *f.objective, f.problem, o.minimizer) == 0.0);

  json bad = cert;
  bad.erase("min_value");
  bad["unique"] = "yes";
  bad["extra"] = 1;
  try {
    oracle_solution_from_json(bad);
    FAIL("expected ProblemFileError");
  } catch (const ProblemFileError& e) {
    CHECK(any_contains(e.errors(), "min_value"));
    CHECK(any_contains(e.errors(), "unique"));
    CHECK(any_contains(e.errors(), "extra: unknown field"));
  }
}
