#include <sapsm/commands.hpp>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace sapsm;

namespace {

// Iterates of a trace stacked as rows.
Matrix iterates(const RunTrace& t) {
  if (t.records.empty()) return Matrix(0, 0);
  Matrix out(static_cast<Eigen::Index>(t.records.size()), t.records.front().x.size());
  for (std::size_t k = 0; k < t.records.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = t.records[k].x.transpose();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dynamic string-averaging projections and the string-averaging projected subgradient method";
  m.attr("__version__") = kLibraryVersion;

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);
  py::register_exception<RunFailure>(m, "RunFailure", PyExc_RuntimeError);
  py::register_exception<ProblemFileError>(m, "ProblemFileError", PyExc_ValueError);

  // ---- sets ----
  py::class_<ConvexSet>(m, "ConvexSet")
      .def_static("halfspace", &ConvexSet::halfspace, py::arg("a"), py::arg("b"))
      .def_static("hyperplane", &ConvexSet::hyperplane, py::arg("a"), py::arg("b"))
      .def_static("box", &ConvexSet::box, py::arg("lo"), py::arg("hi"))
      .def_static("ball", &ConvexSet::ball, py::arg("center"), py::arg("radius"))
      .def_static("simplex", &ConvexSet::simplex, py::arg("dimension"), py::arg("scale"))
      .def_property_readonly("dimension", &ConvexSet::dimension)
      .def_property_readonly("kind", &ConvexSet::kind)
      .def("__repr__", [](const ConvexSet& s) { return "<ConvexSet " + s.kind() + " in R^" + std::to_string(s.dimension()) + ">"; });
  m.def("project", &project, py::arg("set"), py::arg("x"));
  m.def("distance", &distance, py::arg("set"), py::arg("x"));
  m.def("contains", &contains, py::arg("set"), py::arg("x"), py::arg("tol") = kDefaultMembershipTol);
  m.def("enclosing_radius", &enclosing_radius, py::arg("set"));

  py::class_<BoundedWitness>(m, "BoundedWitness")
      .def(py::init([](std::size_t index, double radius) { return BoundedWitness{index, radius}; }),
           py::arg("index"), py::arg("radius"))
      .def_readwrite("index", &BoundedWitness::index)
      .def_readwrite("radius", &BoundedWitness::radius);

  py::class_<Problem>(m, "Problem")
      .def(py::init<std::vector<ConvexSet>, std::optional<BoundedWitness>>(), py::arg("sets"),
           py::arg("witness") = std::nullopt)
      .def_property_readonly("dimension", &Problem::dimension)
      .def_property_readonly("sets", &Problem::sets)
      .def_property_readonly("witness", &Problem::witness)
      .def("__len__", &Problem::size);
  m.def("proximity", &proximity, py::arg("problem"), py::arg("x"));
  m.def("distances", &distances, py::arg("problem"), py::arg("x"));

  // ---- strings ----
  py::class_<IndexVector>(m, "IndexVector")
      .def(py::init<std::vector<std::size_t>>(), py::arg("indices"))
      .def_property_readonly("indices", &IndexVector::indices)
      .def("__len__", &IndexVector::length);
  py::implicitly_convertible<std::vector<std::size_t>, IndexVector>();

  py::class_<MStarParams>(m, "MStarParams")
      .def(py::init([](double delta, std::size_t q_bar, std::size_t m) { return MStarParams{delta, q_bar, m}; }),
           py::arg("delta"), py::arg("q_bar"), py::arg("m"))
      .def_readwrite("delta", &MStarParams::delta)
      .def_readwrite("q_bar", &MStarParams::q_bar)
      .def_readwrite("m", &MStarParams::m)
      .def("validate", &MStarParams::validate);

  py::class_<Amalgamator>(m, "Amalgamator")
      .def(py::init<std::vector<IndexVector>, std::vector<double>, std::size_t>(), py::arg("strings"),
           py::arg("weights"), py::arg("m"))
      .def_static("cyclic", &Amalgamator::cyclic, py::arg("m"))
      .def_static("simultaneous", &Amalgamator::simultaneous, py::arg("m"))
      .def_property_readonly("strings", &Amalgamator::strings)
      .def_property_readonly("weights", &Amalgamator::weights)
      .def_property_readonly("num_sets", &Amalgamator::num_sets);
  m.def("apply_string", &apply_string, py::arg("problem"), py::arg("t"), py::arg("x"));
  m.def("apply_amalgamator", &apply_amalgamator, py::arg("problem"), py::arg("a"), py::arg("x"));
  m.def("is_fit", &is_fit, py::arg("strings"), py::arg("m"));
  m.def("is_m_fit", &is_m_fit, py::arg("strings"), py::arg("problem"), py::arg("radius"));
  m.def("validate_amalgamator", &validate_amalgamator, py::arg("a"), py::arg("params"));

  // ---- DSAP ----
  py::class_<Scheduler>(m, "Scheduler")
      .def_static("cyclic_singleton", &Scheduler::cyclic_singleton)
      .def_static("fully_simultaneous", &Scheduler::fully_simultaneous)
      .def_static("fixed_plan", &Scheduler::fixed_plan, py::arg("plan"), py::arg("params"))
      .def_static("random_dynamic", &Scheduler::random_dynamic, py::arg("seed"), py::arg("params"))
      .def("anchored", &Scheduler::anchored)
      .def("params", &Scheduler::params, py::arg("m"))
      .def("at", &Scheduler::at, py::arg("k"), py::arg("problem"));

  py::class_<PerturbationPlan>(m, "PerturbationPlan")
      .def(py::init([](double scale, double power, std::uint64_t seed) { return PerturbationPlan{scale, power, seed}; }),
           py::arg("scale") = 1.0, py::arg("power") = 1.0, py::arg("seed") = 0)
      .def_readwrite("scale", &PerturbationPlan::scale)
      .def_readwrite("power", &PerturbationPlan::power)
      .def_readwrite("seed", &PerturbationPlan::seed)
      .def("gamma", &PerturbationPlan::gamma, py::arg("k"));

  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("alpha", &StepRecord::alpha)
      .def_readonly("phi", &StepRecord::phi)
      .def_readonly("snorm", &StepRecord::snorm)
      .def_readonly("zero_branch", &StepRecord::zero_branch);
  py::class_<TraceRecord>(m, "TraceRecord")
      .def_readonly("k", &TraceRecord::k)
      .def_readonly("x", &TraceRecord::x)
      .def_readonly("distances", &TraceRecord::distances)
      .def_readonly("proximity", &TraceRecord::proximity)
      .def_readonly("norm_x", &TraceRecord::norm_x)
      .def_readonly("elapsed_ns", &TraceRecord::elapsed_ns)
      .def_readonly("step", &TraceRecord::step);
  py::class_<RunTrace>(m, "RunTrace")
      .def_readonly("records", &RunTrace::records)
      .def_readonly("converged", &RunTrace::converged)
      .def_property_readonly("iterations", &RunTrace::iterations)
      .def_property_readonly("final_iterate", &RunTrace::final_iterate)
      .def_property_readonly("final_proximity", &RunTrace::final_proximity)
      .def("iterates", &iterates, "Iterates stacked as rows of an array")
      .def("to_csv", [](const RunTrace& t, std::size_t m) {
        std::ostringstream os;
        write_trace(os, t, m, false);
        return os.str();
      }, py::arg("m"));

  m.def("dsap_step", &dsap_step, py::arg("problem"), py::arg("a"), py::arg("x"));
  m.def("dsap_run", &dsap_run, py::arg("problem"), py::arg("scheduler"), py::arg("x0"), py::arg("max_iters"),
        py::arg("eps"), py::arg("perturbation") = std::nullopt);

  // ---- objectives ----
  py::class_<AffinePiece>(m, "AffinePiece")
      .def(py::init([](Vector a, double b) { return AffinePiece{std::move(a), b}; }), py::arg("a"), py::arg("b"))
      .def_readonly("a", &AffinePiece::a)
      .def_readonly("b", &AffinePiece::b);
  py::class_<Objective>(m, "Objective")
      .def_static("linear", &Objective::linear, py::arg("c"))
      .def_static("quadratic", &Objective::quadratic, py::arg("Q"), py::arg("c"))
      .def_static("max_affine", &Objective::max_affine, py::arg("pieces"))
      .def_static("one_norm", &Objective::one_norm, py::arg("weights"))
      .def_property_readonly("dimension", &Objective::dimension)
      .def_property_readonly("kind", &Objective::kind);
  m.def("evaluate", &evaluate, py::arg("objective"), py::arg("x"));
  m.def("subgradient", &subgradient, py::arg("objective"), py::arg("x"));
  m.def("has_zero_subgradient", &has_zero_subgradient, py::arg("objective"), py::arg("x"),
        py::arg("tol") = kDefaultZeroSubgradientTol);
  m.def("lipschitz_on_ball", [](const Objective& f, double r) { return lipschitz_on_ball(f, r).value; },
        py::arg("objective"), py::arg("radius"));

  // ---- SA-PSM ----
  py::class_<StepSizeRule>(m, "StepSizeRule")
      .def_static("harmonic", &StepSizeRule::harmonic, py::arg("a"))
      .def_static("power_law", &StepSizeRule::power_law, py::arg("a"), py::arg("p"))
      .def_static("explicit_values", &StepSizeRule::explicit_values, py::arg("values"))
      .def("alpha", &StepSizeRule::alpha, py::arg("k"));
  py::class_<SapsmOptions>(m, "SapsmOptions")
      .def(py::init<>())
      .def_readwrite("zero_tol", &SapsmOptions::zero_tol)
      .def_readwrite("report_threshold", &SapsmOptions::report_threshold)
      .def_readwrite("report_threshold_floor", &SapsmOptions::report_threshold_floor)
      .def_readwrite("require_m_fit", &SapsmOptions::require_m_fit);
  py::class_<MinimizationResult>(m, "MinimizationResult")
      .def_readonly("trace", &MinimizationResult::trace)
      .def_readonly("final_iterate", &MinimizationResult::final_iterate)
      .def_readonly("best_iterate", &MinimizationResult::best_iterate)
      .def_readonly("best_value", &MinimizationResult::best_value)
      .def_readonly("best_found", &MinimizationResult::best_found)
      .def_readonly("report_threshold", &MinimizationResult::report_threshold)
      .def_readonly("zero_branch_count", &MinimizationResult::zero_branch_count)
      .def_readonly("descent_branch_count", &MinimizationResult::descent_branch_count);
  m.def("sapsm_run", &sapsm_run, py::arg("problem"), py::arg("objective"), py::arg("scheduler"), py::arg("rule"),
        py::arg("x0"), py::arg("max_iters"), py::arg("options") = SapsmOptions{});
  m.def("check_descent_inequality", &check_descent_inequality, py::arg("problem"), py::arg("objective"),
        py::arg("xbar"), py::arg("x"), py::arg("alpha"), py::arg("a"), py::arg("margin"), py::arg("lbar"));

  // ---- oracles ----
  m.def("project_intersection", [](const Problem& p, const Vector& x, double tol, std::size_t max_sweeps) {
    return project_intersection(p, x, tol, max_sweeps).point;
  }, py::arg("problem"), py::arg("x"), py::arg("tol") = kDefaultProjTol, py::arg("max_sweeps") = kDefaultMaxSweeps);
  m.def("distance_to_intersection", &distance_to_intersection, py::arg("problem"), py::arg("x"),
        py::arg("tol") = kDefaultProjTol, py::arg("max_sweeps") = kDefaultMaxSweeps);
  m.def("classical_psm", &classical_psm, py::arg("problem"), py::arg("objective"), py::arg("rule"), py::arg("x0"),
        py::arg("max_iters"), py::arg("proj_tol") = kDefaultProjTol, py::arg("zero_tol") = kDefaultZeroSubgradientTol);
  py::class_<OracleSolution>(m, "OracleSolution")
      .def_readonly("minimizer", &OracleSolution::minimizer)
      .def_readonly("min_value", &OracleSolution::min_value)
      .def_readonly("method", &OracleSolution::method)
      .def_readonly("accuracy", &OracleSolution::accuracy)
      .def_readonly("tilt_spread", &OracleSolution::tilt_spread)
      .def_readonly("unique", &OracleSolution::unique)
      .def("to_json", [](const OracleSolution& o) { return to_json(o).dump(2); })
      .def_static("from_json", [](const std::string& text) { return oracle_solution_from_json(parse_json_text(text)); },
                  py::arg("text"));
  m.def("brute_force_minimize", [](const Problem& p, const Objective& f, double grid_step, std::size_t rounds,
                                   double feas_tol, double uniqueness_radius) {
    return brute_force_minimize(p, f, enclosing_grid_bounds(p), grid_step, rounds, feas_tol, uniqueness_radius);
  }, py::arg("problem"), py::arg("objective"), py::arg("grid_step") = 1e-2, py::arg("refine_rounds") = 3,
        py::arg("feas_tol") = 0.0, py::arg("uniqueness_radius") = 1e-2,
        "Grid minimizer over the box given by the problem's bounded witness");
  m.def("distance_to_solution_set", &distance_to_solution_set, py::arg("oracle"), py::arg("objective"),
        py::arg("problem"), py::arg("x"), py::arg("value_tol") = 1e-9);

  // ---- problem files and the run pipeline ----
  py::class_<ProblemFile>(m, "ProblemFile")
      .def_readonly("problem", &ProblemFile::problem)
      .def_readonly("objective", &ProblemFile::objective)
      .def_readonly("scheduler", &ProblemFile::scheduler)
      .def_readonly("step_size", &ProblemFile::step_size)
      .def_readonly("x0", &ProblemFile::x0)
      .def_readonly("max_iters", &ProblemFile::max_iters)
      .def_readonly("eps", &ProblemFile::eps)
      .def_readonly("perturbation", &ProblemFile::perturbation)
      .def_readonly("seed", &ProblemFile::seed)
      .def_readonly("proj_tol", &ProblemFile::proj_tol)
      .def("to_json", [](const ProblemFile& f) { return to_json(f).dump(2); });
  m.def("parse_problem_file", &parse_problem_file, py::arg("text"));

  m.def("run", [](const std::string& problem, std::optional<std::string> algorithm, std::optional<std::uint64_t> seed,
                  std::optional<std::size_t> max_iters, std::optional<double> eps, std::vector<std::string> overrides,
                  const std::string& out_dir) {
    RunOptions opt;
    opt.problem_path = problem;
    opt.algorithm = std::move(algorithm);
    opt.seed = seed;
    opt.max_iters = max_iters;
    opt.eps = eps;
    opt.overrides = std::move(overrides);
    opt.out_dir = out_dir;
    std::ostringstream out, err;
    const int code = run_command(opt, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("problem"), py::arg("algorithm") = std::nullopt, py::arg("seed") = std::nullopt,
        py::arg("max_iters") = std::nullopt, py::arg("eps") = std::nullopt,
        py::arg("overrides") = std::vector<std::string>{}, py::arg("out_dir") = ".",
        "Runs the CLI pipeline; returns (exit_code, stdout, stderr)");
}
