#include "sapsm/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace sapsm {

namespace fs = std::filesystem;
using nlohmann::json;

void write_trace(std::ostream& os, const RunTrace& trace, std::size_t m, bool include_timing) {
  const bool steps = !trace.records.empty() && trace.records.front().step.has_value();
  os << "k,proximity";
  for (std::size_t i = 1; i <= m; ++i) os << ",d_" << i;
  os << ",norm_x,elapsed_ns";
  if (steps) os << ",alpha,phi,snorm,zero_branch";
  os << '\n';
  for (const auto& r : trace.records) {
    os << r.k << ',' << format_double(r.proximity);
    for (double d : r.distances) os << ',' << format_double(d);
    os << ',' << format_double(r.norm_x) << ',' << (include_timing ? r.elapsed_ns : 0);
    if (steps) {
      os << ',' << format_double(r.step->alpha) << ',' << format_double(r.step->phi) << ','
         << format_double(r.step->snorm) << ',' << (r.step->zero_branch ? 1 : 0);
    }
    os << '\n';
  }
}

std::optional<std::size_t> TraceTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  return std::nullopt;
}

TraceTable read_trace(std::istream& is) {
  TraceTable t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_trace: empty trace");
  std::stringstream header(line);
  for (std::string col; std::getline(header, col, ',');) t.columns.push_back(col);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("read_trace: bad number '" + cell + "' on line " + std::to_string(lineno));
      }
    }
    if (row.size() != t.columns.size()) {
      throw std::runtime_error("read_trace: line " + std::to_string(lineno) + " has " +
                               std::to_string(row.size()) + " cells, expected " +
                               std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

bool is_manifest(const json& doc) {
  return doc.is_object() && doc.contains("config") && doc.contains("manifest_version");
}

struct Outcome {
  RunTrace trace;
  json summary = json::object();
  int exit_code = kExitError;
};

Outcome run_algorithm(const std::string& algorithm, const ProblemFile& f) {
  Outcome o;
  if (algorithm == "dsap") {
    o.trace = dsap_run(f.problem, f.scheduler, f.x0, f.max_iters, f.eps, f.perturbation);
    o.exit_code = o.trace.converged ? kExitConverged : kExitBudget;
    if (f.objective) o.summary["final_phi"] = evaluate(*f.objective, o.trace.final_iterate());
    return o;
  }
  MinimizationResult r;
  if (algorithm == "sapsm") {
    r = sapsm_run(f.problem, *f.objective, f.scheduler, f.step_size, f.x0, f.max_iters);
  } else {
    r = classical_psm(f.problem, *f.objective, f.step_size, f.x0, f.max_iters, f.proj_tol);
  }
  o.trace = std::move(r.trace);
  o.trace.converged = o.trace.final_proximity() <= f.eps;
  o.exit_code = o.trace.converged ? kExitConverged : kExitBudget;
  o.summary["final_phi"] = o.trace.records.back().step->phi;
  o.summary["best_phi"] = r.best_value;
  o.summary["best_found"] = r.best_found;
  o.summary["report_threshold"] = r.report_threshold;
  o.summary["zero_branch_count"] = r.zero_branch_count;
  o.summary["descent_branch_count"] = r.descent_branch_count;
  return o;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

int run_unchecked(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  const std::string started = utc_now();
  std::string algorithm;
  ProblemFile file = [&] {
    json doc = parse_json_text(read_file(opt.problem_path));
    std::optional<std::string> from_manifest;
    if (is_manifest(doc)) {
      if (doc.contains("algorithm")) from_manifest = doc["algorithm"].get<std::string>();
      doc = json(doc["config"]);
    }
    algorithm = opt.algorithm ? *opt.algorithm : from_manifest.value_or("dsap");
    if (opt.seed) doc["seed"] = *opt.seed;
    if (opt.max_iters) doc["max_iters"] = *opt.max_iters;
    if (opt.eps) doc["eps"] = *opt.eps;
    for (const auto& o : opt.overrides) apply_override(doc, o);
    return problem_file_from_json(doc);
  }();

  if (algorithm != "dsap" && algorithm != "sapsm" && algorithm != "psm-baseline") {
    throw std::invalid_argument("unknown algorithm '" + algorithm +
                                "' (expected dsap, sapsm or psm-baseline)");
  }
  if (algorithm != "dsap" && !file.objective) {
    throw std::invalid_argument("algorithm '" + algorithm +
                                "' requires an 'objective' field in the problem file");
  }

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  const std::string trace_name = "trace.csv";

  Outcome outcome;
  std::string failure;
  try {
    outcome = run_algorithm(algorithm, file);
  } catch (const RunFailure& e) {
    outcome.trace = e.partial();
    outcome.exit_code = kExitError;
    failure = e.what();
  }

  std::ostringstream trace_text;
  write_trace(trace_text, outcome.trace, file.problem.size(), opt.record_timing);
  write_text(dir / trace_name, trace_text.str());

  json summary = outcome.summary;
  summary["iterations"] = outcome.trace.iterations();
  summary["converged"] = outcome.trace.converged;
  if (!outcome.trace.records.empty()) summary["final_proximity"] = outcome.trace.final_proximity();
  if (!failure.empty()) summary["error"] = failure;

  json manifest = {
      {"manifest_version", 1},
      {"library_version", kLibraryVersion},
      {"algorithm", algorithm},
      {"seed", file.seed},
      {"config", to_json(file)},
      {"trace_file", trace_name},
      {"started_at", started},
      {"finished_at", utc_now()},
      {"summary", summary},
      {"exit_code", outcome.exit_code},
  };
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  if (!failure.empty()) {
    err << "error: " << failure << " (partial trace written to " << (dir / trace_name).string() << ")\n";
  } else {
    out << algorithm << ": " << outcome.trace.iterations() << " iterations, final proximity "
        << format_double(outcome.trace.final_proximity());
    if (summary.contains("final_phi")) out << ", final phi " << format_double(summary["final_phi"].get<double>());
    out << (outcome.exit_code == kExitConverged ? " (converged)" : " (budget exhausted)") << '\n';
  }
  return outcome.exit_code;
}

}  // namespace

int run_command(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    return run_unchecked(opt, out, err);
  } catch (const ProblemFileError& e) {
    for (const auto& msg : e.errors()) err << "error: " << msg << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

int validate_command(const std::string& problem_path, std::ostream& out, std::ostream& err) {
  try {
    const ProblemFile f = parse_problem_file(read_file(problem_path));
    out << problem_path << ": ok (J = " << f.problem.dimension() << ", m = " << f.problem.size()
        << (f.objective ? ", with objective" : ", feasibility only") << ")\n";
    return 0;
  } catch (const ProblemFileError& e) {
    for (const auto& msg : e.errors()) err << problem_path << ": " << msg << '\n';
    return kExitError;
  }
}

int oracle_command(const std::string& problem_path, const std::string& cert_path, double grid_step,
                   std::size_t refine_rounds, std::ostream& out, std::ostream& err) {
  try {
    const ProblemFile f = parse_problem_file(read_file(problem_path));
    if (!f.objective) throw std::invalid_argument("the oracle requires an 'objective' field in the problem file");
    const auto sol = brute_force_minimize(f.problem, *f.objective, enclosing_grid_bounds(f.problem), grid_step,
                                          refine_rounds);
    std::ofstream os(cert_path);
    if (!os) throw std::runtime_error("cannot write " + cert_path);
    os << to_json(sol).dump(2) << '\n';
    out << "min_value " << format_double(sol.min_value) << ", accuracy " << format_double(sol.accuracy)
        << (sol.unique ? ", unique" : ", NOT unique") << " -> " << cert_path << '\n';
    return 0;
  } catch (const ProblemFileError& e) {
    for (const auto& msg : e.errors()) err << problem_path << ": " << msg << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

namespace {

struct LoadedRun {
  json manifest;
  TraceTable trace;
};

LoadedRun load_run(const std::string& manifest_path) {
  LoadedRun r;
  r.manifest = parse_json_text(read_file(manifest_path));
  if (!is_manifest(r.manifest)) throw std::invalid_argument(manifest_path + " is not a run manifest");
  const fs::path trace_path = fs::path(manifest_path).parent_path() / r.manifest["trace_file"].get<std::string>();
  std::ifstream in(trace_path);
  if (!in) throw std::runtime_error("cannot open trace " + trace_path.string());
  r.trace = read_trace(in);
  if (r.trace.rows.empty()) throw std::runtime_error("trace " + trace_path.string() + " has no rows");
  return r;
}

}  // namespace

CompareReport compare_command(const std::string& manifest_a, const std::string& manifest_b) {
  const LoadedRun a = load_run(manifest_a);
  const LoadedRun b = load_run(manifest_b);
  const json& ca = a.manifest["config"];
  const json& cb = b.manifest["config"];
  if (ca["dimension"] != cb["dimension"]) {
    throw std::invalid_argument("manifests have mismatched dimensions (" + ca["dimension"].dump() +
                                " vs " + cb["dimension"].dump() + ")");
  }
  if (ca["sets"] != cb["sets"]) throw std::invalid_argument("manifests reference different problems (sets differ)");

  CompareReport rep;
  rep.algorithm_a = a.manifest.value("algorithm", "");
  rep.algorithm_b = b.manifest.value("algorithm", "");
  const std::size_t pa = *a.trace.column("proximity");
  const std::size_t pb = *b.trace.column("proximity");
  const auto fa = a.trace.column("phi");
  const auto fb = b.trace.column("phi");
  const std::size_t n = std::min(a.trace.rows.size(), b.trace.rows.size());
  rep.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CompareRow row;
    row.k = i;
    row.proximity_a = a.trace.rows[i][pa];
    row.proximity_b = b.trace.rows[i][pb];
    if (fa) row.phi_a = a.trace.rows[i][*fa];
    if (fb) row.phi_b = b.trace.rows[i][*fb];
    rep.rows.push_back(row);
  }
  rep.iterations_a = a.trace.rows.size() - 1;
  rep.iterations_b = b.trace.rows.size() - 1;
  rep.final_proximity_a = a.trace.rows.back()[pa];
  rep.final_proximity_b = b.trace.rows.back()[pb];
  if (fa) rep.final_phi_a = a.trace.rows.back()[*fa];
  if (fb) rep.final_phi_b = b.trace.rows.back()[*fb];
  return rep;
}

std::string render_summary(const CompareReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("-"); };
  std::ostringstream ss;
  ss << std::left << std::setw(18) << "" << std::setw(26) << ("A (" + r.algorithm_a + ")")
     << std::setw(26) << ("B (" + r.algorithm_b + ")") << "B - A\n";
  ss << std::setw(18) << "iterations" << std::setw(26) << r.iterations_a << std::setw(26)
     << r.iterations_b << static_cast<long long>(r.iterations_b) - static_cast<long long>(r.iterations_a) << '\n';
  ss << std::setw(18) << "final proximity" << std::setw(26) << format_double(r.final_proximity_a)
     << std::setw(26) << format_double(r.final_proximity_b)
     << format_double(r.final_proximity_b - r.final_proximity_a) << '\n';
  ss << std::setw(18) << "final phi" << std::setw(26) << opt(r.final_phi_a) << std::setw(26)
     << opt(r.final_phi_b)
     << ((r.final_phi_a && r.final_phi_b) ? format_double(*r.final_phi_b - *r.final_phi_a) : "-") << '\n';
  return ss.str();
}

void write_deltas(std::ostream& os, const CompareReport& r) {
  os << "k,d_proximity,d_phi\n";
  for (const auto& row : r.rows) {
    os << row.k << ',' << format_double(row.proximity_b - row.proximity_a) << ',';
    if (row.phi_a && row.phi_b) os << format_double(*row.phi_b - *row.phi_a);
    os << '\n';
  }
}

}  // namespace sapsm
