#pragma once

#include "sapsm/problem_file.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sapsm {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Exit statuses of `run`.
enum ExitStatus : int { kExitConverged = 0, kExitError = 1, kExitBudget = 2 };

/// Writes one header line and one row per record:
/// k, proximity, d_1..d_m, norm_x, elapsed_ns, then alpha, phi, snorm,
/// zero_branch when the records carry step data. elapsed_ns is written as 0
/// unless include_timing is set, so traces stay byte-reproducible.
void write_trace(std::ostream& os, const RunTrace& trace, std::size_t m, bool include_timing);

/// Column-oriented view of a trace file.
struct TraceTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of `name`, or nothing.
  std::optional<std::size_t> column(const std::string& name) const;
};

TraceTable read_trace(std::istream& is);

struct RunOptions {
  std::string problem_path;
  /// dsap, sapsm or psm-baseline. Taken from the manifest when running from one.
  std::optional<std::string> algorithm;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_iters;
  std::optional<double> eps;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  bool record_timing = false;
};

/// Runs one algorithm on a problem file (or a manifest written by a previous
/// run) and writes <out>/trace.csv and <out>/manifest.json.
/// Returns 0 when the final proximity is <= eps, 2 on budget exhaustion and 1
/// on any error (a partial trace is still written when one exists).
int run_command(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Parses and validates a problem file, printing every error found.
int validate_command(const std::string& problem_path, std::ostream& out, std::ostream& err);

/// Solves a J <= 3 problem file with an objective by brute_force_minimize over
/// enclosing_grid_bounds and writes the certificate JSON to cert_path.
int oracle_command(const std::string& problem_path, const std::string& cert_path, double grid_step,
                   std::size_t refine_rounds, std::ostream& out, std::ostream& err);

struct CompareRow {
  std::size_t k = 0;
  double proximity_a = 0.0;
  double proximity_b = 0.0;
  std::optional<double> phi_a;
  std::optional<double> phi_b;
};

struct CompareReport {
  std::string algorithm_a;
  std::string algorithm_b;
  std::vector<CompareRow> rows;  // iterations present in both traces
  std::size_t iterations_a = 0;
  std::size_t iterations_b = 0;
  double final_proximity_a = 0.0;
  double final_proximity_b = 0.0;
  std::optional<double> final_phi_a;
  std::optional<double> final_phi_b;
};

/// Compares the traces behind two manifests of the same problem. Throws
/// std::invalid_argument when the manifests describe different problems.
CompareReport compare_command(const std::string& manifest_a, const std::string& manifest_b);

/// Terminal-value table.
std::string render_summary(const CompareReport& report);

/// Per-iteration deltas as CSV: k, d_proximity, d_phi.
void write_deltas(std::ostream& os, const CompareReport& report);

}  // namespace sapsm
