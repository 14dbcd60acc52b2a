#pragma once

#include "sapsm/oracle.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sapsm {

/// Every problem found while reading a problem file, each prefixed by the
/// offending field path ("scheduler.delta: ...").
class ProblemFileError : public std::runtime_error {
public:
  explicit ProblemFileError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

private:
  std::vector<std::string> errors_;
};

/// A fully validated run configuration.
struct ProblemFile {
  Problem problem;
  std::optional<Objective> objective;
  Scheduler scheduler;
  StepSizeRule step_size;
  Vector x0;
  std::size_t max_iters = 1000;
  double eps = 1e-8;
  std::optional<PerturbationPlan> perturbation;
  std::uint64_t seed = 0;
  double proj_tol = kDefaultProjTol;
};

/// JSON syntax check only; errors carry line and column.
nlohmann::json parse_json_text(const std::string& text);

/// Parses JSON text. Syntax errors report line and column; semantic errors are
/// all collected before throwing ProblemFileError.
ProblemFile parse_problem_file(const std::string& text);

/// Same, from an already parsed document.
ProblemFile problem_file_from_json(const nlohmann::json& doc);

/// Canonical JSON form; problem_file_from_json(to_json(f)) reproduces f.
nlohmann::json to_json(const ProblemFile& file);

/// Certificate form of an oracle solution, stored next to a problem file:
/// {"minimizer", "min_value", "method", "accuracy", "tilt_spread", "unique"}.
nlohmann::json to_json(const OracleSolution& solution);

/// Inverse of to_json(OracleSolution). Throws ProblemFileError listing every bad field.
OracleSolution oracle_solution_from_json(const nlohmann::json& doc);

/// Applies "a.b.c=VALUE" to the document. VALUE is read as JSON when it parses,
/// otherwise as a string. Array elements are addressed by number ("x0.1=0.5").
void apply_override(nlohmann::json& doc, const std::string& assignment);

}  // namespace sapsm
