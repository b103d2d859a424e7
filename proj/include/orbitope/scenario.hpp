#pragma once

// Declarative scenarios: parsing, task execution and report emission.

#include "orbitope/flowlab.hpp"
#include "orbitope/presets.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace orbitope {

/// Malformed or inconsistent scenario input.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error("cli", what) {}
};

struct Scenario {
  std::string group_name;  // preset, base name or "custom"
  std::string base;        // empty for custom generators
  MatrixList generators;   // defining generators of the base algebra
  RepresentationSpec rep;
  std::vector<std::string> tasks;
  std::uint64_t seed = 1;
  int samples = 200;
  Tolerances tol;
  std::string output_dir = "out";
};

const std::vector<std::string>& task_names();

/// Parses scenario text. Errors carry line and column.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// Applies "KEY=VAL" to the tolerance table.
void apply_tolerance(Tolerances& tol, const std::string& assignment);

/// CSV with header t,value,x0..x{n-1}; 17 significant digits, LF endings.
void emit_plot_data(const FlowTrace& trace, const std::filesystem::path& path);

struct RunOptions {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::vector<std::string> tolerance_overrides;
  bool verify = false;
};

struct RunResult {
  int exit_code = 0;
  std::filesystem::path report_path;
  std::vector<std::string> failures;
};

/// Runs every task and writes report.json plus CSV traces. Exit code 0 when
/// all checks pass, 2 on a failed check or numerical error, 1 on input
/// error. Never throws for scenario-level problems.
RunResult run_scenario(const std::filesystem::path& path, const RunOptions& options = {});
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace orbitope
