#include "orbitope/scenario.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"orbitope: momentum polytopes, parabolic faces and gradient flows of real reductive actions"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario file");
  std::string scenario_path;
  std::string out;
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<std::string> tols;
  bool verify = false;
  run->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
  auto* out_opt = run->add_option("--out", out, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  auto* samples_opt = run->add_option("--samples", samples, "override the sample count");
  run->add_option("--tol", tols, "tolerance override KEY=VAL (repeatable)");
  run->add_flag("--verify", verify, "run the full invariant suite");

  auto* list = app.add_subcommand("presets", "list built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (list->parsed()) {
    for (const auto& p : orbitope::presets()) {
      std::cout << p.name << "  " << p.description << '\n';
    }
    return 0;
  }

  orbitope::RunOptions options;
  if (*out_opt) options.out = out;
  if (*seed_opt) options.seed = seed;
  if (*samples_opt) options.samples = samples;
  options.tolerance_overrides = tols;
  options.verify = verify;
  const auto result = orbitope::run_scenario(std::filesystem::path(scenario_path), options);
  if (!result.report_path.empty()) std::cout << "report: " << result.report_path.string() << '\n';
  for (const auto& f : result.failures) std::cout << "FAIL " << f << '\n';
  std::cout << (result.exit_code == 0 ? "all checks passed" : "exit " + std::to_string(result.exit_code)) << '\n';
  return result.exit_code;
}
