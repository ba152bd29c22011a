// vexlab <scenario> --config <path> [--out <dir>] [--seed <int>]

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vexlab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Variable-exponent elliptic experiments"};
  std::string scenario, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("scenario", scenario, "spaces-check | solve | cascade | pohozaev | verdict | sweep")->required();
  app.add_option("--config", config_path, "JSON experiment config")->required();
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--seed", seed, "master seed (overrides the config)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : vexlab::kExitConfig;
  }

  try {
    vexlab::ExperimentConfig cfg = vexlab::load_config(config_path);
    if (vexlab::parse_scenario(scenario) != cfg.scenario) {
      // The positional scenario wins; revalidate with it.
      nlohmann::json raw = cfg.raw;
      raw["scenario"] = scenario;
      cfg = vexlab::parse_config(raw, cfg.base_dir);
    }
    if (seed) {
      cfg.seed = *seed;
      cfg.raw["seed"] = *seed;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    const int code = vexlab::run(cfg, &std::cerr);
    if (code == vexlab::kExitNonConvergence) std::cerr << "solver did not converge; see report.json\n";
    return code;
  } catch (const vexlab::Error& e) {
    std::cerr << "error (" << vexlab::to_string(e.code()) << "): " << e.what() << '\n';
    return vexlab::exit_code_for(e.code());
  }
}
