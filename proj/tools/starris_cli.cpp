#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "starris/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool strict = false;
};

void add_common(CLI::App* sub, CommonFlags& flags, bool need_config) {
  auto* config =
      sub->add_option("--config", flags.config_path, "experiment config JSON");
  if (need_config) config->required();
  sub->add_option("--seed", flags.seed, "override the scenario seed");
  sub->add_option("--out", flags.out_dir, "override the output directory");
  sub->add_flag("--strict", flags.strict,
                "exit nonzero when any solve hits the round cap");
}

starris::ExperimentConfig load(const CommonFlags& flags, CLI::App* sub) {
  starris::ExperimentConfig cfg = starris::load_config(flags.config_path);
  if (sub->count("--seed") > 0) cfg.scenario.seed = flags.seed;
  if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;
  cfg.strict = flags.strict;
  return cfg;
}

int finish(const starris::ExperimentConfig& cfg,
           const starris::ExperimentSummary& summary) {
  for (const std::string& f : summary.files)
    std::printf("wrote %s/%s\n", cfg.output_dir.c_str(), f.c_str());
  if (summary.not_converged > 0) {
    std::fprintf(stderr, "%d solve(s) hit the penalty round cap\n",
                 summary.not_converged);
    if (cfg.strict) return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STAR-RIS coefficient optimization experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  bool quick = false;

  CLI::App* run = app.add_subcommand("run", "run the configured experiment");
  add_common(run, flags, true);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a parameter sweep (config needs a sweep block)");
  add_common(sweep, flags, true);
  CLI::App* compare = app.add_subcommand(
      "compare-modes", "run all eight surface models on shared channels");
  add_common(compare, flags, true);
  CLI::App* trace =
      app.add_subcommand("trace", "per-iteration trace of a single solve");
  add_common(trace, flags, true);
  CLI::App* oracle = app.add_subcommand(
      "oracle-compare", "solver vs exhaustive search on small MS instances");
  add_common(oracle, flags, true);
  CLI::App* verify = app.add_subcommand(
      "verify", "self-check battery (projections, identities, determinism)");
  add_common(verify, flags, false);
  verify->add_flag("--quick", quick, "smaller sample sizes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const std::uint64_t seed = verify->count("--seed") > 0 ? flags.seed : 1;
      return starris::verify_suite(seed, quick) ? 0 : 1;
    }
    if (run->parsed()) {
      const starris::ExperimentConfig cfg = load(flags, run);
      return finish(cfg, starris::run_experiment(cfg));
    }
    if (sweep->parsed()) {
      const starris::ExperimentConfig cfg = load(flags, sweep);
      if (!cfg.sweep)
        throw starris::ConfigError("sweep needs a sweep block in the config");
      return finish(cfg, starris::run_experiment(cfg));
    }
    if (compare->parsed()) {
      starris::ExperimentConfig cfg = load(flags, compare);
      cfg.star_cases = {1, 2, 3, 4, 5, 6, 7, 8};
      cfg.validate();
      return finish(cfg, starris::run_experiment(cfg));
    }
    if (trace->parsed()) {
      const starris::ExperimentConfig cfg = load(flags, trace);
      return finish(cfg, starris::trace_experiment(cfg));
    }
    if (oracle->parsed()) {
      const starris::ExperimentConfig cfg = load(flags, oracle);
      return finish(cfg, starris::oracle_compare_experiment(cfg));
    }
  } catch (const starris::TooLarge& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const starris::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const starris::InvalidGrid& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
