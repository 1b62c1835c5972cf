#pragma once

#include <optional>
#include <string>
#include <vector>

#include "starris/oracle.hpp"
#include "starris/solver.hpp"

namespace starris {

inline constexpr char kVersion[] = "0.1.0";

enum class SweepParam { kPbsDbm, kMElements, kLevels };

const char* sweep_param_name(SweepParam p);

struct SweepSpec {
  SweepParam param = SweepParam::kPbsDbm;
  std::vector<double> values;
};

/// Everything one experiment needs, loadable from a single JSON document.
/// Defaults mirror the desk-scale setup; per-trial seeds derive from
/// (seed, trial) so trial counts never reshuffle randomness.
struct ExperimentConfig {
  ScenarioSpec scenario;
  std::vector<int> star_cases = {5};
  int levels = 4;  // grid size for discrete cases
  PenaltySchedule schedule;
  int trials = 1;
  std::optional<SweepSpec> sweep;
  OracleBudget oracle;
  std::string output_dir = "out";
  bool strict = false;

  void validate() const;
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

std::string solve_report_to_json(const SolveReport& report);

struct TrialResult {
  int case_index = 0;
  int sweep_index = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  SolveReport report;
};

struct ExperimentSummary {
  int not_converged = 0;
  std::vector<std::string> files;
};

/// Runs every (case, sweep value, trial) cell, writes trials.csv,
/// aggregate.csv and manifest.json under output_dir. Trials fan out across
/// threads; rows are emitted in sorted order by a single writer.
ExperimentSummary run_experiment(const ExperimentConfig& config);

/// Per-iteration trace of a single solve (first case, first sweep value,
/// trial 0): trace.csv plus the full report as JSON.
ExperimentSummary trace_experiment(const ExperimentConfig& config);

/// Solver vs exhaustive-search comparison on MS configurations small enough
/// to enumerate. Emits pairs.csv (long format with a source column) and
/// gap_summary.csv.
ExperimentSummary oracle_compare_experiment(const ExperimentConfig& config);

/// Compact self-check battery: closed-form projections against brute force,
/// the surrogate identities, beamformer optimality conditions, the
/// element-update grid search and rerun determinism. Prints one line per
/// check; returns true when everything passes.
bool verify_suite(std::uint64_t seed, bool quick = false);

}  // namespace starris
