#pragma once

#include <cstdint>
#include <vector>

#include "starris/fp.hpp"

namespace starris {

/// Outer penalty loop controls. gamma0 == 0 picks the scale-aware default
/// 1e-2 * |surrogate at the initial point|; the value actually used is
/// recorded in the report.
struct PenaltySchedule {
  double gamma0 = 0.0;
  double c = 10.0;
  double delta = 1e-4;
  double bcd_tol = 1e-5;
  int max_bcd_iters = 200;
  int max_penalty_rounds = 12;

  void validate() const;
};

struct TraceRow {
  int round = 0;
  int pass = 0;
  double gamma = 0.0;
  double penalized_objective_nats = 0.0;
  double sum_rate_bits = 0.0;
  double residual = 0.0;
};

struct SolveReport {
  std::vector<TraceRow> trace;
  std::vector<double> residual_trace;  // one entry per penalty round
  int i_pen = 0;
  int i_bcd = 0;
  double wall_time_s = 0.0;
  bool converged = false;
  double gamma0_used = 0.0;
  PenaltySchedule schedule;
  RisState final_raw;
  FpState final_fp;
  AuxCoeffs final_aux;
  RisState final_feasible;
  double final_sum_rate_raw_bits = 0.0;
  double final_sum_rate_feasible_bits = 0.0;
};

struct SolverState {
  FpState fp;
  RisState ris;
  AuxCoeffs aux;
};

/// -surrogate + (gamma/2) sum_p ||v_p - phi_p||^2, in nats.
double penalized_objective(const ChannelSet& ch, const RisState& ris,
                           const FpState& fp, const AuxCoeffs& aux,
                           double gamma);

/// max_m |v_m - phi_m| over both sides.
double split_residual(const RisState& ris, const AuxCoeffs& aux);

/// Feasible starting point: grid-uniform phases with equal-split amplitudes,
/// direct-link matched-filter beamformers at full power, auxiliaries from
/// one closed-form update, and the projected coefficients.
SolverState init_state(const ChannelSet& ch, const StarConfig& config,
                       double p_bs, SplitMix64& rng);

/// One block-coordinate pass: x, rho, w, time shares (TS only), the
/// coefficient block, then re-projection of the auxiliaries. Never increases
/// the penalized objective.
void bcd_pass(SolverState& state, const ChannelSet& ch,
              const StarConfig& config, double gamma, double p_bs);

/// Penalty-driven block-coordinate descent on fixed channels. The returned
/// coefficients come in two flavors: the raw iterate and a repaired state
/// that satisfies every constraint exactly.
SolveReport solve_channels(const ChannelSet& ch, double p_bs,
                           const StarConfig& config,
                           const PenaltySchedule& sched, SplitMix64& rng);

/// Builds one channel realization from (spec, seed) and optimizes it.
/// Channels draw from seed stream 0 and the initializer from stream 1, so
/// other consumers of the same seed see the same realization.
SolveReport solve(const ScenarioSpec& spec, const StarConfig& config,
                  const PenaltySchedule& sched, std::uint64_t seed);

/// Maps the near-feasible iterate onto the exact constraint set: adopt the
/// projected coefficients, rescaling ES/MS amplitude pairs onto the lossless
/// circle while keeping their phases.
RisState repair_feasible(const RisState& ris, const AuxCoeffs& aux,
                         const StarConfig& config);

/// Lossless-power feasibility of a coefficient state under `config`
/// (time-share validity included).
bool ris_feasible(const RisState& ris, const StarConfig& config,
                  double tol = 1e-8);

}  // namespace starris
