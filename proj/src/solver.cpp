#include "starris/solver.hpp"

#include <chrono>
#include <cmath>

namespace starris {

namespace {

using cxd = std::complex<double>;

double phase_of(cxd v) { return v == 0.0 ? 0.0 : std::arg(v); }

}  // namespace

void PenaltySchedule::validate() const {
  if (gamma0 < 0.0) throw ConfigError("gamma0 must be >= 0 (0 = auto scale)");
  if (c <= 1.0) throw ConfigError("penalty ratio c must be > 1");
  if (delta <= 0.0) throw ConfigError("fulfillment threshold must be positive");
  if (bcd_tol <= 0.0) throw ConfigError("bcd tolerance must be positive");
  if (max_bcd_iters < 1 || max_penalty_rounds < 1)
    throw ConfigError("iteration caps must be >= 1");
}

double penalized_objective(const ChannelSet& ch, const RisState& ris,
                           const FpState& fp, const AuxCoeffs& aux,
                           double gamma) {
  const double penalty = (ris.v_t - aux.phi_t).squaredNorm() +
                         (ris.v_r - aux.phi_r).squaredNorm();
  return -fp_surrogate(ch, ris, fp) + 0.5 * gamma * penalty;
}

double split_residual(const RisState& ris, const AuxCoeffs& aux) {
  const double rt = (ris.v_t - aux.phi_t).cwiseAbs().maxCoeff();
  const double rr = (ris.v_r - aux.phi_r).cwiseAbs().maxCoeff();
  return std::max(rt, rr);
}

SolverState init_state(const ChannelSet& ch, const StarConfig& config,
                       double p_bs, SplitMix64& rng) {
  const int m = ch.elements();
  const int n = ch.antennas();
  const int k = ch.users();
  const bool ts = config.mode == StarMode::kTs;
  const double amplitude = ts ? 1.0 : 1.0 / std::sqrt(2.0);

  SolverState st;
  st.ris.v_t.resize(m);
  st.ris.v_r.resize(m);
  for (int i = 0; i < m; ++i) {
    double ph_t, ph_r;
    if (config.phase.continuous()) {
      ph_t = rng.uniform(0.0, kTwoPi);
      ph_r = rng.uniform(0.0, kTwoPi);
    } else {
      const int levels = config.phase.levels;
      ph_t = config.phase.value(
          static_cast<int>(rng.uniform01() * levels) % levels);
      ph_r = config.phase.value(
          static_cast<int>(rng.uniform01() * levels) % levels);
    }
    st.ris.v_t(i) = std::polar(amplitude, ph_t);
    st.ris.v_r(i) = std::polar(amplitude, ph_r);
  }
  st.ris.lambda_t = ts ? 0.5 : 1.0;
  st.ris.lambda_r = ts ? 0.5 : 1.0;

  // matched filters on the direct links, full power split evenly
  st.fp.w.resize(n, k);
  const double per_user = std::sqrt(p_bs / k);
  for (int l = 0; l < k; ++l) {
    const double dn = ch.d.col(l).norm();
    if (dn > 0.0) {
      st.fp.w.col(l) = (per_user / dn) * ch.d.col(l).conjugate();
    } else {
      st.fp.w.col(l) = Eigen::VectorXcd::Zero(n);
      st.fp.w(0, l) = per_user;
    }
  }
  st.fp.x = update_x(ch, st.ris, st.fp.w);
  st.fp.rho = update_rho(ch, st.ris, st.fp.w);
  st.aux = project_star(st.ris.v_t, st.ris.v_r, config);
  return st;
}

void bcd_pass(SolverState& st, const ChannelSet& ch, const StarConfig& config,
              double gamma, double p_bs) {
  st.fp.x = update_x(ch, st.ris, st.fp.w);
  st.fp.rho = update_rho(ch, st.ris, st.fp.w);
  st.fp.w = update_beamformers(ch, st.ris, st.fp, p_bs).w;

  if (config.mode == StarMode::kTs) {
    // the closed-form split minimizes its quadratic model, whose curvature
    // uses the bare noise powers; keep the step only when the exact
    // penalized objective does not move up
    const double before =
        penalized_objective(ch, st.ris, st.fp, st.aux, gamma);
    const double saved_t = st.ris.lambda_t;
    const double saved_r = st.ris.lambda_r;
    const TimeShares shares = update_time_shares(ch, st.ris, st.fp);
    st.ris.lambda_t = shares.lambda_t;
    st.ris.lambda_r = shares.lambda_r;
    const double after = penalized_objective(ch, st.ris, st.fp, st.aux, gamma);
    if (after > before + 1e-12 * std::max(1.0, std::abs(before))) {
      st.ris.lambda_t = saved_t;
      st.ris.lambda_r = saved_r;
    }
  }

  const RisQuadratics quad =
      build_ris_quadratics(ch, st.ris, st.fp, st.aux, gamma);
  if (config.mode == StarMode::kTs) {
    auto [v_t, v_r] = update_ris_unconstrained(quad);
    st.ris.v_t = std::move(v_t);
    st.ris.v_r = std::move(v_r);
  } else {
    update_ris_elements(quad, st.ris.v_t, st.ris.v_r);
  }
  st.aux = project_star(st.ris.v_t, st.ris.v_r, config);
}

SolveReport solve_channels(const ChannelSet& ch, double p_bs,
                           const StarConfig& config,
                           const PenaltySchedule& sched, SplitMix64& rng) {
  config.validate();
  sched.validate();
  const auto t0 = std::chrono::steady_clock::now();

  SolverState st = init_state(ch, config, p_bs, rng);
  const double f1_init = fp_surrogate(ch, st.ris, st.fp);
  double gamma = sched.gamma0 > 0.0
                     ? sched.gamma0
                     : 1e-2 * std::max(std::abs(f1_init), 1e-3);

  SolveReport rep;
  rep.schedule = sched;
  rep.gamma0_used = gamma;

  for (int round = 1; round <= sched.max_penalty_rounds; ++round) {
    rep.i_pen = round;
    double prev = penalized_objective(ch, st.ris, st.fp, st.aux, gamma);
    for (int pass = 1; pass <= sched.max_bcd_iters; ++pass) {
      bcd_pass(st, ch, config, gamma, p_bs);
      const double cur = penalized_objective(ch, st.ris, st.fp, st.aux, gamma);
      rep.trace.push_back({round, pass, gamma, cur,
                           sum_rate_bits(ch, st.ris, st.fp.w),
                           split_residual(st.ris, st.aux)});
      ++rep.i_bcd;
      const bool settled =
          std::abs(prev - cur) <= sched.bcd_tol * std::max(1.0, std::abs(cur));
      prev = cur;
      if (settled) break;
    }
    const double residual = split_residual(st.ris, st.aux);
    rep.residual_trace.push_back(residual);
    if (residual <= sched.delta) {
      rep.converged = true;
      break;
    }
    gamma *= sched.c;
  }

  rep.final_raw = st.ris;
  rep.final_fp = st.fp;
  rep.final_aux = st.aux;
  rep.final_sum_rate_raw_bits = sum_rate_bits(ch, st.ris, st.fp.w);
  rep.final_feasible = repair_feasible(st.ris, st.aux, config);
  rep.final_sum_rate_feasible_bits =
      sum_rate_bits(ch, rep.final_feasible, st.fp.w);
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

SolveReport solve(const ScenarioSpec& spec, const StarConfig& config,
                  const PenaltySchedule& sched, std::uint64_t seed) {
  SplitMix64 channel_rng(derive_seed(seed, 0));
  const ChannelSet ch = build_channels(spec, channel_rng);
  SplitMix64 init_rng(derive_seed(seed, 1));
  return solve_channels(ch, spec.p_bs_watts(), config, sched, init_rng);
}

RisState repair_feasible(const RisState& ris, const AuxCoeffs& aux,
                         const StarConfig& config) {
  RisState out = ris;
  if (config.mode == StarMode::kTs) {
    out.v_t = aux.phi_t;  // already unit modulus on the grid
    out.v_r = aux.phi_r;
    const double lt = std::clamp(ris.lambda_t, 0.0, 1.0);
    out.lambda_t = lt;
    out.lambda_r = 1.0 - lt;
    return out;
  }
  out.lambda_t = 1.0;
  out.lambda_r = 1.0;
  const int m = static_cast<int>(aux.phi_t.size());
  for (int i = 0; i < m; ++i) {
    const cxd pt = aux.phi_t(i);
    const cxd pr = aux.phi_r(i);
    const double power = std::norm(pt) + std::norm(pr);
    if (power > 0.0) {
      const double scale = 1.0 / std::sqrt(power);
      out.v_t(i) = scale * pt;
      out.v_r(i) = scale * pr;
      continue;
    }
    // both projected amplitudes vanished; fall back to the raw amplitude
    // split with projected phases
    double at = std::abs(ris.v_t(i));
    double ar = std::abs(ris.v_r(i));
    const double raw = std::sqrt(at * at + ar * ar);
    if (raw > 0.0) {
      at /= raw;
      ar /= raw;
    } else {
      at = ar = 1.0 / std::sqrt(2.0);
    }
    if (config.coupled) {
      const double theta =
          proj_discrete_phase(phase_of(ris.v_t(i)), config.phase);
      out.v_t(i) = std::polar(at, theta);
      out.v_r(i) = std::polar(ar, theta - 0.5 * kPi);
    } else {
      out.v_t(i) = std::polar(
          at, proj_discrete_phase(phase_of(ris.v_t(i)), config.phase));
      out.v_r(i) = std::polar(
          ar, proj_discrete_phase(phase_of(ris.v_r(i)), config.phase));
    }
  }
  return out;
}

bool ris_feasible(const RisState& ris, const StarConfig& config, double tol) {
  if (ris.v_t.size() != ris.v_r.size()) return false;
  if (config.mode == StarMode::kTs) {
    if (ris.lambda_t < -tol || ris.lambda_r < -tol) return false;
    if (std::fabs(ris.lambda_t + ris.lambda_r - 1.0) > tol) return false;
  } else {
    if (std::fabs(ris.lambda_t - 1.0) > tol ||
        std::fabs(ris.lambda_r - 1.0) > tol)
      return false;
  }
  for (Eigen::Index i = 0; i < ris.v_t.size(); ++i) {
    // unified lossless constraint over modes
    const double power = ris.lambda_t * std::norm(ris.v_t(i)) +
                         ris.lambda_r * std::norm(ris.v_r(i));
    if (std::fabs(power - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace starris
