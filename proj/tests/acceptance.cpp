// Acceptance suite: end-to-end checks of the optimization library at fixed
// tolerances, one pass/fail line per criterion.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "starris/experiment.hpp"
#include "test_support.hpp"

using namespace starris;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int index, const char* name, bool pass,
            const std::string& detail, double seconds) {
  if (!pass) ++g_failures;
  fmt::print("[{}] criterion {}: {} ({}; {:.1f} s)\n",
             pass ? "PASS" : "FAIL", index, name, detail, seconds);
  std::fflush(stdout);
}

// ---- criterion 1: closed-form projections vs exhaustive enumeration ------

void criterion_1() {
  Timer timer;
  SplitMix64 rng(1001);
  double worst = 0.0;
  long checked = 0;
  for (const int case_index : {1, 2, 3, 4, 6, 7, 8}) {
    const bool coupled = case_index >= 7;
    for (const int levels :
         coupled ? std::vector<int>{4, 8} : std::vector<int>{2, 4, 8}) {
      StarConfig config = StarConfig::from_case(case_index, levels);
      config.phase.levels = levels;  // discrete grid for every listed case
      config.validate();
      const int m = 1000;
      Eigen::VectorXcd v_t(m), v_r(m);
      for (int i = 0; i < m; ++i) {
        v_t(i) = 1.5 * rng.gaussian_c();
        v_r(i) = 1.5 * rng.gaussian_c();
      }
      const AuxCoeffs aux = project_star(v_t, v_r, config);
      const BruteForceResult bf = project_brute_force(v_t, v_r, config);
      for (int i = 0; i < m; ++i) {
        const double closed = std::norm(v_t(i) - aux.phi_t(i)) +
                              std::norm(v_r(i) - aux.phi_r(i));
        const double exhaustive = std::norm(v_t(i) - bf.aux.phi_t(i)) +
                                  std::norm(v_r(i) - bf.aux.phi_r(i));
        worst = std::max(worst, std::fabs(closed - exhaustive));
        ++checked;
      }
    }
  }
  const double secs = timer.seconds();
  report(1, "projection optimality", worst <= 1e-10 && secs < 10.0,
         fmt::format("{} elements, max objective gap {:.2e}", checked, worst),
         secs);
}

// ---- criterion 2: surrogate identities ------------------------------------

void criterion_2() {
  Timer timer;
  SplitMix64 rng(1002);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int m = 4 + static_cast<int>(rng.uniform01() * 5);
    const int n = 2 + static_cast<int>(rng.uniform01() * 5);
    const int kr = 1 + static_cast<int>(rng.uniform01() * 3);
    const int kt = 1 + static_cast<int>(rng.uniform01() * 3);
    ChannelSet ch = test_support::random_channels(rng, m, n, kr, kt,
                                                  0.2 + rng.uniform01());
    RisState ris = test_support::random_ris(rng, m);
    if (rep % 3 == 0) {
      const double lt = rng.uniform01();
      ris.lambda_t = lt;
      ris.lambda_r = 1.0 - lt;
    }
    FpState fp;
    fp.w = test_support::random_complex(rng, n, kr + kt);
    fp.x = update_x(ch, ris, fp.w);
    fp.rho = update_rho(ch, ris, fp.w);
    worst = std::max(worst, std::fabs(fp_surrogate(ch, ris, fp) -
                                      sum_rate_nats(ch, ris, fp.w)));
  }
  double scalar_worst = 0.0;
  for (const double gamma : {0.1, 1.0, 10.0}) {
    const auto value = [gamma](double rho) {
      return std::log1p(rho) - rho + (1.0 + rho) * gamma / (1.0 + gamma);
    };
    scalar_worst =
        std::max(scalar_worst, std::fabs(value(gamma) - std::log1p(gamma)));
    for (double rho = 0.0; rho <= 4.0 * gamma; rho += 0.001 * gamma)
      scalar_worst = std::max(scalar_worst, value(rho) - value(gamma));
  }
  const double secs = timer.seconds();
  report(2, "surrogate equivalence",
         worst <= 1e-9 && scalar_worst <= 1e-10 && secs < 5.0,
         fmt::format("max |surrogate - rate| {:.2e}, scalar identity {:.2e}", worst,
                     scalar_worst),
         secs);
}

// ---- criterion 3: beamformer optimality ------------------------------------

void criterion_3() {
  Timer timer;
  SplitMix64 rng(1003);
  double worst_gap = 0.0;
  bool kkt = true;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform01() * 15);  // <= 16
    const int k = 1 + static_cast<int>(rng.uniform01() * 8);   // <= 8
    const int rank = 1 + static_cast<int>(rng.uniform01() * n);
    const Eigen::MatrixXcd xi = test_support::random_psd(rng, n, rank);
    const Eigen::MatrixXcd q = test_support::random_complex(rng, n, k);
    const double p_bs = 0.05 + 2.0 * rng.uniform01();
    const BeamUpdate upd = solve_beamformer_qcqp(xi, q, p_bs);
    const double power = upd.w.squaredNorm();
    if (power > p_bs * (1.0 + 1e-8)) kkt = false;
    if (upd.mu > 0.0 && std::fabs(power - p_bs) > 1e-6 * p_bs) kkt = false;
    const double closed =
        std::real((upd.w.adjoint() * xi * upd.w).trace()) -
        2.0 * std::real((q.adjoint() * upd.w).trace());
    const double reference = test_support::pg_beamformer_objective(xi, q, p_bs);
    worst_gap = std::max(worst_gap, std::fabs(closed - reference) /
                                        std::max(1.0, std::fabs(reference)));
  }
  const double secs = timer.seconds();
  report(3, "beamformer optimality",
         worst_gap <= 1e-6 && kkt && secs < 30.0,
         fmt::format("max relative gap {:.2e}, slackness {}", worst_gap,
                     kkt ? "ok" : "violated"),
         secs);
}

// ---- criterion 4: per-element coefficient update ---------------------------

void criterion_4() {
  Timer timer;
  SplitMix64 rng(1004);
  double worst_obj = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    ElementProblem p;
    p.a_tt = rng.uniform(0.0, 3.0);
    p.a_rr = rng.uniform(0.0, 3.0);
    p.c_t = rng.uniform01() < 0.05 ? std::complex<double>(0.0)
                                   : std::complex<double>(rng.gaussian_c());
    p.c_r = rng.uniform01() < 0.05 ? std::complex<double>(0.0)
                                   : std::complex<double>(rng.gaussian_c());
    const ElementSolution sol = solve_element(p);
    const GridSearchResult scan = grid_search_phi(p, 1e-5);
    worst_obj = std::max(worst_obj, sol.objective - scan.objective);
  }
  double worst_grad = 0.0;
  {
    ElementProblem p;
    p.a_tt = rng.uniform(0.0, 3.0);
    p.a_rr = rng.uniform(0.0, 3.0);
    p.c_t = rng.gaussian_c();
    p.c_r = rng.gaussian_c();
    std::vector<double> points;
    for (int i = 0; i < 100; ++i)
      points.push_back(rng.uniform(1e-3, kPi / 2 - 1e-3));
    const auto f = [&p](double phi) { return element_objective(p, phi); };
    const auto g = [&p](double phi) { return element_gradient(p, phi); };
    worst_grad = finite_diff_check(f, g, points);
  }
  const double secs = timer.seconds();
  report(4, "element update vs grid search",
         worst_obj <= 1e-6 && worst_grad <= 1e-5 && secs < 10.0,
         fmt::format("objective excess {:.2e}, gradient mismatch {:.2e}",
                     worst_obj, worst_grad),
         secs);
}

// ---- criterion 5: convergence behavior across all models -------------------

void criterion_5() {
  Timer timer;
  ScenarioSpec spec;
  spec.m_elements = 16;
  spec.n_antennas = 8;
  spec.k_reflect = 2;
  spec.k_transmit = 2;
  spec.p_bs_dbm = 30.0;
  spec.noise_dbm = -80.0;
  const PenaltySchedule sched;  // delta = 1e-4
  const int solves = 50;
  std::vector<SolveReport> reports(solves);
  std::vector<int> cases(solves);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < solves; ++i) {
    cases[i] = 1 + (i % 8);
    const StarConfig config = StarConfig::from_case(cases[i], 4);
    reports[i] = solve(spec, config, sched, 2000 + i);
  }
  int monotone_violations = 0;
  int residual_violations = 0;
  int single_round_violations = 0;
  int converged = 0;
  for (int i = 0; i < solves; ++i) {
    const SolveReport& rep = reports[i];
    for (std::size_t r = 1; r < rep.trace.size(); ++r) {
      if (rep.trace[r].round == rep.trace[r - 1].round &&
          rep.trace[r].penalized_objective_nats >
              rep.trace[r - 1].penalized_objective_nats + 1e-8)
        ++monotone_violations;
    }
    if (rep.converged) {
      ++converged;
      if (rep.residual_trace.back() > sched.delta) ++residual_violations;
    }
    if (cases[i] == 5 && rep.i_pen != 1) ++single_round_violations;
  }
  const double secs = timer.seconds();
  report(5, "convergence properties",
         monotone_violations == 0 && residual_violations == 0 &&
             single_round_violations == 0 && converged == solves &&
             secs < 300.0,
         fmt::format("{} solves converged, {} monotonicity / {} residual / "
                     "{} single-round violations",
                     converged, monotone_violations, residual_violations,
                     single_round_violations),
         secs);
}

// ---- criterion 6: solver vs exhaustive search ------------------------------

void criterion_6() {
  Timer timer;
  ScenarioSpec base;
  base.m_elements = 6;
  base.n_antennas = 4;
  base.k_reflect = 1;
  base.k_transmit = 1;
  base.noise_dbm = -80.0;
  const StarConfig config = StarConfig::from_case(4, 2);
  const PenaltySchedule sched;
  const OracleBudget budget;
  const std::vector<double> powers{10.0, 20.0, 30.0};
  const int seeds = 20;
  const int jobs = static_cast<int>(powers.size()) * seeds;
  std::vector<double> gaps(jobs);
  std::vector<bool> bounded(jobs);
#pragma omp parallel for schedule(dynamic)
  for (int job = 0; job < jobs; ++job) {
    ScenarioSpec spec = base;
    spec.p_bs_dbm = powers[job / seeds];
    const std::uint64_t seed = 3000 + job % seeds;
    SplitMix64 channel_rng(derive_seed(seed, 0));
    const ChannelSet ch = build_channels(spec, channel_rng);
    SplitMix64 init_rng(derive_seed(seed, 1));
    const SolveReport rep =
        solve_channels(ch, spec.p_bs_watts(), config, sched, init_rng);
    const ExhaustiveResult ex =
        exhaustive_ms_search_serial(ch, spec.p_bs_watts(), 2, budget);
    const double refined =
        fp_fixed_ris_rate_nats(ch, spec.p_bs_watts(), rep.final_feasible,
                               budget.inner_iters, budget.inner_tol,
                               &rep.final_fp.w) /
        std::log(2.0);
    const double oracle = std::max(ex.best_rate_bits, refined);
    gaps[job] = (oracle - rep.final_sum_rate_feasible_bits) /
                std::max(oracle, 1e-12);
    bounded[job] = rep.final_sum_rate_feasible_bits <= oracle + 1e-9;
  }
  double gap_sum = 0.0;
  bool all_bounded = true;
  for (int job = 0; job < jobs; ++job) {
    gap_sum += gaps[job];
    all_bounded = all_bounded && bounded[job];
  }
  const double mean_gap = gap_sum / jobs;
  const double secs = timer.seconds();
  report(6, "exhaustive-search comparison",
         mean_gap <= 0.10 && all_bounded && secs < 600.0,
         fmt::format("mean gap {:.2f}% over {} runs, upper bound {}",
                     100.0 * mean_gap, jobs,
                     all_bounded ? "held" : "violated"),
         secs);
}

// ---- criterion 7: mode comparison at scale ---------------------------------

void criterion_7() {
  Timer timer;
  ScenarioSpec spec;
  spec.m_elements = 16;
  spec.n_antennas = 8;
  spec.k_reflect = 2;
  spec.k_transmit = 2;
  spec.p_bs_dbm = 30.0;
  spec.noise_dbm = -80.0;
  const PenaltySchedule sched;
  const int seeds = 30;
  // ES continuous, ES two-phase, ES coupled continuous, MS continuous
  const std::vector<std::pair<int, int>> setups{{5, 0}, {6, 2}, {7, 0},
                                                {3, 0}};
  std::vector<double> mean_bits(setups.size(), 0.0);
#pragma omp parallel for collapse(2) schedule(dynamic)
  for (int s = 0; s < static_cast<int>(setups.size()); ++s) {
    for (int t = 0; t < seeds; ++t) {
      const StarConfig config =
          StarConfig::from_case(setups[s].first, setups[s].second);
      const SolveReport rep = solve(spec, config, sched, 4000 + t);
      #pragma omp atomic
      mean_bits[s] += rep.final_sum_rate_feasible_bits / seeds;
    }
  }
  const double es_cont = mean_bits[0];
  const double es_two_phase = mean_bits[1];
  const double es_coupled = mean_bits[2];
  const double ms_cont = mean_bits[3];
  const bool discrete_close = es_two_phase >= 0.92 * es_cont;
  const bool coupled_close = es_coupled >= 0.95 * es_cont;
  const bool es_beats_ms = es_cont >= ms_cont;
  const double secs = timer.seconds();
  report(7, "mode comparison",
         discrete_close && coupled_close && es_beats_ms && secs < 900.0,
         fmt::format("ES {:.2f}, ES L=2 {:.2f} ({:+.2f}%), coupled {:.2f} "
                     "({:+.2f}%), MS {:.2f}",
                     es_cont, es_two_phase,
                     100.0 * (es_two_phase / es_cont - 1.0), es_coupled,
                     100.0 * (es_coupled / es_cont - 1.0), ms_cont),
         secs);
}

// ---- criterion 8: rerun determinism ----------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_8() {
  Timer timer;
  const fs::path base = fs::temp_directory_path() / "starris_acceptance_det";
  std::error_code ec;
  fs::remove_all(base, ec);
  ExperimentConfig cfg;
  cfg.scenario.m_elements = 8;
  cfg.scenario.n_antennas = 4;
  cfg.scenario.k_reflect = 1;
  cfg.scenario.k_transmit = 1;
  cfg.scenario.p_bs_dbm = 20.0;
  cfg.scenario.seed = 11;
  cfg.levels = 2;
  cfg.trials = 2;
  cfg.star_cases = {2, 4, 5, 8};
  cfg.levels = 4;
  cfg.sweep = SweepSpec{SweepParam::kPbsDbm, {10.0, 20.0}};
  cfg.output_dir = (base / "a").string();
  run_experiment(cfg);
  cfg.output_dir = (base / "b").string();
  run_experiment(cfg);
  ExperimentConfig traced = cfg;
  traced.sweep.reset();
  traced.star_cases = {8};
  traced.output_dir = (base / "ta").string();
  trace_experiment(traced);
  traced.output_dir = (base / "tb").string();
  trace_experiment(traced);
  const bool same =
      slurp(base / "a" / "trials.csv") == slurp(base / "b" / "trials.csv") &&
      slurp(base / "a" / "aggregate.csv") ==
          slurp(base / "b" / "aggregate.csv") &&
      slurp(base / "ta" / "trace.csv") == slurp(base / "tb" / "trace.csv");
  fs::remove_all(base, ec);
  const double secs = timer.seconds();
  report(8, "rerun determinism", same,
         same ? "byte-identical CSV bodies" : "outputs differ", secs);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (g_failures == 0) {
    fmt::print("all acceptance criteria passed\n");
    return 0;
  }
  fmt::print("{} acceptance criteria failed\n", g_failures);
  return 1;
}
