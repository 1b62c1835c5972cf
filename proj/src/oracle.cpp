#include "starris/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace starris {

std::uint64_t ms_candidate_count(int m_elements, int levels,
                                 std::uint64_t max_candidates) {
  if (m_elements < 1 || levels < 1)
    throw std::invalid_argument("need m_elements >= 1 and levels >= 1");
  const std::uint64_t base = 2ULL * static_cast<std::uint64_t>(levels);
  std::uint64_t total = 1;
  for (int i = 0; i < m_elements; ++i) {
    if (total > max_candidates / base + 1)
      throw TooLarge("exhaustive search exceeds the candidate budget");
    total *= base;
  }
  if (total > max_candidates)
    throw TooLarge("exhaustive search exceeds the candidate budget");
  return total;
}

RisState ms_candidate(int m_elements, int levels, std::uint64_t index) {
  const std::uint64_t base = 2ULL * static_cast<std::uint64_t>(levels);
  const PhaseGrid grid{levels};
  RisState ris;
  ris.v_t = Eigen::VectorXcd::Zero(m_elements);
  ris.v_r = Eigen::VectorXcd::Zero(m_elements);
  // element 0 is the most significant digit; digit = side * L + phase with
  // side 0 = reflection active
  for (int e = m_elements - 1; e >= 0; --e) {
    const std::uint64_t digit = index % base;
    index /= base;
    const int phase = static_cast<int>(digit % levels);
    const bool transmit = digit >= static_cast<std::uint64_t>(levels);
    if (transmit)
      ris.v_t(e) = std::polar(1.0, grid.value(phase));
    else
      ris.v_r(e) = std::polar(1.0, grid.value(phase));
  }
  return ris;
}

double fp_fixed_ris_rate_nats(const ChannelSet& ch, double p_bs,
                              const RisState& ris, int max_iters, double tol,
                              const Eigen::MatrixXcd* w_start,
                              Eigen::MatrixXcd* w_out) {
  const int n = ch.antennas();
  const int k = ch.users();
  FpState fp;
  if (w_start) {
    fp.w = *w_start;
  } else {
    const Eigen::MatrixXcd a = effective_channels(ch, ris.v_t, ris.v_r);
    fp.w.resize(n, k);
    const double per_user = std::sqrt(p_bs / k);
    for (int l = 0; l < k; ++l) {
      const double an = a.col(l).norm();
      if (an > 0.0) {
        fp.w.col(l) = (per_user / an) * a.col(l).conjugate();
      } else {
        fp.w.col(l) = Eigen::VectorXcd::Zero(n);
        fp.w(0, l) = per_user;
      }
    }
  }
  double rate = sum_rate_nats(ch, ris, fp.w);
  for (int it = 0; it < max_iters; ++it) {
    fp.x = update_x(ch, ris, fp.w);
    fp.rho = update_rho(ch, ris, fp.w);
    fp.w = update_beamformers(ch, ris, fp, p_bs).w;
    const double next = sum_rate_nats(ch, ris, fp.w);
    const bool settled =
        std::abs(next - rate) <= tol * std::max(1.0, std::abs(rate));
    rate = next;
    if (settled) break;
  }
  if (w_out) *w_out = fp.w;
  return rate;
}

namespace {

ExhaustiveResult exhaustive_impl(const ChannelSet& ch, double p_bs,
                                 int levels, const OracleBudget& budget,
                                 bool parallel) {
  const std::uint64_t total =
      ms_candidate_count(ch.elements(), levels, budget.max_candidates);
  double best_rate = -std::numeric_limits<double>::infinity();
  std::uint64_t best_index = 0;
#pragma omp parallel if (parallel)
  {
    double local_rate = -std::numeric_limits<double>::infinity();
    std::uint64_t local_index = 0;
#pragma omp for schedule(dynamic, 16) nowait
    for (long long c = 0; c < static_cast<long long>(total); ++c) {
      const RisState ris =
          ms_candidate(ch.elements(), levels, static_cast<std::uint64_t>(c));
      const double rate = fp_fixed_ris_rate_nats(ch, p_bs, ris,
                                                 budget.inner_iters,
                                                 budget.inner_tol);
      const auto index = static_cast<std::uint64_t>(c);
      if (rate > local_rate || (rate == local_rate && index < local_index)) {
        local_rate = rate;
        local_index = index;
      }
    }
#pragma omp critical
    {
      // total order on (rate, -index) keeps the merge schedule-independent
      if (local_rate > best_rate ||
          (local_rate == best_rate && local_index < best_index &&
           local_rate != -std::numeric_limits<double>::infinity())) {
        best_rate = local_rate;
        best_index = local_index;
      }
    }
  }
  const RisState best = ms_candidate(ch.elements(), levels, best_index);
  ExhaustiveResult out;
  out.best = {best.v_t, best.v_r};
  out.best_rate_bits = best_rate / kLn2;
  out.candidates = total;
  return out;
}

}  // namespace

ExhaustiveResult exhaustive_ms_search(const ChannelSet& ch, double p_bs,
                                      int levels, const OracleBudget& budget) {
  return exhaustive_impl(ch, p_bs, levels, budget, true);
}

ExhaustiveResult exhaustive_ms_search_serial(const ChannelSet& ch,
                                             double p_bs, int levels,
                                             const OracleBudget& budget) {
  return exhaustive_impl(ch, p_bs, levels, budget, false);
}

ExhaustiveResult exhaustive_ms_search(const ScenarioSpec& spec, int levels,
                                      const OracleBudget& budget,
                                      std::uint64_t seed) {
  SplitMix64 channel_rng(derive_seed(seed, 0));
  const ChannelSet ch = build_channels(spec, channel_rng);
  return exhaustive_ms_search(ch, spec.p_bs_watts(), levels, budget);
}

GridSearchResult grid_search_phi(const ElementProblem& p, double step) {
  if (step <= 0.0) throw std::invalid_argument("step must be positive");
  GridSearchResult best{0.0, element_objective(p, 0.0)};
  const long steps = std::lround(std::ceil(0.5 * kPi / step));
  for (long i = 1; i <= steps; ++i) {
    const double phi = std::min(i * step, 0.5 * kPi);
    const double f = element_objective(p, phi);
    if (f < best.objective) best = {phi, f};
  }
  return best;
}

double finite_diff_check(const std::function<double(double)>& f,
                         const std::function<double(double)>& grad,
                         std::span<const double> points, double h) {
  double worst = 0.0;
  for (const double p : points) {
    const double fd = (f(p + h) - f(p - h)) / (2.0 * h);
    const double g = grad(p);
    worst = std::max(worst, std::abs(g - fd) / std::max(1.0, std::abs(fd)));
  }
  return worst;
}

}  // namespace starris
