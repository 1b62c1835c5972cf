#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "starris/fp.hpp"

namespace starris {

struct OracleBudget {
  std::uint64_t max_candidates = 1000000;
  int inner_iters = 100;
  double inner_tol = 1e-6;
};

/// (2L)^M with an overflow guard; throws TooLarge past the budget.
std::uint64_t ms_candidate_count(int m_elements, int levels,
                                 std::uint64_t max_candidates);

/// Decodes a candidate index into MS coefficients. Indices are lexicographic
/// over (element, side, phase): element 0 is the most significant digit,
/// each digit is side * L + phase with side 0 = reflection active.
RisState ms_candidate(int m_elements, int levels, std::uint64_t index);

/// Rate in nats reached by the inner fractional-programming loop
/// (x, rho, w) on fixed surface coefficients, from a matched-filter start on
/// the effective channels unless a warm start is supplied.
double fp_fixed_ris_rate_nats(const ChannelSet& ch, double p_bs,
                              const RisState& ris, int max_iters, double tol,
                              const Eigen::MatrixXcd* w_start = nullptr,
                              Eigen::MatrixXcd* w_out = nullptr);

struct ExhaustiveResult {
  AuxCoeffs best;
  double best_rate_bits = 0.0;
  std::uint64_t candidates = 0;
};

/// Exhaustive search over every MS configuration, each scored by the shared
/// inner loop. Candidates are independent; the parallel reduction breaks
/// rate ties toward the smaller index, so the result does not depend on the
/// thread count.
ExhaustiveResult exhaustive_ms_search(const ChannelSet& ch, double p_bs,
                                      int levels, const OracleBudget& budget);
ExhaustiveResult exhaustive_ms_search_serial(const ChannelSet& ch,
                                             double p_bs, int levels,
                                             const OracleBudget& budget);

/// Convenience overload matching the solver's seed convention (channels
/// from seed stream 0), so both see the same realization.
ExhaustiveResult exhaustive_ms_search(const ScenarioSpec& spec, int levels,
                                      const OracleBudget& budget,
                                      std::uint64_t seed);

struct GridSearchResult {
  double phi = 0.0;
  double objective = 0.0;
};

/// Dense scan of the element objective over [0, pi/2].
GridSearchResult grid_search_phi(const ElementProblem& p, double step);

/// Max relative mismatch between an analytic derivative and central finite
/// differences over the given interior points.
double finite_diff_check(const std::function<double(double)>& f,
                         const std::function<double(double)>& grad,
                         std::span<const double> points, double h = 1e-6);

}  // namespace starris
