#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "starris/numerics.hpp"

namespace starris {

enum class StarMode { kEs, kMs, kTs };

const char* mode_name(StarMode mode);

/// One of the eight surface models: operating mode x coupled-phase x
/// discrete-phase. Coupled phases exist only in ES mode, and a coupled
/// discrete grid must have an even level count above 2.
struct StarConfig {
  StarMode mode = StarMode::kEs;
  bool coupled = false;
  PhaseGrid phase;

  void validate() const;
  int case_index() const;  // 1..8
  static StarConfig from_case(int index, int levels);
};

/// Auxiliary coefficients that satisfy the selection constraints exactly.
struct AuxCoeffs {
  Eigen::VectorXcd phi_t;
  Eigen::VectorXcd phi_r;
};

struct CoeffPair {
  std::complex<double> t;
  std::complex<double> r;
};

// Elementwise closed-form projections of a (transmission, reflection)
// coefficient pair onto the constraint set of each model. The phase of a
// zero coefficient is taken as 0.
CoeffPair project_ts_element(std::complex<double> vt, std::complex<double> vr,
                             const PhaseGrid& grid);
CoeffPair project_ms_element(std::complex<double> vt, std::complex<double> vr,
                             const PhaseGrid& grid);
CoeffPair project_es_element(std::complex<double> vt, std::complex<double> vr,
                             const PhaseGrid& grid);
CoeffPair project_es_coupled_element(std::complex<double> vt,
                                     std::complex<double> vr,
                                     const PhaseGrid& grid);
CoeffPair project_element(std::complex<double> vt, std::complex<double> vr,
                          const StarConfig& config);

AuxCoeffs project_ts(const Eigen::VectorXcd& v_t, const Eigen::VectorXcd& v_r,
                     const PhaseGrid& grid);
AuxCoeffs project_ms(const Eigen::VectorXcd& v_t, const Eigen::VectorXcd& v_r,
                     const PhaseGrid& grid);
AuxCoeffs project_es(const Eigen::VectorXcd& v_t, const Eigen::VectorXcd& v_r,
                     const PhaseGrid& grid);
AuxCoeffs project_es_coupled(const Eigen::VectorXcd& v_t,
                             const Eigen::VectorXcd& v_r,
                             const PhaseGrid& grid);

/// Projects all elements, dispatching on the configured model. Elements are
/// independent; the driver parallelizes large inputs with identical results.
AuxCoeffs project_star(const Eigen::VectorXcd& v_t,
                       const Eigen::VectorXcd& v_r, const StarConfig& config);

/// Single-threaded reference of project_star, kept for testing and the
/// benchmark target.
AuxCoeffs project_star_serial(const Eigen::VectorXcd& v_t,
                              const Eigen::VectorXcd& v_r,
                              const StarConfig& config);

/// sum_m |v_m - phi_m|^2 over both sides.
double projection_objective(const Eigen::VectorXcd& v_t,
                            const Eigen::VectorXcd& v_r,
                            const AuxCoeffs& aux);
double projection_objective_element(std::complex<double> vt,
                                    std::complex<double> vr,
                                    const CoeffPair& p);

struct BruteForceResult {
  AuxCoeffs aux;
  double objective = 0.0;
};

/// Candidates enumerated per element by the brute-force projection.
std::uint64_t brute_force_candidates_per_element(const StarConfig& config);

/// Exhaustive per-element enumeration of the discrete feasible set, the
/// ground truth the closed-form projections are tested against. Requires a
/// finite grid; throws TooLarge past max_candidates options per element.
BruteForceResult project_brute_force(const Eigen::VectorXcd& v_t,
                                     const Eigen::VectorXcd& v_r,
                                     const StarConfig& config,
                                     std::uint64_t max_candidates = 1000000);
BruteForceResult project_brute_force_serial(
    const Eigen::VectorXcd& v_t, const Eigen::VectorXcd& v_r,
    const StarConfig& config, std::uint64_t max_candidates = 1000000);

/// Checks the selection constraints of `config` on a coefficient pair set:
/// amplitudes (TS/MS), grid membership of nonzero-amplitude phases, and the
/// +-pi/2 relation for coupled elements.
bool aux_feasible(const AuxCoeffs& aux, const StarConfig& config,
                  double tol = 1e-9);

}  // namespace starris
