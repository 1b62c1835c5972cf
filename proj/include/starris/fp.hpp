#pragma once

#include <Eigen/Dense>

#include "starris/scenario.hpp"
#include "starris/star.hpp"

namespace starris {

/// Physical surface coefficients plus the time shares. ES/MS keep both
/// shares at 1; TS splits the frame with lambda_t + lambda_r = 1.
struct RisState {
  Eigen::VectorXcd v_t;
  Eigen::VectorXcd v_r;
  double lambda_t = 1.0;
  double lambda_r = 1.0;
};

/// Fractional-programming block variables: beamformers (one column per
/// user), the SINR auxiliaries rho and the quadratic-transform auxiliaries x.
struct FpState {
  Eigen::MatrixXcd w;   // N x K
  Eigen::VectorXd rho;  // K
  Eigen::VectorXcd x;   // K
};

/// Per-user effective downlink channels, N x K: column l is
/// G^T diag(v_side) h_l + d_l with the side chosen by the user's region.
Eigen::MatrixXcd effective_channels(const ChannelSet& ch,
                                    const Eigen::VectorXcd& v_t,
                                    const Eigen::VectorXcd& v_r);

/// Time-share weighted sum of log(1 + SINR) in nats. A side with zero time
/// share contributes nothing.
double sum_rate_nats(const ChannelSet& ch, const RisState& ris,
                     const Eigen::MatrixXcd& w);
double sum_rate_bits(const ChannelSet& ch, const RisState& ris,
                     const Eigen::MatrixXcd& w);

/// Concave surrogate of the sum rate in nats; equals sum_rate_nats at the
/// closed-form maximizers of (x, rho).
double fp_surrogate(const ChannelSet& ch, const RisState& ris,
                    const FpState& fp);

/// Closed-form maximizer of the surrogate over the quadratic-transform
/// auxiliaries.
Eigen::VectorXcd update_x(const ChannelSet& ch, const RisState& ris,
                          const Eigen::MatrixXcd& w);

/// Closed-form maximizer over the SINR auxiliaries; equals the physical
/// per-user SINR.
Eigen::VectorXd update_rho(const ChannelSet& ch, const RisState& ris,
                           const Eigen::MatrixXcd& w);

struct BeamUpdate {
  Eigen::MatrixXcd w;
  double mu = 0.0;  // dual variable of the power constraint
};

/// Exact minimizer of sum_l (w_l^H Xi w_l - 2 Re[q_l^H w_l]) subject to
/// sum_l ||w_l||^2 <= p_bs via eigendecomposition of Xi and a dual bisection.
/// All-zero q returns w = 0.
BeamUpdate solve_beamformer_qcqp(const Eigen::MatrixXcd& xi,
                                 const Eigen::MatrixXcd& q, double p_bs);

/// Beamformer block update of the surrogate under the BS power budget.
BeamUpdate update_beamformers(const ChannelSet& ch, const RisState& ris,
                              const FpState& fp, double p_bs);

struct TimeShares {
  double lambda_t = 1.0;
  double lambda_r = 1.0;
};

/// Closed-form clamped minimizer of the time-allocation quadratic model
/// (TS mode; ES/MS callers keep shares at 1).
TimeShares update_time_shares(const ChannelSet& ch, const RisState& ris,
                              const FpState& fp);

/// Quadratic model of the coefficient subproblem per side:
/// v^H A v + Re[b^H v], with the penalty gamma/2 ||v - phi||^2 folded in.
struct RisQuadratics {
  Eigen::MatrixXcd a_t;
  Eigen::MatrixXcd a_r;
  Eigen::VectorXcd b_t;
  Eigen::VectorXcd b_r;
};

RisQuadratics build_ris_quadratics(const ChannelSet& ch, const RisState& ris,
                                   const FpState& fp, const AuxCoeffs& aux,
                                   double gamma);

/// TS coefficient update: unconstrained quadratic minimum -A^-1 b / 2 per
/// side. Throws Singular when the system cannot be solved reliably
/// (possible only with gamma = 0 and a rank-deficient model).
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> update_ris_unconstrained(
    const RisQuadratics& quad);

/// One element-pair subproblem of the ES/MS coefficient update, reduced to a
/// single amplitude angle phi in [0, pi/2] with |v_t| = sin(phi),
/// |v_r| = cos(phi).
struct ElementProblem {
  double a_tt = 0.0;  // diagonal of the transmission-side quadratic
  double a_rr = 0.0;
  std::complex<double> c_t;  // linear coefficients at the current sweep state
  std::complex<double> c_r;
};

ElementProblem make_element_problem(const RisQuadratics& quad, int m,
                                    const Eigen::VectorXcd& v_t,
                                    const Eigen::VectorXcd& v_r);

double element_objective(const ElementProblem& p, double phi);

/// Analytic derivative of element_objective:
/// sin(phi) cos(phi) [|c_r|/cos(phi) - |c_t|/sin(phi) - 2 (a_rr - a_tt)].
double element_gradient(const ElementProblem& p, double phi);

struct ElementSolution {
  double phi = 0.0;
  double objective = 0.0;
};

/// Global minimum over [0, pi/2]: bisection on the monotone bracket of the
/// gradient when both linear terms are active, with the endpoints always
/// kept as candidates.
ElementSolution solve_element(const ElementProblem& p, double tol = 1e-10);

/// One Gauss-Seidel sweep over all element pairs in ascending order. Keeps
/// |v_t|^2 + |v_r|^2 = 1 per element by construction.
void update_ris_elements(const RisQuadratics& quad, Eigen::VectorXcd& v_t,
                         Eigen::VectorXcd& v_r);

}  // namespace starris
