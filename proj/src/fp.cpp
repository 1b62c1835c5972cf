#include "starris/fp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "starris/numerics.hpp"

namespace starris {

namespace {

using cxd = std::complex<double>;

double phase_of(cxd v) { return v == 0.0 ? 0.0 : std::arg(v); }

double user_share(const ChannelSet& ch, const RisState& ris, int l) {
  return ch.is_reflection_user(l) ? ris.lambda_r : ris.lambda_t;
}

}  // namespace

Eigen::MatrixXcd effective_channels(const ChannelSet& ch,
                                    const Eigen::VectorXcd& v_t,
                                    const Eigen::VectorXcd& v_r) {
  Eigen::MatrixXcd a(ch.antennas(), ch.users());
  for (int l = 0; l < ch.users(); ++l) {
    const Eigen::VectorXcd& v = ch.is_reflection_user(l) ? v_r : v_t;
    a.col(l) = ch.g.transpose() * v.cwiseProduct(ch.h.col(l)) + ch.d.col(l);
  }
  return a;
}

double sum_rate_nats(const ChannelSet& ch, const RisState& ris,
                     const Eigen::MatrixXcd& w) {
  const Eigen::MatrixXcd a = effective_channels(ch, ris.v_t, ris.v_r);
  const Eigen::MatrixXcd s = a.transpose() * w;  // s(l, i) = a_l^T w_i
  double rate = 0.0;
  for (int l = 0; l < ch.users(); ++l) {
    const double share = user_share(ch, ris, l);
    if (share <= 0.0) continue;
    double interference = 0.0;
    for (int i = 0; i < ch.users(); ++i)
      if (i != l) interference += std::norm(s(l, i));
    const double sinr =
        std::norm(s(l, l)) / (interference + share * ch.sigma2(l));
    rate += share * std::log1p(sinr);
  }
  return rate;
}

double sum_rate_bits(const ChannelSet& ch, const RisState& ris,
                     const Eigen::MatrixXcd& w) {
  return sum_rate_nats(ch, ris, w) / kLn2;
}

double fp_surrogate(const ChannelSet& ch, const RisState& ris,
                    const FpState& fp) {
  const Eigen::MatrixXcd a = effective_channels(ch, ris.v_t, ris.v_r);
  const Eigen::MatrixXcd s = a.transpose() * fp.w;
  double value = 0.0;
  for (int l = 0; l < ch.users(); ++l) {
    const double share = user_share(ch, ris, l);
    const double rho = fp.rho(l);
    double total = 0.0;
    for (int i = 0; i < ch.users(); ++i) total += std::norm(s(l, i));
    value += share * (std::log1p(rho) - rho);
    value += share * (2.0 * (1.0 + rho) *
                          std::real(std::conj(fp.x(l)) * s(l, l)) -
                      (1.0 + rho) * std::norm(fp.x(l)) *
                          (total + share * ch.sigma2(l)));
  }
  return value;
}

Eigen::VectorXcd update_x(const ChannelSet& ch, const RisState& ris,
                          const Eigen::MatrixXcd& w) {
  const Eigen::MatrixXcd a = effective_channels(ch, ris.v_t, ris.v_r);
  const Eigen::MatrixXcd s = a.transpose() * w;
  Eigen::VectorXcd x(ch.users());
  for (int l = 0; l < ch.users(); ++l) {
    double total = 0.0;
    for (int i = 0; i < ch.users(); ++i) total += std::norm(s(l, i));
    const double denom = total + user_share(ch, ris, l) * ch.sigma2(l);
    x(l) = denom > 0.0 ? cxd(s(l, l) / denom) : cxd(0.0);
  }
  return x;
}

Eigen::VectorXd update_rho(const ChannelSet& ch, const RisState& ris,
                           const Eigen::MatrixXcd& w) {
  const Eigen::MatrixXcd a = effective_channels(ch, ris.v_t, ris.v_r);
  const Eigen::MatrixXcd s = a.transpose() * w;
  Eigen::VectorXd rho(ch.users());
  for (int l = 0; l < ch.users(); ++l) {
    double interference = 0.0;
    for (int i = 0; i < ch.users(); ++i)
      if (i != l) interference += std::norm(s(l, i));
    const double denom = interference + user_share(ch, ris, l) * ch.sigma2(l);
    rho(l) = denom > 0.0 ? std::norm(s(l, l)) / denom : 0.0;
  }
  return rho;
}

BeamUpdate solve_beamformer_qcqp(const Eigen::MatrixXcd& xi,
                                 const Eigen::MatrixXcd& q, double p_bs) {
  const int n = static_cast<int>(xi.rows());
  const int k = static_cast<int>(q.cols());
  BeamUpdate out;
  if (q.norm() == 0.0) {  // degenerate objective
    out.w = Eigen::MatrixXcd::Zero(n, k);
    return out;
  }
  const HermitianEig eig = hermitian_eig(xi);
  const Eigen::MatrixXcd g = eig.u.adjoint() * q;  // rotated targets
  Eigen::VectorXd b_diag(n);
  for (int i = 0; i < n; ++i) b_diag(i) = g.row(i).squaredNorm();
  const double tr_b = b_diag.sum();
  const double lam_floor = 1e-12 * std::max(eig.lambda(0), 1e-300);
  const double b_floor = 1e-28 * std::max(tr_b, 1e-300);

  const auto power_at = [&](double mu) {
    double p = 0.0;
    for (int i = 0; i < n; ++i) {
      if (b_diag(i) <= b_floor) continue;
      const double denom = eig.lambda(i) + mu;
      if (denom <= lam_floor) return std::numeric_limits<double>::infinity();
      p += b_diag(i) / (denom * denom);
    }
    return p;
  };

  double mu = 0.0;
  if (power_at(0.0) > p_bs) {
    // power is strictly decreasing in mu and already feasible at mu_max
    double lo = 0.0;
    double hi = std::sqrt(tr_b / p_bs);
    const double width_tol = 1e-10 * hi;
    for (int it = 0; it < 200; ++it) {
      if (hi - lo <= width_tol && power_at(lo) - power_at(hi) <= 1e-9 * p_bs)
        break;
      const double mid = 0.5 * (lo + hi);
      if (power_at(mid) > p_bs)
        lo = mid;
      else
        hi = mid;
    }
    mu = hi;  // feasible side of the bracket
  }
  out.mu = mu;
  Eigen::VectorXd scale(n);
  for (int i = 0; i < n; ++i) {
    const double denom = eig.lambda(i) + mu;
    scale(i) =
        (b_diag(i) > b_floor && denom > lam_floor) ? 1.0 / denom : 0.0;
  }
  out.w = eig.u * scale.asDiagonal() * g;
  return out;
}

BeamUpdate update_beamformers(const ChannelSet& ch, const RisState& ris,
                              const FpState& fp, double p_bs) {
  const int n = ch.antennas();
  const int k = ch.users();
  const Eigen::MatrixXcd a = effective_channels(ch, ris.v_t, ris.v_r);
  Eigen::MatrixXcd xi = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd q(n, k);
  for (int l = 0; l < k; ++l) {
    const double weight = user_share(ch, ris, l) * (1.0 + fp.rho(l));
    xi.noalias() += weight * std::norm(fp.x(l)) *
                    (a.col(l).conjugate() * a.col(l).transpose());
    q.col(l) = weight * fp.x(l) * a.col(l).conjugate();
  }
  return solve_beamformer_qcqp(xi, q, p_bs);
}

TimeShares update_time_shares(const ChannelSet& ch, const RisState& ris,
                              const FpState& fp) {
  const Eigen::MatrixXcd a = effective_channels(ch, ris.v_t, ris.v_r);
  const Eigen::MatrixXcd s = a.transpose() * fp.w;
  double eta_t = 0.0, eta_r = 0.0, psi_t = 0.0, psi_r = 0.0;
  for (int l = 0; l < ch.users(); ++l) {
    const double rho = fp.rho(l);
    double total = 0.0;
    for (int i = 0; i < ch.users(); ++i) total += std::norm(s(l, i));
    const double eta =
        (1.0 + rho) * (std::norm(fp.x(l)) * total -
                       2.0 * std::real(std::conj(fp.x(l)) * s(l, l))) -
        std::log1p(rho) + rho;
    if (ch.is_reflection_user(l)) {
      eta_r += eta;
      psi_r += ch.sigma2(l);
    } else {
      eta_t += eta;
      psi_t += ch.sigma2(l);
    }
  }
  const double raw = (2.0 * psi_r - eta_t + eta_r) / (2.0 * (psi_t + psi_r));
  const double lambda_t = std::clamp(raw, 0.0, 1.0);
  return {lambda_t, 1.0 - lambda_t};
}

RisQuadratics build_ris_quadratics(const ChannelSet& ch, const RisState& ris,
                                   const FpState& fp, const AuxCoeffs& aux,
                                   double gamma) {
  const int m = ch.elements();
  // sum_i conj(w_i) w_i^T, then its lift onto the element domain
  const Eigen::MatrixXcd w_sum = fp.w.conjugate() * fp.w.transpose();
  const Eigen::MatrixXcd lift =
      ch.g.conjugate() * w_sum * ch.g.transpose();  // M x M
  RisQuadratics out;
  out.a_t = 0.5 * gamma * Eigen::MatrixXcd::Identity(m, m);
  out.a_r = out.a_t;
  out.b_t = -gamma * aux.phi_t;
  out.b_r = -gamma * aux.phi_r;
  for (int l = 0; l < ch.users(); ++l) {
    const bool reflect = ch.is_reflection_user(l);
    const double share = reflect ? ris.lambda_r : ris.lambda_t;
    const double weight = 1.0 + fp.rho(l);
    const Eigen::VectorXcd h_conj = ch.h.col(l).conjugate();
    const Eigen::MatrixXcd a_l =
        (weight * std::norm(fp.x(l))) *
        (h_conj * ch.h.col(l).transpose()).cwiseProduct(lift);
    const Eigen::VectorXcd u = std::norm(fp.x(l)) * (w_sum * ch.d.col(l)) -
                               fp.x(l) * fp.w.col(l).conjugate();
    const Eigen::VectorXcd b_l =
        (2.0 * weight) * h_conj.cwiseProduct(ch.g.conjugate() * u);
    if (reflect) {
      out.a_r += share * a_l;
      out.b_r += share * b_l;
    } else {
      out.a_t += share * a_l;
      out.b_t += share * b_l;
    }
  }
  return out;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> update_ris_unconstrained(
    const RisQuadratics& quad) {
  const auto solve_side = [](const Eigen::MatrixXcd& a,
                             const Eigen::VectorXcd& b) {
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
    Eigen::VectorXcd v = -0.5 * ldlt.solve(b);
    if (ldlt.info() != Eigen::Success ||
        (2.0 * a * v + b).norm() > 1e-6 * std::max(1.0, b.norm()))
      throw Singular("coefficient quadratic is singular");
    return v;
  };
  return {solve_side(quad.a_t, quad.b_t), solve_side(quad.a_r, quad.b_r)};
}

ElementProblem make_element_problem(const RisQuadratics& quad, int m,
                                    const Eigen::VectorXcd& v_t,
                                    const Eigen::VectorXcd& v_r) {
  ElementProblem p;
  p.a_tt = std::real(quad.a_t(m, m));
  p.a_rr = std::real(quad.a_r(m, m));
  p.c_t = quad.b_t(m) +
          2.0 * ((quad.a_t.row(m) * v_t).value() - quad.a_t(m, m) * v_t(m));
  p.c_r = quad.b_r(m) +
          2.0 * ((quad.a_r.row(m) * v_r).value() - quad.a_r(m, m) * v_r(m));
  return p;
}

double element_objective(const ElementProblem& p, double phi) {
  const double c = std::cos(phi);
  return (p.a_rr - p.a_tt) * c * c - std::abs(p.c_r) * c -
         std::abs(p.c_t) * std::sin(phi);
}

double element_gradient(const ElementProblem& p, double phi) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  return s * c *
         (std::abs(p.c_r) / c - std::abs(p.c_t) / s -
          2.0 * (p.a_rr - p.a_tt));
}

ElementSolution solve_element(const ElementProblem& p, double tol) {
  ElementSolution best{0.0, element_objective(p, 0.0)};
  const auto consider = [&](double phi) {
    const double f = element_objective(p, phi);
    if (f < best.objective) best = {phi, f};
  };
  consider(0.5 * kPi);
  const double ct = std::abs(p.c_t);
  const double cr = std::abs(p.c_r);
  // the bracketed factor of the gradient is monotone increasing; it spans
  // (-inf, inf) when both linear terms are active and can still cross zero
  // when only one of them does
  const auto bracket = [&](double phi) {
    return cr / std::cos(phi) - ct / std::sin(phi) - 2.0 * (p.a_rr - p.a_tt);
  };
  const double eps = 1e-9;
  const double lo = eps;
  const double hi = 0.5 * kPi - eps;
  if (bracket(lo) < 0.0 && bracket(hi) > 0.0)
    consider(bisect_root(bracket, lo, hi, tol));
  return best;
}

void update_ris_elements(const RisQuadratics& quad, Eigen::VectorXcd& v_t,
                         Eigen::VectorXcd& v_r) {
  const int m = static_cast<int>(v_t.size());
  for (int i = 0; i < m; ++i) {  // Gauss-Seidel: freshest values downstream
    const ElementProblem p = make_element_problem(quad, i, v_t, v_r);
    const ElementSolution sol = solve_element(p);
    v_t(i) = std::sin(sol.phi) * std::polar(1.0, kPi + phase_of(p.c_t));
    v_r(i) = std::cos(sol.phi) * std::polar(1.0, kPi + phase_of(p.c_r));
  }
}

}  // namespace starris
