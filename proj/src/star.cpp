#include "starris/star.hpp"

#include <cmath>
#include <limits>

namespace starris {

namespace {

using cxd = std::complex<double>;

// phase of a zero coefficient is defined as 0 for projection purposes
double phase_of(cxd v) { return v == 0.0 ? 0.0 : std::arg(v); }

}  // namespace

const char* mode_name(StarMode mode) {
  switch (mode) {
    case StarMode::kEs:
      return "ES";
    case StarMode::kMs:
      return "MS";
    case StarMode::kTs:
      return "TS";
  }
  return "?";
}

void StarConfig::validate() const {
  if (phase.levels < 0) throw InvalidGrid("phase level count must be >= 0");
  if (coupled) {
    if (mode != StarMode::kEs)
      throw ConfigError("coupled phases exist only in ES mode");
    if (!phase.continuous() && (phase.levels <= 2 || phase.levels % 2 != 0))
      throw InvalidGrid(
          "coupled discrete phases need an even level count above 2");
  }
}

int StarConfig::case_index() const {
  const bool d = !phase.continuous();
  switch (mode) {
    case StarMode::kTs:
      return d ? 2 : 1;
    case StarMode::kMs:
      return d ? 4 : 3;
    case StarMode::kEs:
      if (!coupled) return d ? 6 : 5;
      return d ? 8 : 7;
  }
  throw ConfigError("invalid operating mode");
}

StarConfig StarConfig::from_case(int index, int levels) {
  StarConfig c;
  switch (index) {
    case 1: c = {StarMode::kTs, false, PhaseGrid{0}}; break;
    case 2: c = {StarMode::kTs, false, PhaseGrid{levels}}; break;
    case 3: c = {StarMode::kMs, false, PhaseGrid{0}}; break;
    case 4: c = {StarMode::kMs, false, PhaseGrid{levels}}; break;
    case 5: c = {StarMode::kEs, false, PhaseGrid{0}}; break;
    case 6: c = {StarMode::kEs, false, PhaseGrid{levels}}; break;
    case 7: c = {StarMode::kEs, true, PhaseGrid{0}}; break;
    case 8: c = {StarMode::kEs, true, PhaseGrid{levels}}; break;
    default:
      throw ConfigError("case index must be in 1..8");
  }
  if (!c.phase.continuous() && c.phase.levels < 1)
    throw InvalidGrid("discrete cases need levels >= 1");
  c.validate();
  return c;
}

CoeffPair project_ts_element(cxd vt, cxd vr, const PhaseGrid& grid) {
  const double at = proj_discrete_phase(phase_of(vt), grid);
  const double ar = proj_discrete_phase(phase_of(vr), grid);
  return {std::polar(1.0, at), std::polar(1.0, ar)};
}

CoeffPair project_ms_element(cxd vt, cxd vr, const PhaseGrid& grid) {
  const double at = proj_discrete_phase(phase_of(vt), grid);
  const double ar = proj_discrete_phase(phase_of(vr), grid);
  const double beta_t = std::abs(vt) * std::cos(at - phase_of(vt));
  const double beta_r = std::abs(vr) * std::cos(ar - phase_of(vr));
  // ties activate the transmission side
  if (beta_t >= beta_r) return {std::polar(1.0, at), cxd(0.0)};
  return {cxd(0.0), std::polar(1.0, ar)};
}

CoeffPair project_es_element(cxd vt, cxd vr, const PhaseGrid& grid) {
  if (grid.continuous()) return {vt, vr};
  const auto one = [&grid](cxd v) -> cxd {
    const double a = proj_discrete_phase(phase_of(v), grid);
    const double beta = std::abs(v) * std::cos(a - phase_of(v));
    // beta < 0 is possible only for L = 1; amplitude 0 is then optimal
    return beta > 0.0 ? cxd(std::polar(beta, a)) : cxd(0.0);
  };
  return {one(vt), one(vr)};
}

CoeffPair project_es_coupled_element(cxd vt, cxd vr, const PhaseGrid& grid) {
  const double pt = phase_of(vt);
  const double pr = phase_of(vr);
  const double mt2 = std::norm(vt);
  const double mr2 = std::norm(vr);
  // direction of the cos(2 theta + b) objective; undefined when the two
  // terms cancel, in which case any angle is optimal and we keep v_t's
  const cxd z = std::polar(mr2, 2.0 * (pt - pr)) - mt2;
  double theta;
  if (std::abs(z) <= 1e-13 * std::max(mt2 + mr2, 1e-300)) {
    theta = proj_discrete_phase(pt, grid);
  } else {
    theta = proj_discrete_phase(pt - 0.5 * std::arg(z) + 0.5 * kPi, grid);
  }
  const double amp_t = std::abs(vt) * std::cos(theta - pt);  // signed
  const double s = std::sin(theta - pr);
  const double amp_r = std::abs(vr) * std::abs(s);
  const cxd phi_t = amp_t * std::polar(1.0, theta);
  const cxd phi_r =
      amp_r == 0.0
          ? cxd(0.0)
          : cxd(std::polar(amp_r, theta - (s > 0.0 ? 0.5 : -0.5) * kPi));
  return {phi_t, phi_r};
}

CoeffPair project_element(cxd vt, cxd vr, const StarConfig& config) {
  switch (config.mode) {
    case StarMode::kTs:
      return project_ts_element(vt, vr, config.phase);
    case StarMode::kMs:
      return project_ms_element(vt, vr, config.phase);
    case StarMode::kEs:
      return config.coupled ? project_es_coupled_element(vt, vr, config.phase)
                            : project_es_element(vt, vr, config.phase);
  }
  throw ConfigError("invalid operating mode");
}

namespace {

template <typename Kernel>
AuxCoeffs map_elements(const Eigen::VectorXcd& v_t,
                       const Eigen::VectorXcd& v_r, Kernel&& kernel,
                       bool parallel) {
  if (v_t.size() != v_r.size())
    throw std::invalid_argument("coefficient vectors differ in length");
  const Eigen::Index m = v_t.size();
  AuxCoeffs out;
  out.phi_t.resize(m);
  out.phi_r.resize(m);
  // elements are independent; the schedule cannot change the result
#pragma omp parallel for schedule(static) if (parallel && m >= 512)
  for (Eigen::Index i = 0; i < m; ++i) {
    const CoeffPair p = kernel(v_t(i), v_r(i));
    out.phi_t(i) = p.t;
    out.phi_r(i) = p.r;
  }
  return out;
}

}  // namespace

AuxCoeffs project_ts(const Eigen::VectorXcd& v_t, const Eigen::VectorXcd& v_r,
                     const PhaseGrid& grid) {
  return map_elements(
      v_t, v_r,
      [&grid](cxd t, cxd r) { return project_ts_element(t, r, grid); }, true);
}

AuxCoeffs project_ms(const Eigen::VectorXcd& v_t, const Eigen::VectorXcd& v_r,
                     const PhaseGrid& grid) {
  return map_elements(
      v_t, v_r,
      [&grid](cxd t, cxd r) { return project_ms_element(t, r, grid); }, true);
}

AuxCoeffs project_es(const Eigen::VectorXcd& v_t, const Eigen::VectorXcd& v_r,
                     const PhaseGrid& grid) {
  return map_elements(
      v_t, v_r,
      [&grid](cxd t, cxd r) { return project_es_element(t, r, grid); }, true);
}

AuxCoeffs project_es_coupled(const Eigen::VectorXcd& v_t,
                             const Eigen::VectorXcd& v_r,
                             const PhaseGrid& grid) {
  if (!grid.continuous() && (grid.levels <= 2 || grid.levels % 2 != 0))
    throw InvalidGrid(
        "coupled discrete phases need an even level count above 2");
  return map_elements(
      v_t, v_r,
      [&grid](cxd t, cxd r) { return project_es_coupled_element(t, r, grid); },
      true);
}

AuxCoeffs project_star(const Eigen::VectorXcd& v_t,
                       const Eigen::VectorXcd& v_r, const StarConfig& config) {
  config.validate();
  return map_elements(
      v_t, v_r,
      [&config](cxd t, cxd r) { return project_element(t, r, config); }, true);
}

AuxCoeffs project_star_serial(const Eigen::VectorXcd& v_t,
                              const Eigen::VectorXcd& v_r,
                              const StarConfig& config) {
  config.validate();
  return map_elements(
      v_t, v_r,
      [&config](cxd t, cxd r) { return project_element(t, r, config); },
      false);
}

double projection_objective_element(cxd vt, cxd vr, const CoeffPair& p) {
  return std::norm(vt - p.t) + std::norm(vr - p.r);
}

double projection_objective(const Eigen::VectorXcd& v_t,
                            const Eigen::VectorXcd& v_r,
                            const AuxCoeffs& aux) {
  return (v_t - aux.phi_t).squaredNorm() + (v_r - aux.phi_r).squaredNorm();
}

std::uint64_t brute_force_candidates_per_element(const StarConfig& config) {
  const auto levels = static_cast<std::uint64_t>(config.phase.levels);
  if (levels == 0)
    throw std::invalid_argument("brute force needs a finite phase grid");
  switch (config.mode) {
    case StarMode::kTs:
      return levels * levels;  // independent phase pair
    case StarMode::kMs:
      return 2 * levels;  // active side x its phase
    case StarMode::kEs:
      // per angle the optimal amplitudes are closed form, so the angle is
      // the only discrete choice: coupled shares one angle, uncoupled has
      // one per side
      return config.coupled ? levels : 2 * levels;
  }
  throw ConfigError("invalid operating mode");
}

namespace {

// Exhaustive minimizer of |vt - phi_t|^2 + |vr - phi_r|^2 for one element;
// ties keep the first candidate in enumeration order.
CoeffPair brute_force_element(cxd vt, cxd vr, const StarConfig& config) {
  const PhaseGrid& grid = config.phase;
  const int levels = grid.levels;
  CoeffPair best{};
  double best_obj = std::numeric_limits<double>::infinity();
  const auto consider = [&](const CoeffPair& p) {
    const double obj = projection_objective_element(vt, vr, p);
    if (obj < best_obj) {
      best_obj = obj;
      best = p;
    }
  };
  switch (config.mode) {
    case StarMode::kTs:
      for (int kt = 0; kt < levels; ++kt)
        for (int kr = 0; kr < levels; ++kr)
          consider({std::polar(1.0, grid.value(kt)),
                    std::polar(1.0, grid.value(kr))});
      break;
    case StarMode::kMs:
      // transmission side first so exact ties match the closed form
      for (int k = 0; k < levels; ++k)
        consider({std::polar(1.0, grid.value(k)), cxd(0.0)});
      for (int k = 0; k < levels; ++k)
        consider({cxd(0.0), std::polar(1.0, grid.value(k))});
      break;
    case StarMode::kEs:
      if (!config.coupled) {
        // sides are separable; scan each with its per-angle optimal amplitude
        const auto scan_side = [&](cxd v) -> cxd {
          cxd side_best = 0.0;
          double side_obj = std::numeric_limits<double>::infinity();
          for (int k = 0; k < levels; ++k) {
            const double a = grid.value(k);
            const double beta =
                std::max(std::abs(v) * std::cos(a - phase_of(v)), 0.0);
            const cxd cand = beta * std::polar(1.0, a);
            const double obj = std::norm(v - cand);
            if (obj < side_obj) {
              side_obj = obj;
              side_best = cand;
            }
          }
          return side_best;
        };
        best = {scan_side(vt), scan_side(vr)};
        best_obj = projection_objective_element(vt, vr, best);
      } else {
        const double pt = phase_of(vt);
        const double pr = phase_of(vr);
        for (int k = 0; k < levels; ++k) {
          const double theta = grid.value(k);
          const double amp_t = std::abs(vt) * std::cos(theta - pt);
          const double s = std::sin(theta - pr);
          const double amp_r = std::abs(vr) * std::abs(s);
          const cxd phi_t = amp_t * std::polar(1.0, theta);
          const cxd phi_r =
              amp_r == 0.0 ? cxd(0.0)
                           : cxd(std::polar(
                                 amp_r, theta - (s > 0.0 ? 0.5 : -0.5) * kPi));
          consider({phi_t, phi_r});
        }
      }
      break;
  }
  return best;
}

BruteForceResult brute_force_impl(const Eigen::VectorXcd& v_t,
                                  const Eigen::VectorXcd& v_r,
                                  const StarConfig& config,
                                  std::uint64_t max_candidates,
                                  bool parallel) {
  config.validate();
  if (brute_force_candidates_per_element(config) > max_candidates)
    throw TooLarge("brute-force enumeration exceeds the candidate budget");
  BruteForceResult out;
  out.aux = map_elements(
      v_t, v_r,
      [&config](cxd t, cxd r) { return brute_force_element(t, r, config); },
      parallel);
  out.objective = projection_objective(v_t, v_r, out.aux);
  return out;
}

}  // namespace

BruteForceResult project_brute_force(const Eigen::VectorXcd& v_t,
                                     const Eigen::VectorXcd& v_r,
                                     const StarConfig& config,
                                     std::uint64_t max_candidates) {
  return brute_force_impl(v_t, v_r, config, max_candidates, true);
}

BruteForceResult project_brute_force_serial(const Eigen::VectorXcd& v_t,
                                            const Eigen::VectorXcd& v_r,
                                            const StarConfig& config,
                                            std::uint64_t max_candidates) {
  return brute_force_impl(v_t, v_r, config, max_candidates, false);
}

namespace {

bool on_grid(double angle, const PhaseGrid& grid, double tol) {
  if (grid.continuous()) return true;
  return std::fabs(std::remainder(
             angle - grid.value(proj_discrete_index(angle, grid)), kTwoPi)) <=
         tol;
}

}  // namespace

bool aux_feasible(const AuxCoeffs& aux, const StarConfig& config, double tol) {
  if (aux.phi_t.size() != aux.phi_r.size()) return false;
  for (Eigen::Index i = 0; i < aux.phi_t.size(); ++i) {
    const cxd t = aux.phi_t(i);
    const cxd r = aux.phi_r(i);
    const double at = std::abs(t);
    const double ar = std::abs(r);
    switch (config.mode) {
      case StarMode::kTs:
        if (std::fabs(at - 1.0) > tol || std::fabs(ar - 1.0) > tol)
          return false;
        break;
      case StarMode::kMs: {
        const bool t_active = std::fabs(at - 1.0) <= tol && ar <= tol;
        const bool r_active = std::fabs(ar - 1.0) <= tol && at <= tol;
        if (!t_active && !r_active) return false;
        break;
      }
      case StarMode::kEs:
        if (config.coupled && at > tol && ar > tol) {
          // proper-surface condition: the phase difference must be +-pi/2
          if (std::fabs(std::cos(std::arg(t) - std::arg(r))) > 1e-12)
            return false;
        }
        break;
    }
    if (at > tol && !on_grid(std::arg(t), config.phase, tol)) return false;
    if (ar > tol && !on_grid(std::arg(r), config.phase, tol)) return false;
  }
  return true;
}

}  // namespace starris
