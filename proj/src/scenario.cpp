#include "starris/scenario.hpp"

#include <cmath>

#include "starris/numerics.hpp"

namespace starris {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double path_loss(double distance, double ref_gain, double ref_distance,
                 double exponent) {
  return ref_gain * std::pow(distance / ref_distance, -exponent);
}

void ScenarioSpec::validate() const {
  if (n_antennas < 1 || m_elements < 1)
    throw ConfigError("antenna and element counts must be >= 1");
  if (k_reflect < 0 || k_transmit < 0 || users() < 1)
    throw ConfigError("need at least one user, none negative");
  if (user_radius <= 0.0) throw ConfigError("user radius must be positive");
  if (ref_distance <= 0.0) throw ConfigError("reference distance must be positive");
  if (alpha_bs_ris <= 0.0 || alpha_ris_user <= 0.0 || alpha_bs_user <= 0.0)
    throw ConfigError("path-loss exponents must be positive");
  if (kappa_bs_ris < 0.0 || kappa_ris_user < 0.0 || kappa_bs_user < 0.0)
    throw ConfigError("Rician factors must be nonnegative");
  if (antenna_spacing <= 0.0) throw ConfigError("antenna spacing must be positive");
}

namespace {

Eigen::VectorXcd steering(int n, double angle, double spacing) {
  Eigen::VectorXcd s(n);
  const double phase_step = kTwoPi * spacing * std::sin(angle);
  for (int i = 0; i < n; ++i) s(i) = std::polar(1.0, i * phase_step);
  return s;
}

}  // namespace

Eigen::MatrixXcd rician_channel(int rows, int cols, double nu, double kappa,
                                double aoa, double aod, double spacing,
                                SplitMix64& rng) {
  Eigen::MatrixXcd ch(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) ch(r, c) = rng.gaussian_c();
  if (kappa > 0.0)
    ch += std::sqrt(kappa) * (steering(rows, aoa, spacing) *
                              steering(cols, aod, spacing).transpose());
  return std::sqrt(nu / (kappa + 1.0)) * ch;
}

Geometry sample_geometry(const ScenarioSpec& spec, SplitMix64& rng) {
  Geometry geo;
  geo.bs_ris_distance = (spec.bs_position - spec.ris_position).norm();
  // the surface plane is the vertical line through ris_position; reflection
  // users share the BS half-plane
  const double bs_side =
      spec.bs_position.x() <= spec.ris_position.x() ? -1.0 : 1.0;
  for (int u = 0; u < spec.users(); ++u) {
    const double side = u < spec.k_reflect ? bs_side : -bs_side;
    const double radius =
        std::max(spec.user_radius * std::sqrt(rng.uniform01()), 1e-3);
    const double angle = rng.uniform(-0.5 * kPi, 0.5 * kPi);
    const Eigen::Vector2d pos =
        spec.ris_position + Eigen::Vector2d(side * radius * std::cos(angle),
                                            radius * std::sin(angle));
    geo.user_positions.push_back(pos);
    geo.ris_user_distance.push_back(radius);
    geo.bs_user_distance.push_back((pos - spec.bs_position).norm());
  }
  return geo;
}

ChannelSet build_channels(const ScenarioSpec& spec, SplitMix64& rng) {
  spec.validate();
  const Geometry geo = sample_geometry(spec, rng);
  const double ref_gain = db_to_linear(spec.pathloss_ref_db);
  ChannelSet ch;
  ch.k_reflect = spec.k_reflect;
  ch.k_transmit = spec.k_transmit;

  const double nu_g = path_loss(geo.bs_ris_distance, ref_gain,
                                spec.ref_distance, spec.alpha_bs_ris);
  const double g_aoa = rng.uniform(0.0, kTwoPi);
  const double g_aod = rng.uniform(0.0, kTwoPi);
  ch.g = rician_channel(spec.m_elements, spec.n_antennas, nu_g,
                        spec.kappa_bs_ris, g_aoa, g_aod, spec.antenna_spacing,
                        rng);

  ch.h.resize(spec.m_elements, spec.users());
  ch.d.resize(spec.n_antennas, spec.users());
  for (int l = 0; l < spec.users(); ++l) {
    const double nu_h = path_loss(geo.ris_user_distance[l], ref_gain,
                                  spec.ref_distance, spec.alpha_ris_user);
    const double aoa = rng.uniform(0.0, kTwoPi);
    ch.h.col(l) = rician_channel(spec.m_elements, 1, nu_h, spec.kappa_ris_user,
                                 aoa, 0.0, spec.antenna_spacing, rng);
  }
  for (int l = 0; l < spec.users(); ++l) {
    const double nu_d = path_loss(geo.bs_user_distance[l], ref_gain,
                                  spec.ref_distance, spec.alpha_bs_user);
    const double aoa = rng.uniform(0.0, kTwoPi);
    ch.d.col(l) = rician_channel(spec.n_antennas, 1, nu_d, spec.kappa_bs_user,
                                 aoa, 0.0, spec.antenna_spacing, rng);
  }
  ch.sigma2 = Eigen::VectorXd::Constant(spec.users(), spec.noise_watts());
  return ch;
}

}  // namespace starris
