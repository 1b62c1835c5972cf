#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "starris/errors.hpp"
#include "starris/rng.hpp"

namespace starris {

double dbm_to_watts(double dbm);
double db_to_linear(double db);

/// Distance-dependent linear gain: ref_gain * (d / ref_distance)^-exponent.
double path_loss(double distance, double ref_gain, double ref_distance,
                 double exponent);

/// Desk-scale downlink deployment: one multi-antenna BS, one surface with M
/// elements, and single-antenna users dropped uniformly within user_radius
/// on the two sides of the surface. All powers are configured in dBm and
/// converted once at ingestion.
struct ScenarioSpec {
  int n_antennas = 8;
  int m_elements = 16;
  int k_reflect = 2;
  int k_transmit = 2;
  double p_bs_dbm = 30.0;
  double noise_dbm = -80.0;
  Eigen::Vector2d bs_position{0.0, 20.0};
  Eigen::Vector2d ris_position{40.0, 0.0};
  double user_radius = 8.0;
  double pathloss_ref_db = -30.0;  // gain at ref_distance
  double ref_distance = 1.0;
  double alpha_bs_ris = 2.2;
  double alpha_ris_user = 2.2;
  double alpha_bs_user = 3.6;
  double kappa_bs_ris = 5.0;
  double kappa_ris_user = 5.0;
  double kappa_bs_user = 0.0;
  double antenna_spacing = 0.5;  // element spacing over wavelength
  std::uint64_t seed = 1;

  int users() const { return k_reflect + k_transmit; }
  double p_bs_watts() const { return dbm_to_watts(p_bs_dbm); }
  double noise_watts() const { return dbm_to_watts(noise_dbm); }
  void validate() const;
};

/// Rician fading draw with steering-vector LoS component:
/// sqrt(nu/(kappa+1)) * (sqrt(kappa) * s(aoa) s(aod)^T + NLoS), NLoS entries
/// i.i.d. CN(0,1) filled column-major.
Eigen::MatrixXcd rician_channel(int rows, int cols, double nu, double kappa,
                                double aoa, double aod, double spacing,
                                SplitMix64& rng);

struct Geometry {
  std::vector<Eigen::Vector2d> user_positions;  // reflection users first
  std::vector<double> ris_user_distance;
  std::vector<double> bs_user_distance;
  double bs_ris_distance = 0.0;
};

/// Drops users into half-disks around the surface; reflection users share
/// the BS half-plane.
Geometry sample_geometry(const ScenarioSpec& spec, SplitMix64& rng);

struct ChannelSet {
  Eigen::MatrixXcd g;      // BS -> surface, M x N
  Eigen::MatrixXcd h;      // surface -> user, M x K (one column per user)
  Eigen::MatrixXcd d;      // BS -> user direct, N x K
  Eigen::VectorXd sigma2;  // noise power per user, watts
  int k_reflect = 0;
  int k_transmit = 0;

  int users() const { return k_reflect + k_transmit; }
  int elements() const { return static_cast<int>(g.rows()); }
  int antennas() const { return static_cast<int>(g.cols()); }
  bool is_reflection_user(int l) const { return l < k_reflect; }
};

/// One channel realization. Deterministic: identical (spec, rng state) give
/// identical output. Draw order is geometry, G, then h and d per user.
ChannelSet build_channels(const ScenarioSpec& spec, SplitMix64& rng);

}  // namespace starris
