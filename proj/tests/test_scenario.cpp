#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "starris/numerics.hpp"
#include "starris/scenario.hpp"

using namespace starris;

TEST_CASE("path loss formula") {
  const double l0 = 1e-3;  // -30 dB
  CHECK(path_loss(1.0, l0, 1.0, 2.2) == doctest::Approx(1e-3));
  CHECK(path_loss(10.0, l0, 1.0, 2.2) ==
        doctest::Approx(1e-3 * std::pow(10.0, -2.2)));
  for (const double alpha : {1.0, 2.2, 3.6})
    CHECK(path_loss(1.0, l0, 1.0, alpha) == doctest::Approx(l0));
  CHECK(db_to_linear(-30.0) == doctest::Approx(1e-3));
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
  CHECK(dbm_to_watts(-80.0) == doctest::Approx(1e-11));
}

TEST_CASE("rayleigh limit has the configured mean power") {
  SplitMix64 rng(5);
  const double nu = 0.37;
  double power = 0.0;
  int count = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::MatrixXcd ch =
        rician_channel(10, 10, nu, 0.0, 0.0, 0.0, 0.5, rng);
    power += ch.squaredNorm();
    count += 100;
  }
  CHECK(power / count == doctest::Approx(nu).epsilon(0.05));
}

TEST_CASE("strong LoS limit pins the entry magnitude") {
  SplitMix64 rng(6);
  const double nu = 2.0;
  const Eigen::MatrixXcd ch =
      rician_channel(8, 4, nu, 1e9, 1.2, 0.4, 0.5, rng);
  for (int i = 0; i < ch.size(); ++i)
    CHECK(std::abs(ch(i)) == doctest::Approx(std::sqrt(nu)).epsilon(1e-3));
}

TEST_CASE("mean entry power equals the path gain for any rician factor") {
  SplitMix64 rng(8);
  for (const double kappa : {0.5, 5.0}) {
    const double nu = 1.3;
    double power = 0.0;
    int count = 0;
    for (int rep = 0; rep < 200; ++rep) {
      const double aoa = rng.uniform(0.0, kTwoPi);
      const double aod = rng.uniform(0.0, kTwoPi);
      const Eigen::MatrixXcd ch =
          rician_channel(8, 8, nu, kappa, aoa, aod, 0.5, rng);
      power += ch.squaredNorm();
      count += 64;
    }
    CHECK(power / count == doctest::Approx(nu).epsilon(0.05));
  }
}

TEST_CASE("geometry puts users on the right side of the surface") {
  ScenarioSpec spec;
  spec.k_reflect = 6;
  spec.k_transmit = 5;
  SplitMix64 rng(9);
  const Geometry geo = sample_geometry(spec, rng);
  CHECK(geo.bs_ris_distance ==
        doctest::Approx(std::sqrt(40.0 * 40.0 + 20.0 * 20.0)));
  REQUIRE(geo.user_positions.size() == 11);
  for (int u = 0; u < 11; ++u) {
    const double x = geo.user_positions[u].x();
    if (u < spec.k_reflect)
      CHECK(x <= spec.ris_position.x());  // BS half-plane
    else
      CHECK(x >= spec.ris_position.x());
    CHECK(geo.ris_user_distance[u] <= spec.user_radius);
    CHECK(geo.ris_user_distance[u] > 0.0);
  }
}

TEST_CASE("build_channels is deterministic and shape-correct") {
  ScenarioSpec spec;
  spec.m_elements = 5;
  spec.n_antennas = 3;
  spec.k_reflect = 2;
  spec.k_transmit = 1;
  SplitMix64 a(123), b(123);
  const ChannelSet ca = build_channels(spec, a);
  const ChannelSet cb = build_channels(spec, b);
  CHECK((ca.g - cb.g).norm() == 0.0);
  CHECK((ca.h - cb.h).norm() == 0.0);
  CHECK((ca.d - cb.d).norm() == 0.0);
  CHECK(ca.g.rows() == 5);
  CHECK(ca.g.cols() == 3);
  CHECK(ca.h.cols() == 3);
  CHECK(ca.d.rows() == 3);
  CHECK(ca.sigma2.size() == 3);
  CHECK(ca.sigma2(0) == doctest::Approx(spec.noise_watts()));

  SplitMix64 c(124);
  const ChannelSet cc = build_channels(spec, c);
  CHECK((ca.g - cc.g).norm() > 0.0);

  ScenarioSpec tiny;
  tiny.m_elements = 1;
  tiny.n_antennas = 1;
  tiny.k_reflect = 1;
  tiny.k_transmit = 0;
  SplitMix64 d(1);
  const ChannelSet cd = build_channels(tiny, d);
  CHECK(cd.g.rows() == 1);
  CHECK(cd.g.cols() == 1);
  CHECK(cd.h.cols() == 1);
  CHECK(cd.users() == 1);
}

TEST_CASE("scenario validation rejects nonsense") {
  ScenarioSpec spec;
  spec.k_reflect = 0;
  spec.k_transmit = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = ScenarioSpec{};
  spec.alpha_bs_user = -1.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = ScenarioSpec{};
  spec.kappa_bs_ris = -0.1;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}
