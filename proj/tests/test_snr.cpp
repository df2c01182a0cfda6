// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfswarm/snr.hpp"
#include "nfswarm/wavefront.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <random>

using namespace nfswarm;
using test::paper_config;
using test::rel_err;
using test::ula_config;

namespace {

SnrScenario paper_scenario(double theta_deg = 30.0, double phi_deg = 45.0,
                           double r = 50.0) {
  SnrScenario scn;
  scn.cfg = paper_config();
  scn.theta = theta_deg * kPi / 180.0;
  scn.phi = phi_deg * kPi / 180.0;
  scn.range = r;
  return scn;
}

}  // namespace

TEST_CASE("mrc and beamformer bound") {
  std::mt19937_64 rng(4);
  const SnrScenario scn = paper_scenario();
  const CVec g = steering_swm(scn.cfg, scn.theta, scn.phi, scn.range, 1.0);

  SUBCASE("conjugate matched beamformer achieves the bound") {
    const CVec f = g.conjugate() / g.norm();
    CHECK(rel_err(snr_with_beamformer(g, f, 2.0), snr_mrc(g, 2.0)) < 1e-12);
  }

  SUBCASE("no random unit beamformer beats it") {
    const double bound = snr_mrc(g, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
      CVec f = test::random_cvec(static_cast<int>(g.size()), rng);
      f /= f.norm();
      CHECK(snr_with_beamformer(g, f, 1.0) <= bound * (1.0 + 1e-12));
    }
  }

  SUBCASE("all-ones response") {
    const CVec ones = CVec::Ones(paper_config().total_elements());
    CHECK(snr_mrc(ones, 3.0) == doctest::Approx(3.0 * ones.size()));
  }
}

TEST_CASE("spherical sum form") {
  SUBCASE("single element") {
    SnrScenario scn;
    scn.cfg.wavelength = 0.03;
    scn.cfg.d = 0.015;
    scn.range = 10.0;
    scn.p_bar = 2.0;
    scn.beta0 = 3.0;
    CHECK(snr_swm_sum(scn) == doctest::Approx(2.0 * 3.0 / 100.0));
  }

  SUBCASE("matches the response norm at the production layout") {
    const SnrScenario scn = paper_scenario();
    const CVec g = steering_swm(scn.cfg, scn.theta, scn.phi, scn.range, scn.beta0);
    CHECK(rel_err(snr_swm_sum(scn), snr_mrc(g, scn.p_bar)) < 1e-10);
  }

  SUBCASE("two-element broadside by hand") {
    SnrScenario scn;
    scn.cfg.n_x = 2;
    scn.cfg.wavelength = 0.03;
    scn.cfg.d = 0.015;
    scn.theta = 0.0;
    scn.phi = 0.0;  // psi = phi_c = 0
    scn.range = 5.0;
    const double xi = scn.cfg.d / scn.range;
    const double expected = (1.0 + 1.0 / (1.0 + xi * xi)) / 25.0;
    CHECK(snr_swm_sum(scn) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("h kernel") {
  CHECK(h_kernel(0.0) == 0.0);
  CHECK(h_kernel(1.0) == doctest::Approx(kPi / 4.0 - std::log(2.0) / 2.0));
  // derivative vs centered finite differences
  for (double rho : {-3.0, -1.0, -0.2, 0.0, 0.4, 1.0, 2.5}) {
    const double fd = (h_kernel(rho + 1e-4) - h_kernel(rho - 1e-4)) / 2e-4;
    CHECK(std::abs(fd - std::atan(rho)) < 1e-6);
  }
}

TEST_CASE("gauss-legendre rule") {
  const QuadratureRule rule = gauss_legendre(5);
  // classical 5-point nodes
  CHECK(rule.nodes[2] == doctest::Approx(0.0));
  CHECK(rule.nodes[4] == doctest::Approx(0.9061798459386640));
  CHECK(rule.weights[2] == doctest::Approx(128.0 / 225.0));
  // exactness on polynomials up to degree 9
  double acc = 0.0;
  for (int i = 0; i < 5; ++i)
    acc += rule.weights[i] * std::pow(rule.nodes[i], 8);
  CHECK(acc == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("integral form of the spherical SNR") {
  SUBCASE("production layout across ranges") {
    for (double r : {50.0, 65.0, 80.0}) {
      const SnrScenario scn = paper_scenario(30.0, 45.0, r);
      CHECK(rel_err(snr_swm_prop1(scn), snr_swm_sum(scn)) < 0.01);
    }
  }

  SUBCASE("degenerates to the linear-array closed form") {
    SnrScenario scn = paper_scenario(0.0, 30.0);
    scn.cfg.m_y = 1;
    scn.cfg.n_y = 1;
    CHECK(rel_err(snr_swm_prop1(scn), snr_swm_ula_prop2(scn)) < 1e-3);
  }

  SUBCASE("quadrature point floor enforced") {
    CHECK_THROWS_AS(snr_swm_prop1(paper_scenario(), 4), std::invalid_argument);
  }

  SUBCASE("refining the element spacing shrinks the approximation error") {
    double last = 1.0;
    SnrScenario scn = paper_scenario(20.0, 30.0, 60.0);
    for (int halving = 0; halving < 3; ++halving) {
      const double err = rel_err(snr_swm_prop1(scn), snr_swm_sum(scn));
      CHECK(err < last);
      last = err;
      scn.cfg.d /= 2.0;
    }
  }
}

TEST_CASE("plane-wave SNR law") {
  SUBCASE("production numbers") {
    SnrScenario scn = paper_scenario();
    CHECK(snr_pwm(scn) == doctest::Approx(1152.0 / 2500.0).epsilon(1e-15));
  }

  SUBCASE("doubling the element count doubles the SNR") {
    SnrScenario scn = paper_scenario();
    SnrScenario twice = scn;
    twice.cfg.n_x *= 2;
    CHECK(snr_pwm(twice) == doctest::Approx(2.0 * snr_pwm(scn)).epsilon(1e-15));
  }

  SUBCASE("matches the response norm") {
    const SnrScenario scn = paper_scenario(75.0, -20.0, 64.0);
    const CVec g = steering_pwm(scn.cfg, scn.theta, scn.phi, scn.range, scn.beta0);
    CHECK(rel_err(snr_pwm(scn), snr_mrc(g, scn.p_bar)) < 1e-12);
  }

  SUBCASE("independent of angles and spacing") {
    const double base = snr_pwm(paper_scenario());
    for (double theta_deg : {0.0, 45.0, 120.0})
      for (double phi_deg : {-60.0, 0.0, 45.0})
        for (double spacing : {10.0, 50.0, 90.0}) {
          SnrScenario scn = paper_scenario(theta_deg, phi_deg);
          scn.cfg.dx_factor = spacing;
          scn.cfg.dy_factor = spacing;
          CHECK(snr_pwm(scn) == base);
        }
  }
}

TEST_CASE("cross-field sum form") {
  SUBCASE("single UAV") {
    SnrScenario scn = paper_scenario();
    scn.cfg.m_x = 1;
    scn.cfg.m_y = 1;
    CHECK(rel_err(snr_hspwm_sum(scn),
                  scn.p_bar * scn.beta0 * scn.cfg.antennas_per_uav() /
                      (scn.range * scn.range)) < 1e-12);
  }

  SUBCASE("matches the factored response norm") {
    const SnrScenario scn = paper_scenario();
    const CVec g =
        steering_hspwm(scn.cfg, scn.theta, scn.phi, scn.range, scn.beta0).second;
    CHECK(rel_err(snr_hspwm_sum(scn), snr_mrc(g, scn.p_bar)) < 1e-10);
  }

  SUBCASE("tracks the spherical sum at production scale") {
    for (double r : {50.0, 65.0, 80.0}) {
      const SnrScenario scn = paper_scenario(30.0, 45.0, r);
      CHECK(rel_err(snr_hspwm_sum(scn), snr_swm_sum(scn)) < 0.02);
    }
  }
}

TEST_CASE("linear-array closed forms") {
  SUBCASE("spherical form within 1% of the exact sum") {
    for (double phi_deg : {-30.0, 0.0, 45.0})
      for (double r : {50.0, 65.0, 80.0}) {
        SnrScenario scn = paper_scenario(0.0, phi_deg, r);
        scn.cfg = ula_config();
        CHECK(rel_err(snr_swm_ula_prop2(scn), snr_swm_sum(scn)) < 0.01);
      }
  }

  SUBCASE("guarded near grazing") {
    SnrScenario scn = paper_scenario(0.0, 0.0, 50.0);
    scn.cfg = ula_config();
    scn.phi = std::asin(1.0 - 1e-9);  // psi -> 1
    CHECK(std::isfinite(snr_swm_ula_prop2(scn)));
  }

  SUBCASE("angle asymmetry is real") {
    SnrScenario plus = paper_scenario(0.0, 30.0, 50.0);
    plus.cfg = ula_config();
    SnrScenario minus = plus;
    minus.phi = -plus.phi;
    // the exact sums differ across +/- psi, and the closed form tracks each
    CHECK(rel_err(snr_swm_sum(plus), snr_swm_sum(minus)) > 1e-3);
    CHECK(rel_err(snr_swm_ula_prop2(plus), snr_swm_sum(plus)) < 0.01);
    CHECK(rel_err(snr_swm_ula_prop2(minus), snr_swm_sum(minus)) < 0.01);
  }

  SUBCASE("cross-field form: linear in the panel size and within 1%") {
    SnrScenario scn = paper_scenario(0.0, 30.0, 50.0);
    scn.cfg = ula_config();
    CHECK(rel_err(snr_hspwm_ula_prop3(scn), snr_hspwm_sum(scn)) < 0.01);
    SnrScenario twice = scn;
    twice.cfg.n_x *= 2;
    CHECK(snr_hspwm_ula_prop3(twice) ==
          doctest::Approx(2.0 * snr_hspwm_ula_prop3(scn)).epsilon(1e-14));
  }

  SUBCASE("single UAV tends to the plane-wave value") {
    SnrScenario scn = paper_scenario(0.0, 30.0, 50.0);
    scn.cfg = ula_config();
    scn.cfg.m_x = 1;
    CHECK(rel_err(snr_hspwm_ula_prop3(scn),
                  scn.p_bar * scn.beta0 * scn.cfg.antennas_per_uav() /
                      (scn.range * scn.range)) < 0.01);
  }

  SUBCASE("planar layout rejected") {
    CHECK_THROWS_AS(snr_swm_ula_prop2(paper_scenario()), std::invalid_argument);
    CHECK_THROWS_AS(snr_hspwm_ula_prop3(paper_scenario()), std::invalid_argument);
  }
}

TEST_CASE("snr sweep tables") {
  const SnrScenario scn = paper_scenario();

  SUBCASE("plane-wave column is constant across the spacing sweep") {
    const auto rows = snr_sweep(scn, SweepAxis::UavSpacing,
                                {10, 20, 30, 40, 50, 60, 70, 80, 90, 100});
    for (const auto& row : rows) CHECK(row.gamma_pwm == rows.front().gamma_pwm);
    for (const auto& row : rows)
      CHECK(std::abs(row.gamma_hspwm - row.gamma_swm) / row.gamma_swm < 0.02);
  }

  SUBCASE("small element counts keep all three models together") {
    SnrScenario small = scn;
    small.cfg.n_x = 4;
    small.cfg.n_y = 4;
    small.cfg.dx_factor = 2.0;
    small.cfg.dy_factor = 2.0;
    const auto rows = snr_sweep(small, SweepAxis::ElementCount, {1, 2, 3});
    for (const auto& row : rows) {
      CHECK(std::abs(row.gamma_pwm - row.gamma_swm) / row.gamma_swm < 0.05);
      CHECK(std::abs(row.gamma_hspwm - row.gamma_swm) / row.gamma_swm < 0.05);
    }
  }

  SUBCASE("non-monotone grid rejected") {
    CHECK_THROWS_AS(snr_sweep(scn, SweepAxis::UavSpacing, {10, 10}),
                    std::invalid_argument);
  }

  SUBCASE("fractional UAV counts rejected") {
    CHECK_THROWS_AS(snr_sweep(scn, SweepAxis::ElementCount, {1.0, 2.5}),
                    std::invalid_argument);
  }
}
