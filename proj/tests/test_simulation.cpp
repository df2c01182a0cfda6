// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfswarm/simulation.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <cmath>

using namespace nfswarm;
using test::paper_config;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.cfg = paper_config();
  spec.q_x = 8;
  spec.q_y = 8;
  spec.sparsity = 1;
  spec.trials = 30;
  spec.seed = 11;
  spec.snr_grid_db = {0.0, 20.0};
  spec.estimators = {EstimatorKind::SdOngrid, EstimatorKind::Ls};
  return spec;
}

double cell_value(const ExperimentResult& r, double snr, EstimatorKind k) {
  for (const auto& c : r.cells)
    if (c.snr_db == snr && c.estimator == k) return c.nmse_mean;
  REQUIRE(false);
  return 0.0;
}

}  // namespace

TEST_CASE("estimator names round trip and reject unknowns") {
  for (const std::string& n : estimator_names())
    CHECK(estimator_name(parse_estimator(n)) == n);
  CHECK_THROWS_WITH_AS(parse_estimator("bogus"),
                       doctest::Contains("valid names"), std::invalid_argument);
}

TEST_CASE("path draws") {
  ExperimentSpec spec;
  spec.cfg = paper_config();
  spec.sparsity = 2;

  SUBCASE("bounds respected over many draws") {
    for (int t = 0; t < 2500; ++t) {
      const auto paths = draw_paths(spec, mix_seed(1, t));
      REQUIRE(paths.size() == 2);
      for (const auto& p : paths) {
        CHECK(std::cos(p.theta) >= spec.paths.cos_theta_lo);
        CHECK(std::cos(p.theta) <= spec.paths.cos_theta_hi);
        CHECK(std::sin(p.phi) >= spec.paths.sin_phi_lo);
        CHECK(std::sin(p.phi) <= spec.paths.sin_phi_hi);
        CHECK(p.range >= spec.paths.r_lo);
        CHECK(p.range <= spec.paths.r_hi);
      }
    }
  }

  SUBCASE("fixed seed reproduces draws; different seeds differ") {
    const auto a = draw_paths(spec, 123);
    const auto b = draw_paths(spec, 123);
    const auto c = draw_paths(spec, 124);
    CHECK(a[0].theta == b[0].theta);
    CHECK(a[1].gain == b[1].gain);
    CHECK(a[0].theta != c[0].theta);
  }

  SUBCASE("second path carries the configured attenuation on average") {
    double lead = 0.0, trail = 0.0;
    const int n = 4000;
    for (int t = 0; t < n; ++t) {
      const auto paths = draw_paths(spec, mix_seed(9, t));
      lead += std::norm(paths[0].gain);
      trail += std::norm(paths[1].gain);
    }
    const double measured_db = 10.0 * std::log10(lead / trail);
    CHECK(measured_db == doctest::Approx(5.0).epsilon(0.08));
  }

  SUBCASE("the sampled azimuth cosine is centered") {
    double acc = 0.0;
    const int n = 10000;
    for (int t = 0; t < n; ++t)
      acc += std::cos(draw_paths(spec, mix_seed(2, t))[0].theta);
    // uniform on [-0.75, 0.75]: sd of the mean = 0.75/sqrt(3 n)
    CHECK(std::abs(acc / n) < 3.0 * 0.75 / std::sqrt(3.0 * n));
  }
}

TEST_CASE("noise injection") {
  ArrayConfig cfg = paper_config();
  const MeasurementMatrix w = design_measurement_pair(cfg, 6, 6, 2);
  std::mt19937_64 rng(6);
  const CVec h = test::random_cvec(cfg.total_elements(), rng);
  const CVec clean = sense(cfg, w, h);

  SUBCASE("vanishing noise at extreme SNR") {
    const CVec y = apply_noise(cfg, clean, h.squaredNorm(), 120.0, w, 5);
    CHECK((y - clean).norm() / clean.norm() < 1e-5);
  }

  SUBCASE("projected noise variance matches the combiner row norms") {
    const double snr_db = 10.0;
    const double sigma2 = h.squaredNorm() * std::pow(10.0, -snr_db / 10.0) /
                          cfg.total_elements();
    const CMat wm = per_uav_combiner(w);
    const long q = wm.cols();
    RVec acc = RVec::Zero(q);
    const int draws = 400;  // q*draws samples per measurement slot
    for (int t = 0; t < draws; ++t) {
      const CVec y = apply_noise(cfg, clean, h.squaredNorm(), snr_db, w,
                                 mix_seed(77, t));
      const CVec noise = y - clean;
      for (long qi = 0; qi < q; ++qi) {
        for (int m = 0; m < cfg.num_uavs(); ++m)
          acc[qi] += std::norm(noise[m * q + qi]);
      }
    }
    for (long qi = 0; qi < q; ++qi) {
      const double measured = acc[qi] / (draws * cfg.num_uavs());
      const double expected = wm.col(qi).squaredNorm() * sigma2;
      CHECK(measured == doctest::Approx(expected).epsilon(0.05));
    }
  }

  SUBCASE("seeds change the noise, not the clean part") {
    const CVec y1 = apply_noise(cfg, clean, h.squaredNorm(), 0.0, w, 1);
    const CVec y2 = apply_noise(cfg, clean, h.squaredNorm(), 0.0, w, 2);
    CHECK((y1 - y2).norm() > 0.0);
    CHECK((y1 - clean).norm() > 0.0);
    const CVec y1_again = apply_noise(cfg, clean, h.squaredNorm(), 0.0, w, 1);
    CHECK((y1 - y1_again).norm() == 0.0);
  }
}

TEST_CASE("nmse definition") {
  std::mt19937_64 rng(13);
  const CVec h = test::random_cvec(64, rng);
  CHECK(nmse(h, h) == 0.0);
  CHECK(nmse(h, CVec::Zero(64)) == doctest::Approx(1.0));
  CHECK(nmse(h, 2.0 * h) == doctest::Approx(1.0));
  CHECK_THROWS_AS(nmse(CVec::Zero(4), CVec::Ones(4)), std::invalid_argument);
  CHECK_THROWS_AS(nmse(CVec::Ones(4), CVec::Ones(5)), std::invalid_argument);
}

TEST_CASE("experiment runs") {
  SUBCASE("pipeline determinism under a fixed master seed") {
    ExperimentSpec spec = small_spec();
    spec.trials = 6;
    const ExperimentResult a = run_experiment(spec);
    const ExperimentResult b = run_experiment(spec);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i)
      CHECK(a.cells[i].nmse_mean == b.cells[i].nmse_mean);
  }

  SUBCASE("worker count does not change results") {
    ExperimentSpec spec = small_spec();
    spec.trials = 6;
    spec.workers = 1;
    const ExperimentResult a = run_experiment(spec);
    spec.workers = 2;
    const ExperimentResult b = run_experiment(spec);
    for (std::size_t i = 0; i < a.cells.size(); ++i)
      CHECK(a.cells[i].nmse_mean == b.cells[i].nmse_mean);
  }

  SUBCASE("only the dictionaries the estimator set needs are built") {
    ExperimentSpec spec = small_spec();
    spec.trials = 2;
    spec.estimators = {EstimatorKind::TensorOffgrid};
    const ExperimentResult r = run_experiment(spec);
    CHECK(r.dictionary_hashes.count("tensor") == 1);
    CHECK(r.dictionary_hashes.count("sd") == 0);
    CHECK(r.dictionary_hashes.count("sd_farfield") == 0);
  }

  SUBCASE("high-SNR flattening with compressed measurements") {
    ExperimentSpec spec = small_spec();
    spec.trials = 40;
    spec.snr_grid_db = {20.0, 40.0};
    spec.estimators = {EstimatorKind::SdOngrid, EstimatorKind::TensorOngrid};
    const ExperimentResult r = run_experiment(spec);
    for (EstimatorKind k :
         {EstimatorKind::SdOngrid, EstimatorKind::TensorOngrid}) {
      const double at20 = cell_value(r, 20.0, k);
      const double at40 = cell_value(r, 40.0, k);
      CHECK(at40 <= 3.0 * at20);
      CHECK(at20 <= 3.0 * at40);
    }
  }

  SUBCASE("per-trial ratio averaging is available and close at high SNR") {
    ExperimentSpec spec = small_spec();
    spec.trials = 20;
    spec.snr_grid_db = {20.0};
    spec.estimators = {EstimatorKind::Ls};
    const ExperimentResult ratio_of_sums = run_experiment(spec);
    spec.per_trial_ratio = true;
    const ExperimentResult mean_of_ratios = run_experiment(spec);
    const double a = ratio_of_sums.cells[0].nmse_mean;
    const double b = mean_of_ratios.cells[0].nmse_mean;
    CHECK(a > 0.0);
    CHECK(b > 0.0);
    CHECK(std::abs(std::log10(a / b)) < 1.0);
  }
}

TEST_CASE("far-field baseline adapter") {
  ExperimentSpec spec = small_spec();
  spec.trials = 1;
  spec.estimators = {EstimatorKind::SdFarfield};

  SUBCASE("its dictionary collapses to a single range bin") {
    const SamplingGrid grid =
        build_grid(spec.cfg, spec.resolved_angle_resolution(), spec.farfield_range,
                   spec.farfield_range, spec.grid_delta);
    CHECK(grid.c() == 1);
    CHECK(grid.range_at(0) == doctest::Approx(1e5));
  }

  SUBCASE("beats the near-field refiner on a genuinely planar channel") {
    // single test channel at r = 1e5: the far-field dictionary models it
    // exactly, the near-field grid cannot reach that range
    spec.estimators = {EstimatorKind::SdFarfield, EstimatorKind::SdOffgrid};
    spec.snr_grid_db = {20.0};
    spec.trials = 8;
    spec.paths.r_lo = 0.99e5;
    spec.paths.r_hi = 1.01e5;
    const ExperimentResult r = run_experiment(spec);
    const double ff = cell_value(r, 20.0, EstimatorKind::SdFarfield);
    const double nf = cell_value(r, 20.0, EstimatorKind::SdOffgrid);
    CHECK(ff <= 2.0 * nf);
  }

  SUBCASE("loses to the near-field refiner on near-field channels") {
    spec.estimators = {EstimatorKind::SdFarfield, EstimatorKind::SdOffgrid};
    spec.snr_grid_db = {20.0};
    spec.trials = 30;
    const ExperimentResult r = run_experiment(spec);
    CHECK(cell_value(r, 20.0, EstimatorKind::SdFarfield) >
          cell_value(r, 20.0, EstimatorKind::SdOffgrid));
  }
}
