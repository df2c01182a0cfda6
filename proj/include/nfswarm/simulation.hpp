// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nfswarm/estimation.hpp"
#include "nfswarm/sensing.hpp"
#include "nfswarm/wavefront.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nfswarm {

enum class EstimatorKind {
  SdOngrid,
  SdOffgrid,
  SdFarfield,
  TensorOngrid,
  TensorOffgrid,
  Ls,
};

// Throws std::invalid_argument listing the valid names on an unknown name.
EstimatorKind parse_estimator(const std::string& name);
std::string estimator_name(EstimatorKind kind);
std::vector<std::string> estimator_names();

// Uniform draw ranges for the per-trial path parameters. Angles are drawn in
// the sampled cosine coordinates; the second path of an L=2 channel is an
// independent draw with its gain attenuated by nlos_attenuation_db.
struct PathDistribution {
  double cos_theta_lo = -0.75, cos_theta_hi = 0.75;
  double sin_phi_lo = -0.75, sin_phi_hi = 0.75;
  double r_lo = 50.0, r_hi = 80.0;
  double nlos_attenuation_db = 5.0;
};

struct ExperimentSpec {
  ArrayConfig cfg;
  // dictionary grid
  double angle_resolution = 0.0;  // 0 selects 2/n_x
  bool full_angle_resolution = false;  // use 2/(n_x*n_y) instead
  double grid_r_min = 50.0, grid_r_max = 80.0, grid_delta = 3e-4;
  double coherence_level = 0.3;
  // measurement
  int q_x = 12, q_y = 12;
  // experiment
  int sparsity = 1;
  std::vector<double> snr_grid_db{-10, -5, 0, 5, 10, 15, 20};
  int trials = 200;
  std::uint64_t seed = 1;
  std::vector<EstimatorKind> estimators;
  PathDistribution paths;
  double beta0 = 1.0;
  bool per_trial_ratio = false;  // average per-trial NMSE ratios instead of
                                 // dividing the summed errors by summed powers
  int workers = 0;               // 0 = hardware concurrency
  double farfield_range = 1e5;
  int nm_max_iter = 300;
  double nm_spread_tol = 1e-10;
  std::string cache_dir;  // when set, dictionaries are cached here by content key

  double resolved_angle_resolution() const;
};

// Uniform path draws from the configured ranges; deterministic per trial seed.
std::vector<PathParams> draw_paths(const ExperimentSpec& spec,
                                   std::uint64_t trial_seed);

// Adds combiner-projected receiver noise to a clean measurement. The noise
// variance is sigma^2 = channel_norm_sq * 10^(-snr_db/10) / (M*N), making
// snr_db the per-element receive SNR.
CVec apply_noise(const ArrayConfig& cfg, const CVec& clean, double channel_norm_sq,
                 double snr_db, const MeasurementMatrix& w, std::uint64_t seed);

// ||h - h_est||^2 / ||h||^2. Throws on a zero-norm reference.
double nmse(const CVec& h_true, const CVec& h_est);

struct NmseCell {
  double snr_db = 0.0;
  EstimatorKind estimator = EstimatorKind::Ls;
  double nmse_mean = 0.0;
  double nmse_stderr = 0.0;
  int trials = 0;
};

struct ExperimentResult {
  std::vector<NmseCell> cells;  // snr-major, estimator-minor order
  std::map<std::string, std::string> dictionary_hashes;  // only built ones
};

// Runs trials x snr x estimator. Trials are independent work units spread over
// a small thread pool; each derives its own RNG streams from (seed, trial), so
// results do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// splitmix64 step, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t state, std::uint64_t salt);

}  // namespace nfswarm
