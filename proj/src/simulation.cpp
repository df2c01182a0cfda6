// SPDX-License-Identifier: Apache-2.0

#include "nfswarm/simulation.hpp"

#include "nfswarm/dict_cache.hpp"

#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace nfswarm {

EstimatorKind parse_estimator(const std::string& name) {
  if (name == "sd_ongrid") return EstimatorKind::SdOngrid;
  if (name == "sd_offgrid") return EstimatorKind::SdOffgrid;
  if (name == "sd_farfield") return EstimatorKind::SdFarfield;
  if (name == "tensor_ongrid") return EstimatorKind::TensorOngrid;
  if (name == "tensor_offgrid") return EstimatorKind::TensorOffgrid;
  if (name == "ls") return EstimatorKind::Ls;
  std::string valid;
  for (const std::string& n : estimator_names()) valid += " " + n;
  throw std::invalid_argument("unknown estimator '" + name + "'; valid names:" + valid);
}

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::SdOngrid: return "sd_ongrid";
    case EstimatorKind::SdOffgrid: return "sd_offgrid";
    case EstimatorKind::SdFarfield: return "sd_farfield";
    case EstimatorKind::TensorOngrid: return "tensor_ongrid";
    case EstimatorKind::TensorOffgrid: return "tensor_offgrid";
    case EstimatorKind::Ls: return "ls";
  }
  return "?";
}

std::vector<std::string> estimator_names() {
  return {"sd_ongrid", "sd_offgrid", "sd_farfield",
          "tensor_ongrid", "tensor_offgrid", "ls"};
}

std::uint64_t mix_seed(std::uint64_t state, std::uint64_t salt) {
  std::uint64_t z = state + 0x9e3779b97f4a7c15ull + salt * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double ExperimentSpec::resolved_angle_resolution() const {
  if (angle_resolution > 0.0) return angle_resolution;
  if (full_angle_resolution)
    return 2.0 / (static_cast<double>(cfg.n_x) * cfg.n_y);
  return 2.0 / cfg.n_x;
}

std::vector<PathParams> draw_paths(const ExperimentSpec& spec,
                                   std::uint64_t trial_seed) {
  std::mt19937_64 rng(trial_seed);
  std::uniform_real_distribution<double> u_ct(spec.paths.cos_theta_lo,
                                              spec.paths.cos_theta_hi);
  std::uniform_real_distribution<double> u_sp(spec.paths.sin_phi_lo,
                                              spec.paths.sin_phi_hi);
  std::uniform_real_distribution<double> u_r(spec.paths.r_lo, spec.paths.r_hi);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  std::vector<PathParams> paths;
  paths.reserve(spec.sparsity);
  for (int l = 0; l < spec.sparsity; ++l) {
    PathParams p;
    p.theta = std::acos(u_ct(rng));
    p.phi = std::asin(u_sp(rng));
    p.range = u_r(rng);
    p.gain = cxd(gauss(rng), gauss(rng));
    if (l > 0) p.gain *= std::pow(10.0, -spec.paths.nlos_attenuation_db / 20.0);
    paths.push_back(p);
  }
  return paths;
}

CVec apply_noise(const ArrayConfig& cfg, const CVec& clean, double channel_norm_sq,
                 double snr_db, const MeasurementMatrix& w, std::uint64_t seed) {
  const int m = cfg.num_uavs();
  const int n = cfg.antennas_per_uav();
  const long qx = w.wx.cols(), qy = w.wy.cols();
  const long q = qx * qy;
  if (clean.size() != m * q)
    throw std::invalid_argument("apply_noise: measurement length mismatch");
  const double sigma2 =
      channel_norm_sq * std::pow(10.0, -snr_db / 10.0) / cfg.total_elements();
  const double scale = std::sqrt(sigma2 / 2.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // independent element noise per pilot slot, projected through that slot's
  // combiner column
  const CMat wm = per_uav_combiner(w);  // n x q
  CVec out = clean;
  CVec slot_noise(n);
  for (int um = 0; um < m; ++um)
    for (long qi = 0; qi < q; ++qi) {
      for (int i = 0; i < n; ++i)
        slot_noise[i] = cxd(scale * gauss(rng), scale * gauss(rng));
      out[um * q + qi] += wm.col(qi).dot(slot_noise);
    }
  return out;
}

double nmse(const CVec& h_true, const CVec& h_est) {
  if (h_true.size() != h_est.size())
    throw std::invalid_argument("nmse: length mismatch");
  const double ref = h_true.squaredNorm();
  if (ref == 0.0) throw std::invalid_argument("nmse: zero-norm reference channel");
  return (h_true - h_est).squaredNorm() / ref;
}

namespace {

bool wants(const ExperimentSpec& spec, EstimatorKind k) {
  for (EstimatorKind e : spec.estimators)
    if (e == k) return true;
  return false;
}

struct Workbench {
  MeasurementMatrix w;
  SamplingGrid grid;
  std::unique_ptr<SdDictionary> sd_dict;
  std::unique_ptr<FlatDictionary> sd_sensed;
  std::unique_ptr<SdDictionary> ff_dict;
  std::unique_ptr<FlatDictionary> ff_sensed;
  std::unique_ptr<SamplingGrid> ff_grid;
  std::unique_ptr<TensorDictionary> tensor_dict;
};

// Builds only what the requested estimator set needs; a nonempty cache_dir
// short-circuits builds through content-keyed cache files.
Workbench prepare(const ExperimentSpec& spec,
                  std::map<std::string, std::string>* hashes) {
  Workbench wb;
  const std::uint64_t w_seed = mix_seed(spec.seed, 0x57ull);
  wb.w = design_measurement_pair(spec.cfg, spec.q_x, spec.q_y, w_seed);
  wb.grid = build_grid(spec.cfg, spec.resolved_angle_resolution(), spec.grid_r_min,
                       spec.grid_r_max, spec.grid_delta, -0.75, 0.75,
                       spec.coherence_level);

  auto cached_sd = [&](const SamplingGrid& grid, const std::string& key) {
    if (spec.cache_dir.empty())
      return build_sd_dictionary(spec.cfg, grid, spec.beta0);
    const std::string path = spec.cache_dir + "/sd_" + key + ".dict";
    if (cache_file_exists(path)) return load_sd_dictionary(path, key);
    SdDictionary dict = build_sd_dictionary(spec.cfg, grid, spec.beta0);
    save_sd_dictionary(path, dict, key);
    return dict;
  };

  const bool need_sd = wants(spec, EstimatorKind::SdOngrid) ||
                       wants(spec, EstimatorKind::SdOffgrid);
  if (need_sd) {
    const std::string key =
        dictionary_content_hash(spec.cfg, wb.grid, 0, spec.beta0);
    wb.sd_dict = std::make_unique<SdDictionary>(cached_sd(wb.grid, key));
    wb.sd_sensed = std::make_unique<FlatDictionary>(
        sense_sd_dictionary(spec.cfg, *wb.sd_dict, wb.w));
    (*hashes)["sd"] = key;
  }
  if (wants(spec, EstimatorKind::SdFarfield)) {
    wb.ff_grid = std::make_unique<SamplingGrid>(build_grid(
        spec.cfg, spec.resolved_angle_resolution(), spec.farfield_range,
        spec.farfield_range, spec.grid_delta, -0.75, 0.75, spec.coherence_level));
    const std::string key =
        dictionary_content_hash(spec.cfg, *wb.ff_grid, 0, spec.beta0);
    wb.ff_dict = std::make_unique<SdDictionary>(cached_sd(*wb.ff_grid, key));
    wb.ff_sensed = std::make_unique<FlatDictionary>(
        sense_sd_dictionary(spec.cfg, *wb.ff_dict, wb.w));
    (*hashes)["sd_farfield"] = key;
  }
  if (wants(spec, EstimatorKind::TensorOngrid) ||
      wants(spec, EstimatorKind::TensorOffgrid)) {
    const std::string key = dictionary_content_hash(
        spec.cfg, wb.grid, w_seed, spec.beta0, spec.q_x, spec.q_y);
    if (spec.cache_dir.empty()) {
      wb.tensor_dict = std::make_unique<TensorDictionary>(
          build_tensor_dictionary(spec.cfg, wb.grid, wb.w, spec.beta0));
    } else {
      const std::string path = spec.cache_dir + "/tensor_" + key + ".dict";
      if (cache_file_exists(path)) {
        wb.tensor_dict =
            std::make_unique<TensorDictionary>(load_tensor_dictionary(path, key));
      } else {
        wb.tensor_dict = std::make_unique<TensorDictionary>(
            build_tensor_dictionary(spec.cfg, wb.grid, wb.w, spec.beta0));
        save_tensor_dictionary(path, *wb.tensor_dict, key);
      }
    }
    (*hashes)["tensor"] = key;
  }
  return wb;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.cfg.validate();
  if (spec.trials < 1) throw std::invalid_argument("run_experiment: trials >= 1");
  if (spec.estimators.empty())
    throw std::invalid_argument("run_experiment: no estimators selected");
  if (spec.snr_grid_db.empty())
    throw std::invalid_argument("run_experiment: empty SNR grid");
  for (double snr : spec.snr_grid_db)
    if (!std::isfinite(snr))
      throw std::invalid_argument("run_experiment: SNR grid must be finite");

  ExperimentResult result;
  const Workbench wb = prepare(spec, &result.dictionary_hashes);

  const int n_snr = static_cast<int>(spec.snr_grid_db.size());
  const int n_est = static_cast<int>(spec.estimators.size());
  const int cells = n_snr * n_est;

  // per-trial error/power sums, aggregated after the pool joins
  std::vector<double> err(static_cast<std::size_t>(spec.trials) * cells, 0.0);
  std::vector<double> pow_sum(spec.trials, 0.0);
  std::vector<double> ratio(static_cast<std::size_t>(spec.trials) * cells, 0.0);

  OffgridOptions offgrid_opts;
  offgrid_opts.nm.max_iter = spec.nm_max_iter;
  offgrid_opts.nm.spread_tol = spec.nm_spread_tol;
  OffgridOptions ff_opts = offgrid_opts;
  ff_opts.refine_range = false;

  auto run_trial = [&](int trial) {
    const std::uint64_t path_seed = mix_seed(spec.seed, 1000003ull + trial);
    const std::vector<PathParams> paths = draw_paths(spec, path_seed);
    const CVec h = channel(spec.cfg, paths, WaveModel::Swm, spec.beta0);
    const double h_pow = h.squaredNorm();
    pow_sum[trial] = h_pow;
    const CVec clean = sense(spec.cfg, wb.w, h);
    for (int si = 0; si < n_snr; ++si) {
      const std::uint64_t noise_seed =
          mix_seed(spec.seed, 2000029ull + trial * 1009ull + si);
      const CVec y = apply_noise(spec.cfg, clean, h_pow, spec.snr_grid_db[si],
                                 wb.w, noise_seed);
      Tensor3 y_tensor;
      EstimationResult tensor_on;
      bool tensor_on_ready = false;
      for (int ei = 0; ei < n_est; ++ei) {
        CVec h_est;
        switch (spec.estimators[ei]) {
          case EstimatorKind::SdOngrid:
            h_est = sd_omp_ongrid(spec.cfg, y, wb.w, *wb.sd_dict, spec.sparsity,
                                  wb.sd_sensed.get())
                        .channel_estimate;
            break;
          case EstimatorKind::SdOffgrid: {
            const EstimationResult ongrid =
                sd_omp_ongrid(spec.cfg, y, wb.w, *wb.sd_dict, spec.sparsity,
                              wb.sd_sensed.get());
            h_est = sd_omp_offgrid(spec.cfg, ongrid, y, wb.w, wb.grid,
                                   spec.beta0, offgrid_opts)
                        .channel_estimate;
            break;
          }
          case EstimatorKind::SdFarfield: {
            const EstimationResult ongrid =
                sd_omp_ongrid(spec.cfg, y, wb.w, *wb.ff_dict, spec.sparsity,
                              wb.ff_sensed.get());
            h_est = sd_omp_offgrid(spec.cfg, ongrid, y, wb.w, *wb.ff_grid,
                                   spec.beta0, ff_opts)
                        .channel_estimate;
            break;
          }
          case EstimatorKind::TensorOngrid:
          case EstimatorKind::TensorOffgrid: {
            if (!tensor_on_ready) {
              y_tensor = measurement_tensor(spec.cfg, wb.w, y);
              tensor_on = tensor_omp_ongrid(spec.cfg, y_tensor, *wb.tensor_dict,
                                            spec.sparsity);
              tensor_on_ready = true;
            }
            if (spec.estimators[ei] == EstimatorKind::TensorOngrid) {
              h_est = tensor_on.channel_estimate;
            } else {
              h_est = tensor_omp_offgrid(spec.cfg, tensor_on, y_tensor, wb.w,
                                         wb.grid, spec.beta0, offgrid_opts)
                          .channel_estimate;
            }
            break;
          }
          case EstimatorKind::Ls:
            h_est = ls_baseline(spec.cfg, y, wb.w);
            break;
        }
        const std::size_t slot =
            static_cast<std::size_t>(trial) * cells + si * n_est + ei;
        err[slot] = (h - h_est).squaredNorm();
        ratio[slot] = err[slot] / h_pow;
      }
    }
  };

  int workers = spec.workers > 0
                    ? spec.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, spec.trials));
  if (workers == 1) {
    for (int t = 0; t < spec.trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int wi = 0; wi < workers; ++wi)
      pool.emplace_back([&] {
        try {
          for (int t = next.fetch_add(1); t < spec.trials; t = next.fetch_add(1))
            run_trial(t);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(spec.trials);  // drain remaining work
        }
      });
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (int si = 0; si < n_snr; ++si)
    for (int ei = 0; ei < n_est; ++ei) {
      NmseCell cell;
      cell.snr_db = spec.snr_grid_db[si];
      cell.estimator = spec.estimators[ei];
      cell.trials = spec.trials;
      double err_sum = 0.0, power = 0.0, ratio_sum = 0.0, ratio_sq = 0.0;
      for (int t = 0; t < spec.trials; ++t) {
        const std::size_t slot =
            static_cast<std::size_t>(t) * cells + si * n_est + ei;
        err_sum += err[slot];
        power += pow_sum[t];
        ratio_sum += ratio[slot];
        ratio_sq += ratio[slot] * ratio[slot];
      }
      const double t = spec.trials;
      cell.nmse_mean = spec.per_trial_ratio ? ratio_sum / t : err_sum / power;
      const double var = std::max(0.0, ratio_sq / t - (ratio_sum / t) * (ratio_sum / t));
      cell.nmse_stderr = std::sqrt(var / t);
      result.cells.push_back(cell);
    }
  return result;
}

}  // namespace nfswarm
