// SPDX-License-Identifier: Apache-2.0
//
// nfswarm command-line front end: geometry reports, SNR sweeps, Monte-Carlo
// NMSE experiments and the self-check oracle suite. CSV files are the output
// contract; every run also writes a JSON manifest next to each output file.

#include "nfswarm/config.hpp"
#include "nfswarm/dict_cache.hpp"
#include "nfswarm/estimation.hpp"
#include "nfswarm/hash.hpp"
#include "nfswarm/sensing.hpp"
#include "nfswarm/simulation.hpp"
#include "nfswarm/snr.hpp"
#include "nfswarm/validate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_manifest(const std::string& command, const nfswarm::ToolConfig& cfg,
                    const std::vector<std::string>& outputs,
                    const std::string& started,
                    const std::map<std::string, std::string>& dict_hashes) {
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["spec_hash"] = cfg.hash;
  manifest["output_paths"] = outputs;
  manifest["started"] = started;
  manifest["finished"] = iso_timestamp();
  manifest["tool_version"] = kVersion;
  manifest["config"] = nlohmann::json::parse(cfg.canonical);
  manifest["seed"] = cfg.experiment.seed;
  if (!dict_hashes.empty()) manifest["dictionary_hashes"] = dict_hashes;
  for (const std::string& out : outputs) {
    std::ofstream os(out + ".meta.json");
    os << manifest.dump(2) << "\n";
  }
}

int cmd_rayleigh(const nfswarm::ToolConfig& cfg, bool as_json) {
  const nfswarm::ApertureInfo info = nfswarm::rayleigh_distance(cfg.array);
  if (as_json) {
    nlohmann::json out;
    out["A_px"] = info.a_px;
    out["A_py"] = info.a_py;
    out["A_p"] = info.a_p;
    out["R"] = info.rayleigh;
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("aperture x      A_px = %.4f m\n", info.a_px);
    std::printf("aperture y      A_py = %.4f m\n", info.a_py);
    std::printf("aperture        A_p  = %.4f m\n", info.a_p);
    std::printf("rayleigh dist.  R    = %.2f m\n", info.rayleigh);
  }
  return kExitOk;
}

int cmd_snr_sweep(const nfswarm::ToolConfig& cfg, const std::string& axis,
                  const std::string& out_path) {
  using nfswarm::SweepAxis;
  const SweepAxis sweep_axis =
      axis == "spacing" ? SweepAxis::UavSpacing : SweepAxis::ElementCount;
  const std::vector<double>& grid = sweep_axis == SweepAxis::UavSpacing
                                        ? cfg.sweep.spacing_factors
                                        : cfg.sweep.uav_counts;
  const auto rows = nfswarm::snr_sweep(cfg.scenario, sweep_axis, grid);
  const std::string started = iso_timestamp();
  std::ofstream os(out_path);
  if (!os) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitUsage;
  }
  os << "x,gamma_pwm,gamma_swm,gamma_hspwm,"
        "gamma_pwm_db,gamma_swm_db,gamma_hspwm_db\n";
  for (const auto& r : rows)
    os << fmt(r.x) << ',' << fmt(r.gamma_pwm) << ',' << fmt(r.gamma_swm) << ','
       << fmt(r.gamma_hspwm) << ',' << fmt(nfswarm::to_db(r.gamma_pwm)) << ','
       << fmt(nfswarm::to_db(r.gamma_swm)) << ','
       << fmt(nfswarm::to_db(r.gamma_hspwm)) << '\n';
  os.close();
  write_manifest("snr-sweep", cfg, {out_path}, started, {});
  return kExitOk;
}

int cmd_nmse(const nfswarm::ToolConfig& cfg, const std::string& out_path) {
  const std::string started = iso_timestamp();
  const nfswarm::ExperimentResult result =
      nfswarm::run_experiment(cfg.experiment);
  std::ofstream os(out_path);
  if (!os) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitUsage;
  }
  os << "snr_db,estimator,nmse_mean,nmse_stderr,trials\n";
  for (const auto& cell : result.cells)
    os << fmt(cell.snr_db) << ',' << nfswarm::estimator_name(cell.estimator)
       << ',' << fmt(cell.nmse_mean) << ',' << fmt(cell.nmse_stderr) << ','
       << cell.trials << '\n';
  os.close();
  write_manifest("nmse", cfg, {out_path}, started, result.dictionary_hashes);
  return kExitOk;
}

int cmd_validate(const nfswarm::ToolConfig& cfg) {
  const auto checks = nfswarm::run_validation(cfg);
  bool all_pass = true;
  for (const auto& c : checks) {
    std::printf("[%s] %-55s measured %.3e (limit %.1e)\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                c.threshold);
    all_pass = all_pass && c.pass;
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"near-field multi-UAV array analysis and channel estimation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "out.csv";
  std::string axis = "spacing";
  bool as_json = false;
  long trials_override = -1;
  long seed_override = -1;
  long workers_override = -1;
  std::vector<std::string> estimator_override;

  CLI::App* rayleigh = app.add_subcommand("rayleigh", "print aperture and Rayleigh distance");
  rayleigh->add_option("--config", config_path, "JSON config file")->required();
  rayleigh->add_flag("--json", as_json, "machine-readable output");

  CLI::App* sweep = app.add_subcommand("snr-sweep", "closed-form SNR sweep to CSV");
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--axis", axis, "spacing|elements")
      ->check(CLI::IsMember({"spacing", "elements"}));
  sweep->add_option("--out", out_path, "output CSV path");

  CLI::App* nmse = app.add_subcommand("nmse", "Monte-Carlo NMSE experiment to CSV");
  nmse->add_option("--config", config_path)->required();
  nmse->add_option("--out", out_path, "output CSV path");
  nmse->add_option("--trials", trials_override, "override trial count");
  nmse->add_option("--seed", seed_override, "override master seed");
  nmse->add_option("--workers", workers_override, "cap the worker pool");
  nmse->add_option("--estimators", estimator_override,
                   "subset of estimators (comma separated)")
      ->delimiter(',');

  CLI::App* validate = app.add_subcommand("validate", "run the oracle self-checks");
  validate->add_option("--config", config_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    nfswarm::ToolConfig cfg = nfswarm::load_config(config_path);
    if (const char* cache_dir = std::getenv("NFSWARM_CACHE_DIR"))
      cfg.experiment.cache_dir = cache_dir;
    if (trials_override > 0) cfg.experiment.trials = static_cast<int>(trials_override);
    if (seed_override >= 0)
      cfg.experiment.seed = static_cast<std::uint64_t>(seed_override);
    if (workers_override > 0)
      cfg.experiment.workers = static_cast<int>(workers_override);
    if (!estimator_override.empty()) {
      cfg.experiment.estimators.clear();
      for (const std::string& name : estimator_override)
        cfg.experiment.estimators.push_back(nfswarm::parse_estimator(name));
    }

    if (*rayleigh) return cmd_rayleigh(cfg, as_json);
    if (*sweep) return cmd_snr_sweep(cfg, axis, out_path);
    if (*nmse) return cmd_nmse(cfg, out_path);
    if (*validate) return cmd_validate(cfg);
  } catch (const nfswarm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}
