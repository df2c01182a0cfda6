// SPDX-License-Identifier: Apache-2.0

#include "nfswarm/validate.hpp"

#include "nfswarm/estimation.hpp"
#include "nfswarm/sensing.hpp"
#include "nfswarm/snr.hpp"
#include "nfswarm/tensor.hpp"
#include "nfswarm/wavefront.hpp"

#include <cmath>
#include <random>

namespace nfswarm {

namespace {

void add(std::vector<ValidationCheck>& checks, const std::string& name,
         double measured, double threshold) {
  checks.push_back({name, measured, threshold, measured <= threshold});
}

double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

}  // namespace

std::vector<ValidationCheck> run_validation(const ToolConfig& cfg) {
  std::vector<ValidationCheck> checks;
  const ArrayConfig& arr = cfg.array;
  const SnrScenario base = cfg.scenario;

  // analytical SNR forms against the exact sums
  double worst_p1 = 0.0;
  for (double r : {50.0, 65.0, 80.0}) {
    SnrScenario scn = base;
    scn.range = r;
    worst_p1 = std::max(worst_p1, rel_err(snr_swm_prop1(scn), snr_swm_sum(scn)));
  }
  add(checks, "swm integral form vs exact sum (rel err)", worst_p1, 0.01);

  SnrScenario ula = base;
  ula.cfg.m_y = 1;
  ula.cfg.n_y = 1;
  ula.theta = 0.0;
  double worst_p2 = 0.0, worst_p3 = 0.0;
  for (double r : {50.0, 65.0, 80.0})
    for (double phi_deg : {-30.0, 0.0, 45.0}) {
      SnrScenario scn = ula;
      scn.range = r;
      scn.phi = phi_deg * kPi / 180.0;
      worst_p2 = std::max(worst_p2,
                          rel_err(snr_swm_ula_prop2(scn), snr_swm_sum(scn)));
      worst_p3 = std::max(worst_p3, rel_err(snr_hspwm_ula_prop3(scn),
                                            snr_hspwm_sum(scn)));
    }
  add(checks, "linear-array swm closed form vs exact sum (rel err)", worst_p2, 0.01);
  add(checks, "linear-array cross-field closed form vs exact sum (rel err)",
      worst_p3, 0.01);

  // cross-field vs spherical SNR gap at the configured scenario
  add(checks, "cross-field vs spherical SNR gap (rel)",
      rel_err(snr_hspwm_sum(base), snr_swm_sum(base)), 0.02);

  // norm identities
  {
    const CVec g_s = steering_swm(arr, base.theta, base.phi, base.range, base.beta0);
    const CVec g_h =
        steering_hspwm(arr, base.theta, base.phi, base.range, base.beta0).second;
    add(checks, "spherical norm identity (rel err)",
        rel_err(snr_mrc(g_s, base.p_bar), snr_swm_sum(base)), 1e-10);
    add(checks, "cross-field norm identity (rel err)",
        rel_err(snr_mrc(g_h, base.p_bar), snr_hspwm_sum(base)), 1e-10);
  }

  // flattening identity on random tensors and the compression bridge
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rand_cvec = [&](int n) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = cxd(gauss(rng), gauss(rng));
    return v;
  };
  {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      Tensor3 t(3, 4, 5);
      t.data = rand_cvec(60);
      const CVec v = rand_cvec(3), u = rand_cvec(4), b = rand_cvec(5);
      const cxd lhs = contract3(t, v, u, b, true);
      const cxd rhs = kron({b, u, v}).dot(vec(t));
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    add(checks, "mode-product flattening identity (rel err)", worst, 1e-12);
  }
  {
    const MeasurementMatrix w = design_measurement_pair(
        arr, std::min(6, arr.n_x), std::min(6, arr.n_y), 11);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const CVec b = rand_cvec(arr.num_uavs());
      const CVec u = rand_cvec(arr.n_x);
      const CVec v = rand_cvec(arr.n_y);
      const CVec direct = sense(arr, w, kron({b, u, v}));
      const CVec factored =
          kron({b, CVec(w.wx.adjoint() * u), CVec(w.wy.adjoint() * v)});
      worst = std::max(worst, (direct - factored).norm() / factored.norm());
    }
    add(checks, "kronecker compression identity (rel err)", worst, 1e-12);
  }

  // measurement design invariants
  {
    const CMat w_raw = design_measurement(arr.n_x, std::min(6, arr.n_x), 3, false);
    const CMat eye = CMat::Identity(w_raw.cols(), w_raw.cols());
    add(checks, "pre-projection orthogonality ||I - W^H W||",
        (eye - w_raw.adjoint() * w_raw).norm(), 1e-10);
    const CMat w_mod = design_measurement(arr.n_x, std::min(6, arr.n_x), 3, true);
    double worst = 0.0;
    for (long j = 0; j < w_mod.cols(); ++j)
      for (long i = 0; i < w_mod.rows(); ++i)
        worst = std::max(worst, std::abs(std::abs(w_mod(i, j)) - 1.0));
    add(checks, "unit-modulus projection (max | |w|-1 |)", worst, 1e-12);
  }

  // kernel derivative vs centered differences
  {
    double worst = 0.0;
    for (double rho : {-2.0, -0.5, 0.0, 0.3, 1.0, 4.0}) {
      const double fd =
          (h_kernel(rho + 1e-4) - h_kernel(rho - 1e-4)) / 2e-4;
      worst = std::max(worst, std::abs(fd - std::atan(rho)));
    }
    add(checks, "kernel derivative vs finite differences", worst, 1e-6);
  }

  return checks;
}

}  // namespace nfswarm
