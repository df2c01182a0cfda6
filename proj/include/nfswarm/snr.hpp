// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nfswarm/geometry.hpp"
#include "nfswarm/types.hpp"

#include <vector>

namespace nfswarm {

// A single-user uplink scenario for SNR evaluation.
struct SnrScenario {
  ArrayConfig cfg;
  double theta = 0.0;  // azimuth [rad]
  double phi = 0.0;    // elevation [rad]
  double range = 50.0; // user distance [m]
  double p_bar = 1.0;  // transmit SNR P/sigma^2 (linear)
  double beta0 = 1.0;  // channel power at 1 m reference distance
};

// Maximum-ratio-combining SNR: p_bar * ||g||^2.
double snr_mrc(const CVec& g, double p_bar);

// SNR under an arbitrary beamformer: p_bar * |g^T f|^2. With unit-norm f this
// never exceeds snr_mrc; equality at f = conj(g)/||g||.
double snr_with_beamformer(const CVec& g, const CVec& f, double p_bar);

// Exact spherical-wave SNR as the quadruple sum over the element grid of
// beta0*p_bar/r^2 divided by the quadratic distance expansion. Identical to
// p_bar*||g_swm||^2 up to roundoff.
double snr_swm_sum(const SnrScenario& scn);

// Two-axis integral approximation of the spherical-wave SNR,
//   p_bar*beta0*r^2/(Dx*d^4) * integral of the four-term h bracket,
// evaluated by tensor-product Gauss-Legendre quadrature (points per axis >= 8).
// Throws std::runtime_error if the integrand's alpha^2 drops below 1e-12,
// reporting the offending (t, y) node.
double snr_swm_prop1(const SnrScenario& scn, int quadrature_points = 32);

// Plane-wave SNR: p_bar*beta0*M*N/r^2 -- independent of angles and UAV spacing.
double snr_pwm(const SnrScenario& scn);

// Cross-field SNR as the per-UAV sum scaled by N. Identical to
// p_bar*||g_hspwm||^2 up to roundoff.
double snr_hspwm_sum(const SnrScenario& scn);

// Closed-form spherical-wave SNR for the linear layout m_y = n_y = 1
// (four-term h bracket). Throws std::invalid_argument otherwise.
double snr_swm_ula_prop2(const SnrScenario& scn);

// Closed-form cross-field SNR for the linear layout (two-arctan form, linear
// in the per-UAV element count).
double snr_hspwm_ula_prop3(const SnrScenario& scn);

// Kernel of the closed forms: h(x) = x*arctan(x) - ln(1+x^2)/2, h'(x) = arctan(x).
double h_kernel(double rho);

// Gauss-Legendre nodes/weights on [-1, 1].
struct QuadratureRule {
  RVec nodes;
  RVec weights;
};
QuadratureRule gauss_legendre(int n);

enum class SweepAxis {
  UavSpacing,   // grid values are spacing factors D (both axes), in units of d
  ElementCount  // grid values are UAV counts M, laid out as an M x 1 row
};

struct SweepRow {
  double x;
  double gamma_pwm;
  double gamma_swm;
  double gamma_hspwm;
};

// Evaluates the three exact sum-form SNRs across a monotone grid.
std::vector<SweepRow> snr_sweep(const SnrScenario& scn, SweepAxis axis,
                                const std::vector<double>& grid);

}  // namespace nfswarm
