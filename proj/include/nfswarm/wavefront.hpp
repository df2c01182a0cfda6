// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nfswarm/geometry.hpp"
#include "nfswarm/types.hpp"

#include <utility>
#include <vector>

namespace nfswarm {

// One propagation path.
struct PathParams {
  double theta = 0.0;  // azimuth [rad], in [0, pi]
  double phi = 0.0;    // elevation [rad], in [-pi/2, pi/2]
  double range = 1.0;  // user distance from the reference element [m]
  cxd gain{1.0, 0.0};  // complex path gain
};

// Separable factors of the cross-field response. u and v are the intra-UAV
// plane-wave ramps along x and y (unit modulus, first entry 1); b is the
// inter-UAV spherical factor with per-UAV amplitude 1/r_m0, where r_m0 is the
// distance from the user to UAV m's reference antenna. The assembled response
// is sqrt(beta0) * kron(b, u, v).
//
// Conventions used throughout: phases carry a negative exponent, and the x-axis
// pairs with psi = sin(phi)cos(theta) while the y-axis pairs with
// phi_c = sin(phi)sin(theta).
struct SteeringFactors {
  CVec u;  // length n_x
  CVec v;  // length n_y
  CVec b;  // length m_x*m_y, row-major UAV order
};

enum class WaveModel { Swm, Pwm, Hspwm };

// Spherical-wave response: element (m,n) is sqrt(beta0)/r_mn * exp(-i 2 pi r_mn / lambda)
// with the exact element distance r_mn. Flat element order is row-major
// (UAV index slowest, intra-panel y fastest), matching flat_element_index.
CVec steering_swm(const ArrayConfig& cfg, double theta, double phi, double range,
                  double beta0);

// Plane-wave response: common amplitude sqrt(beta0)/range, linear phase law
// relative to the reference element.
CVec steering_pwm(const ArrayConfig& cfg, double theta, double phi, double range,
                  double beta0);

SteeringFactors hspwm_factors(const ArrayConfig& cfg, double theta, double phi,
                              double range);

// Cross-field response: plane wave within each panel, spherical wave across
// UAVs. Returns the factors together with the assembled vector.
std::pair<SteeringFactors, CVec> steering_hspwm(const ArrayConfig& cfg, double theta,
                                                double phi, double range, double beta0);

CVec steering(const ArrayConfig& cfg, WaveModel model, double theta, double phi,
              double range, double beta0);

// Multipath channel: (1/sqrt(L)) * sum_l gain_l * g(theta_l, phi_l, range_l).
CVec channel(const ArrayConfig& cfg, const std::vector<PathParams>& paths,
             WaveModel model, double beta0);

}  // namespace nfswarm
