// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nfswarm/types.hpp"

namespace nfswarm {

// Swarm/array geometry. A rectangular grid of m_x-by-m_y UAVs hovers at a fixed
// altitude; each UAV carries an n_x-by-n_y planar panel with element spacing d.
// UAV pitch along x/y is dx_factor*d / dy_factor*d. UAV (1,1)'s first antenna is
// the global reference element.
struct ArrayConfig {
  int m_x = 1;  // UAV grid count, x
  int m_y = 1;  // UAV grid count, y
  int n_x = 1;  // per-UAV antenna count, x
  int n_y = 1;  // per-UAV antenna count, y
  double d = 0.015;          // intra-UAV element spacing [m], wavelength/2 by default
  double dx_factor = 50.0;   // UAV spacing along x, in units of d
  double dy_factor = 50.0;   // UAV spacing along y, in units of d
  double wavelength = 0.03;  // carrier wavelength [m]
  double altitude = 80.0;    // flight height [m]
  Vec3 ref_position{0.0, 0.0, 80.0};  // location of UAV (1,1) reference antenna [m]

  int num_uavs() const { return m_x * m_y; }
  int antennas_per_uav() const { return n_x * n_y; }
  int total_elements() const { return num_uavs() * antennas_per_uav(); }

  // Throws std::invalid_argument on nonpositive counts/spacings or dx/dy factors < 1.
  void validate() const;
};

// Direction cosines of the user as seen from the reference element:
// psi = sin(phi)cos(theta), phi_c = sin(phi)sin(theta), omega = cos(phi),
// with azimuth theta in [0, pi] and elevation phi in [-pi/2, pi/2].
struct DirectionCosines {
  double psi;
  double phi_c;
  double omega;
};

DirectionCosines direction_cosines(double theta, double phi);

// Flat index maps. The API is 1-based, matching the (m_x, m_y) grid convention.
//
// flat_uav_index is the row-major map (m_x-1)*M_y + m_y used everywhere inside
// this library: it is bijective for any grid shape. flat_uav_index_as_printed is
// the map (m_x-1)*M_x + m_y, kept for reference; it collides whenever
// M_x != M_y and must not be used for storage.
int flat_uav_index(const ArrayConfig& cfg, int mx, int my);
int flat_uav_index_as_printed(const ArrayConfig& cfg, int mx, int my);
int flat_antenna_index(const ArrayConfig& cfg, int nx, int ny);
int flat_element_index(const ArrayConfig& cfg, int mx, int my, int nx, int ny);

// Position of antenna (nx, ny) on UAV (mx, my). 1-based indices; out-of-range
// indices throw std::invalid_argument.
Vec3 element_position(const ArrayConfig& cfg, int mx, int my, int nx, int ny);

// User location for a (theta, phi, range) triple relative to the reference
// element: ref - range * [psi, phi_c, omega].
Vec3 user_position(const ArrayConfig& cfg, double theta, double phi, double range);

// Euclidean distance between the user and element (mx,my,nx,ny).
// Throws std::invalid_argument if the user coincides with the element.
double exact_distance(const ArrayConfig& cfg, const Vec3& user_pos,
                      int mx, int my, int nx, int ny);

// Same distance through the quadratic expansion in xi = d/range:
//   range * sqrt(1 + 2 xi psi (mx0 Dx + nx0) + 2 xi phi_c (my0 Dy + ny0)
//                  + [(mx0 Dx + nx0)^2 + (my0 Dy + ny0)^2] xi^2)
// where mx0 = mx-1 etc. Algebraically identical to exact_distance for a user at
// (theta, phi, range); exists as an independent evaluation route.
double closed_form_distance(const ArrayConfig& cfg, double theta, double phi,
                            double range, int mx, int my, int nx, int ny);

// Element distance split into the reference range and the exact excess,
// delta = distance - range, evaluated without cancellation:
//   delta = (|e|^2 + 2 range (e . dir)) / (distance + range)
// for the element offset e from the reference. The reference element yields
// delta = 0 exactly.
struct RangeSplit {
  double distance;
  double delta;
};

RangeSplit range_split(const ArrayConfig& cfg, double theta, double phi,
                       double range, int mx, int my, int nx, int ny);

struct ApertureInfo {
  double a_px;      // aperture along x: (M_x-1)*Dx*d + (N_x-1)*d  [m]
  double a_py;      // aperture along y  [m]
  double a_p;       // sqrt(a_px^2 + a_py^2)  [m]
  double rayleigh;  // 2*a_p^2 / wavelength  [m]
};

ApertureInfo rayleigh_distance(const ArrayConfig& cfg);

}  // namespace nfswarm
