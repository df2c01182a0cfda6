// SPDX-License-Identifier: Apache-2.0

#include "nfswarm/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nfswarm {

void ArrayConfig::validate() const {
  if (m_x < 1 || m_y < 1 || n_x < 1 || n_y < 1)
    throw std::invalid_argument("ArrayConfig: grid counts must be >= 1");
  if (d <= 0.0) throw std::invalid_argument("ArrayConfig: element spacing d must be > 0");
  if (wavelength <= 0.0) throw std::invalid_argument("ArrayConfig: wavelength must be > 0");
  if (dx_factor < 1.0 || dy_factor < 1.0)
    throw std::invalid_argument("ArrayConfig: UAV spacing factors must be >= 1");
}

DirectionCosines direction_cosines(double theta, double phi) {
  if (theta < 0.0 || theta > kPi)
    throw std::invalid_argument("direction_cosines: theta outside [0, pi]");
  if (phi < -kPi / 2.0 || phi > kPi / 2.0)
    throw std::invalid_argument("direction_cosines: phi outside [-pi/2, pi/2]");
  const double sp = std::sin(phi);
  return DirectionCosines{sp * std::cos(theta), sp * std::sin(theta), std::cos(phi)};
}

namespace {

void check_indices(const ArrayConfig& cfg, int mx, int my, int nx, int ny) {
  if (mx < 1 || mx > cfg.m_x || my < 1 || my > cfg.m_y)
    throw std::invalid_argument("UAV index (" + std::to_string(mx) + "," +
                                std::to_string(my) + ") out of range");
  if (nx < 1 || nx > cfg.n_x || ny < 1 || ny > cfg.n_y)
    throw std::invalid_argument("antenna index (" + std::to_string(nx) + "," +
                                std::to_string(ny) + ") out of range");
}

}  // namespace

int flat_uav_index(const ArrayConfig& cfg, int mx, int my) {
  check_indices(cfg, mx, my, 1, 1);
  return (mx - 1) * cfg.m_y + my;
}

int flat_uav_index_as_printed(const ArrayConfig& cfg, int mx, int my) {
  check_indices(cfg, mx, my, 1, 1);
  return (mx - 1) * cfg.m_x + my;
}

int flat_antenna_index(const ArrayConfig& cfg, int nx, int ny) {
  check_indices(cfg, 1, 1, nx, ny);
  return (nx - 1) * cfg.n_y + ny;
}

int flat_element_index(const ArrayConfig& cfg, int mx, int my, int nx, int ny) {
  check_indices(cfg, mx, my, nx, ny);
  return (flat_uav_index(cfg, mx, my) - 1) * cfg.antennas_per_uav() +
         flat_antenna_index(cfg, nx, ny);
}

Vec3 element_position(const ArrayConfig& cfg, int mx, int my, int nx, int ny) {
  check_indices(cfg, mx, my, nx, ny);
  const Vec3 uav_offset{(mx - 1) * cfg.dx_factor * cfg.d,
                        (my - 1) * cfg.dy_factor * cfg.d, 0.0};
  const Vec3 ant_offset{(nx - 1) * cfg.d, (ny - 1) * cfg.d, 0.0};
  return cfg.ref_position + uav_offset + ant_offset;
}

Vec3 user_position(const ArrayConfig& cfg, double theta, double phi, double range) {
  if (range <= 0.0) throw std::invalid_argument("user_position: range must be > 0");
  const DirectionCosines dc = direction_cosines(theta, phi);
  return cfg.ref_position - range * Vec3{dc.psi, dc.phi_c, dc.omega};
}

double exact_distance(const ArrayConfig& cfg, const Vec3& user_pos,
                      int mx, int my, int nx, int ny) {
  const Vec3 p = element_position(cfg, mx, my, nx, ny);
  const double dist = (p - user_pos).norm();
  if (dist == 0.0)
    throw std::invalid_argument("exact_distance: user coincides with element position");
  return dist;
}

double closed_form_distance(const ArrayConfig& cfg, double theta, double phi,
                            double range, int mx, int my, int nx, int ny) {
  check_indices(cfg, mx, my, nx, ny);
  if (range <= 0.0)
    throw std::invalid_argument("closed_form_distance: range must be > 0");
  const DirectionCosines dc = direction_cosines(theta, phi);
  const double xi = cfg.d / range;
  const double ax = (mx - 1) * cfg.dx_factor + (nx - 1);
  const double ay = (my - 1) * cfg.dy_factor + (ny - 1);
  const double s = 1.0 + 2.0 * xi * dc.psi * ax + 2.0 * xi * dc.phi_c * ay +
                   (ax * ax + ay * ay) * xi * xi;
  return range * std::sqrt(s);
}

RangeSplit range_split(const ArrayConfig& cfg, double theta, double phi,
                       double range, int mx, int my, int nx, int ny) {
  check_indices(cfg, mx, my, nx, ny);
  if (range <= 0.0) throw std::invalid_argument("range_split: range must be > 0");
  const DirectionCosines dc = direction_cosines(theta, phi);
  const double ex = ((mx - 1) * cfg.dx_factor + (nx - 1)) * cfg.d;
  const double ey = ((my - 1) * cfg.dy_factor + (ny - 1)) * cfg.d;
  const double q = ex * ex + ey * ey + 2.0 * range * (ex * dc.psi + ey * dc.phi_c);
  const double dist = std::sqrt(range * range + q);
  return {dist, q / (dist + range)};
}

ApertureInfo rayleigh_distance(const ArrayConfig& cfg) {
  cfg.validate();
  ApertureInfo info;
  info.a_px = (cfg.m_x - 1) * cfg.dx_factor * cfg.d + (cfg.n_x - 1) * cfg.d;
  info.a_py = (cfg.m_y - 1) * cfg.dy_factor * cfg.d + (cfg.n_y - 1) * cfg.d;
  info.a_p = std::hypot(info.a_px, info.a_py);
  info.rayleigh = 2.0 * info.a_p * info.a_p / cfg.wavelength;
  return info;
}

}  // namespace nfswarm
