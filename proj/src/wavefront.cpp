// SPDX-License-Identifier: Apache-2.0

#include "nfswarm/wavefront.hpp"

#include "nfswarm/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace nfswarm {

namespace {

void check_path(double range) {
  if (range <= 0.0) throw std::invalid_argument("steering: range must be > 0");
}

}  // namespace

CVec steering_swm(const ArrayConfig& cfg, double theta, double phi, double range,
                  double beta0) {
  check_path(range);
  const double k = kTwoPi / cfg.wavelength;
  // factored form: reference phasor times per-element relative terms, so the
  // reference element phase is exactly -k*range
  const cxd ref = std::polar(std::sqrt(beta0) / range, -k * range);
  CVec g(cfg.total_elements());
  long idx = 0;
  for (int mx = 1; mx <= cfg.m_x; ++mx)
    for (int my = 1; my <= cfg.m_y; ++my)
      for (int nx = 1; nx <= cfg.n_x; ++nx)
        for (int ny = 1; ny <= cfg.n_y; ++ny) {
          const RangeSplit rs = range_split(cfg, theta, phi, range, mx, my, nx, ny);
          g[idx++] = ref * std::polar(range / rs.distance, -k * rs.delta);
        }
  return g;
}

CVec steering_pwm(const ArrayConfig& cfg, double theta, double phi, double range,
                  double beta0) {
  check_path(range);
  const DirectionCosines dc = direction_cosines(theta, phi);
  const double k = kTwoPi / cfg.wavelength;
  const cxd ref = std::polar(std::sqrt(beta0) / range, -k * range);
  CVec g(cfg.total_elements());
  long idx = 0;
  for (int mx = 0; mx < cfg.m_x; ++mx)
    for (int my = 0; my < cfg.m_y; ++my)
      for (int nx = 0; nx < cfg.n_x; ++nx)
        for (int ny = 0; ny < cfg.n_y; ++ny) {
          const double ramp = (nx + mx * cfg.dx_factor) * cfg.d * dc.psi +
                              (ny + my * cfg.dy_factor) * cfg.d * dc.phi_c;
          g[idx++] = ref * std::polar(1.0, -k * ramp);
        }
  return g;
}

SteeringFactors hspwm_factors(const ArrayConfig& cfg, double theta, double phi,
                              double range) {
  check_path(range);
  const DirectionCosines dc = direction_cosines(theta, phi);
  const double k = kTwoPi / cfg.wavelength;
  SteeringFactors f;
  f.u.resize(cfg.n_x);
  for (int nx = 0; nx < cfg.n_x; ++nx)
    f.u[nx] = std::polar(1.0, -k * nx * cfg.d * dc.psi);
  f.v.resize(cfg.n_y);
  for (int ny = 0; ny < cfg.n_y; ++ny)
    f.v[ny] = std::polar(1.0, -k * ny * cfg.d * dc.phi_c);
  f.b.resize(cfg.num_uavs());
  const cxd ref = std::polar(1.0, -k * range);
  long idx = 0;
  for (int mx = 1; mx <= cfg.m_x; ++mx)
    for (int my = 1; my <= cfg.m_y; ++my) {
      const RangeSplit rs = range_split(cfg, theta, phi, range, mx, my, 1, 1);
      f.b[idx++] = ref * std::polar(1.0 / rs.distance, -k * rs.delta);
    }
  return f;
}

std::pair<SteeringFactors, CVec> steering_hspwm(const ArrayConfig& cfg, double theta,
                                                double phi, double range,
                                                double beta0) {
  SteeringFactors f = hspwm_factors(cfg, theta, phi, range);
  CVec g = std::sqrt(beta0) * kron({f.b, f.u, f.v});
  return {std::move(f), std::move(g)};
}

CVec steering(const ArrayConfig& cfg, WaveModel model, double theta, double phi,
              double range, double beta0) {
  switch (model) {
    case WaveModel::Swm:
      return steering_swm(cfg, theta, phi, range, beta0);
    case WaveModel::Pwm:
      return steering_pwm(cfg, theta, phi, range, beta0);
    case WaveModel::Hspwm:
      return steering_hspwm(cfg, theta, phi, range, beta0).second;
  }
  throw std::invalid_argument("steering: unknown model");
}

CVec channel(const ArrayConfig& cfg, const std::vector<PathParams>& paths,
             WaveModel model, double beta0) {
  if (paths.empty()) throw std::invalid_argument("channel: path list is empty");
  CVec h = CVec::Zero(cfg.total_elements());
  for (const PathParams& p : paths)
    h += p.gain * steering(cfg, model, p.theta, p.phi, p.range, beta0);
  return h / std::sqrt(static_cast<double>(paths.size()));
}

}  // namespace nfswarm
