// SPDX-License-Identifier: Apache-2.0

#include "nfswarm/snr.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nfswarm {

double snr_mrc(const CVec& g, double p_bar) {
  if (g.size() == 0) throw std::invalid_argument("snr_mrc: empty response vector");
  return p_bar * g.squaredNorm();
}

double snr_with_beamformer(const CVec& g, const CVec& f, double p_bar) {
  if (g.size() != f.size())
    throw std::invalid_argument("snr_with_beamformer: size mismatch");
  const cxd inner = (g.array() * f.array()).sum();
  return p_bar * std::norm(inner);
}

double snr_swm_sum(const SnrScenario& scn) {
  const ArrayConfig& cfg = scn.cfg;
  cfg.validate();
  const DirectionCosines dc = direction_cosines(scn.theta, scn.phi);
  const double xi = cfg.d / scn.range;
  double acc = 0.0;
  for (int mx = 0; mx < cfg.m_x; ++mx)
    for (int my = 0; my < cfg.m_y; ++my) {
      const double ax_uav = mx * cfg.dx_factor;
      const double ay_uav = my * cfg.dy_factor;
      for (int nx = 0; nx < cfg.n_x; ++nx)
        for (int ny = 0; ny < cfg.n_y; ++ny) {
          const double ax = ax_uav + nx;
          const double ay = ay_uav + ny;
          const double den = 1.0 + 2.0 * xi * dc.psi * ax + 2.0 * xi * dc.phi_c * ay +
                             (ax * ax + ay * ay) * xi * xi;
          acc += 1.0 / den;
        }
    }
  return scn.p_bar * scn.beta0 / (scn.range * scn.range) * acc;
}

double h_kernel(double rho) {
  return rho * std::atan(rho) - 0.5 * std::log1p(rho * rho);
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on the Legendre recurrence; nodes come in +/- pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double snr_swm_prop1(const SnrScenario& scn, int quadrature_points) {
  const ArrayConfig& cfg = scn.cfg;
  cfg.validate();
  if (quadrature_points < 8)
    throw std::invalid_argument("snr_swm_prop1: need >= 8 quadrature points per axis");
  const DirectionCosines dc = direction_cosines(scn.theta, scn.phi);
  const double r = scn.range;
  const double d = cfg.d;
  const double xi = d / r;
  const double dx_f = cfg.dx_factor;
  const double dy_f = cfg.dy_factor;

  const ApertureInfo ap = rayleigh_distance(cfg);
  const double s_len = ap.a_px + dx_f * d / 2.0 + d / 2.0;
  const double off2 = s_len - cfg.m_x * dx_f * d;
  const double off3 = s_len - cfg.n_x * d;
  const double off4 = s_len - cfg.n_x * d - cfg.m_x * dx_f * d;

  // integration rectangle: y spans the UAV y-axis, t the intra-panel y-axis
  const double y_lo = -xi / 2.0, y_hi = (cfg.m_y - 0.5) * xi;
  const double t_lo = -xi / 2.0, t_hi = (cfg.n_y - 0.5) * xi;

  const QuadratureRule rule = gauss_legendre(quadrature_points);
  const double psi2 = dc.psi * dc.psi;
  double acc = 0.0;
  for (int iy = 0; iy < quadrature_points; ++iy) {
    const double y = 0.5 * (y_hi - y_lo) * rule.nodes[iy] + 0.5 * (y_hi + y_lo);
    const double wy = 0.5 * (y_hi - y_lo) * rule.weights[iy];
    for (int it = 0; it < quadrature_points; ++it) {
      const double t = 0.5 * (t_hi - t_lo) * rule.nodes[it] + 0.5 * (t_hi + t_lo);
      const double wt = 0.5 * (t_hi - t_lo) * rule.weights[it];
      const double alpha2 = 1.0 + 2.0 * dc.phi_c * dy_f * y + 2.0 * dc.phi_c * t +
                            dy_f * dy_f * y * y + 2.0 * dy_f * y * t + t * t - psi2;
      if (alpha2 < 1e-12)
        throw std::runtime_error("snr_swm_prop1: alpha^2 below 1e-12 at (t=" +
                                 std::to_string(t) + ", y=" + std::to_string(y) + ")");
      const double alpha = std::sqrt(alpha2);
      const double bracket = h_kernel((s_len / r + dc.psi) / alpha) -
                             h_kernel((off2 / r + dc.psi) / alpha) -
                             h_kernel((off3 / r + dc.psi) / alpha) +
                             h_kernel((off4 / r + dc.psi) / alpha);
      acc += wy * wt * bracket;
    }
  }
  return scn.p_bar * scn.beta0 * r * r / (dx_f * d * d * d * d) * acc;
}

double snr_pwm(const SnrScenario& scn) {
  scn.cfg.validate();
  const double mn = static_cast<double>(scn.cfg.total_elements());
  return scn.p_bar * scn.beta0 * mn / (scn.range * scn.range);
}

double snr_hspwm_sum(const SnrScenario& scn) {
  const ArrayConfig& cfg = scn.cfg;
  cfg.validate();
  const DirectionCosines dc = direction_cosines(scn.theta, scn.phi);
  const double xi = cfg.d / scn.range;
  double acc = 0.0;
  for (int mx = 0; mx < cfg.m_x; ++mx)
    for (int my = 0; my < cfg.m_y; ++my) {
      const double ax = mx * cfg.dx_factor;
      const double ay = my * cfg.dy_factor;
      const double den = 1.0 + 2.0 * xi * dc.psi * ax + 2.0 * xi * dc.phi_c * ay +
                         (ax * ax + ay * ay) * xi * xi;
      acc += 1.0 / den;
    }
  const double n = static_cast<double>(cfg.antennas_per_uav());
  return scn.p_bar * scn.beta0 * n / (scn.range * scn.range) * acc;
}

namespace {

void require_ula(const ArrayConfig& cfg, const char* who) {
  if (cfg.m_y != 1 || cfg.n_y != 1)
    throw std::invalid_argument(std::string(who) + ": requires m_y = n_y = 1");
}

double guarded_one_minus_psi2(double psi, const char* who) {
  const double v = 1.0 - psi * psi;
  if (v < 1e-12)
    throw std::runtime_error(std::string(who) + ": 1 - psi^2 below 1e-12");
  return v;
}

}  // namespace

double snr_swm_ula_prop2(const SnrScenario& scn) {
  const ArrayConfig& cfg = scn.cfg;
  cfg.validate();
  require_ula(cfg, "snr_swm_ula_prop2");
  const DirectionCosines dc = direction_cosines(scn.theta, scn.phi);
  const double r = scn.range;
  const double d = cfg.d;
  const double dx_f = cfg.dx_factor;
  const double denom = std::sqrt(guarded_one_minus_psi2(dc.psi, "snr_swm_ula_prop2"));

  const ApertureInfo ap = rayleigh_distance(cfg);
  const double s_len = ap.a_px + dx_f * d / 2.0 + d / 2.0;
  const double offs[4] = {s_len, s_len - cfg.m_x * dx_f * d, s_len - cfg.n_x * d,
                          s_len - cfg.n_x * d - cfg.m_x * dx_f * d};
  const double sign[4] = {1.0, -1.0, -1.0, 1.0};
  double bracket = 0.0;
  for (int i = 0; i < 4; ++i)
    bracket += sign[i] * h_kernel((offs[i] / r + dc.psi) / denom);
  return scn.p_bar * scn.beta0 / (dx_f * d * d) * bracket;
}

double snr_hspwm_ula_prop3(const SnrScenario& scn) {
  const ArrayConfig& cfg = scn.cfg;
  cfg.validate();
  require_ula(cfg, "snr_hspwm_ula_prop3");
  const DirectionCosines dc = direction_cosines(scn.theta, scn.phi);
  const double r = scn.range;
  const double d = cfg.d;
  const double dx_f = cfg.dx_factor;
  const double denom = std::sqrt(guarded_one_minus_psi2(dc.psi, "snr_hspwm_ula_prop3"));
  const double s_d = (cfg.m_x - 1) * dx_f * d;
  const double n = static_cast<double>(cfg.antennas_per_uav());
  const double t1 =
      std::atan((s_d + 0.5 * dx_f * d) / (r * denom) + dc.psi / denom);
  const double t2 =
      std::atan((s_d - (cfg.m_x - 0.5) * dx_f * d) / (r * denom) + dc.psi / denom);
  return scn.p_bar * scn.beta0 * n / (r * dx_f * d * denom) * (t1 - t2);
}

std::vector<SweepRow> snr_sweep(const SnrScenario& scn, SweepAxis axis,
                                const std::vector<double>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw std::invalid_argument("snr_sweep: grid must be strictly increasing");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double x : grid) {
    SnrScenario point = scn;
    if (axis == SweepAxis::UavSpacing) {
      point.cfg.dx_factor = x;
      point.cfg.dy_factor = x;
    } else {
      const double rounded = std::round(x);
      if (std::abs(x - rounded) > 1e-9 || rounded < 1.0)
        throw std::invalid_argument(
            "snr_sweep: UAV counts must be positive integers");
      point.cfg.m_x = static_cast<int>(rounded);
      point.cfg.m_y = 1;
    }
    rows.push_back(SweepRow{x, snr_pwm(point), snr_swm_sum(point),
                            snr_hspwm_sum(point)});
  }
  return rows;
}

}  // namespace nfswarm
