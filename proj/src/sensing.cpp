// SPDX-License-Identifier: Apache-2.0

#include "nfswarm/sensing.hpp"

#include "nfswarm/hash.hpp"
#include "nfswarm/wavefront.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace nfswarm {

namespace {

CMat random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = cxd(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(a);
  CMat q = qr.householderQ() * CMat::Identity(n, n);
  return q;
}

}  // namespace

CMat design_measurement(int n, int q, std::uint64_t seed, bool unit_modulus) {
  if (q < 1 || q > n)
    throw std::invalid_argument("design_measurement: need 1 <= q <= n");
  std::mt19937_64 rng(seed);
  const CMat u = random_unitary(n, rng);
  const CMat v = random_unitary(q, rng);
  CMat w = u.leftCols(q) * v.adjoint();
  if (unit_modulus)
    w = w.unaryExpr([](cxd z) {
      const double mag = std::abs(z);
      return mag > 0.0 ? z / mag : cxd(1.0, 0.0);
    });
  return w;
}

MeasurementMatrix design_measurement_pair(const ArrayConfig& cfg, int q_x, int q_y,
                                          std::uint64_t seed, bool unit_modulus) {
  MeasurementMatrix m;
  m.wx = design_measurement(cfg.n_x, q_x, seed, unit_modulus);
  m.wy = design_measurement(cfg.n_y, q_y, seed ^ 0x9e3779b97f4a7c15ull, unit_modulus);
  m.normalized = unit_modulus;
  return m;
}

CMat per_uav_combiner(const MeasurementMatrix& w) {
  const long nx = w.wx.rows(), qx = w.wx.cols();
  const long ny = w.wy.rows(), qy = w.wy.cols();
  CMat out(nx * ny, qx * qy);
  for (long jx = 0; jx < qx; ++jx)
    for (long jy = 0; jy < qy; ++jy)
      for (long ix = 0; ix < nx; ++ix)
        for (long iy = 0; iy < ny; ++iy)
          out(ix * ny + iy, jx * qy + jy) = w.wx(ix, jx) * w.wy(iy, jy);
  return out;
}

CVec sense(const ArrayConfig& cfg, const MeasurementMatrix& w, const CVec& h) {
  const int n = cfg.antennas_per_uav();
  const int m = cfg.num_uavs();
  if (h.size() != static_cast<long>(n) * m)
    throw std::invalid_argument("sense: channel length mismatch");
  const long qx = w.wx.cols(), qy = w.wy.cols();
  CVec y(m * qx * qy);
  for (int um = 0; um < m; ++um) {
    // per-UAV block: contract the y-axis then the x-axis combiner
    Eigen::Map<const CMat> block(h.data() + static_cast<long>(um) * n, cfg.n_y,
                                 cfg.n_x);
    const CMat tmp = w.wy.adjoint() * block;       // q_y x n_x
    const CMat out = tmp * w.wx.conjugate();       // q_y x q_x
    Eigen::Map<CMat>(y.data() + um * qx * qy, qy, qx) = out;
  }
  return y;
}

CMat sense_columns(const ArrayConfig& cfg, const MeasurementMatrix& w, const CMat& g) {
  CMat out(static_cast<long>(cfg.num_uavs()) * w.q(), g.cols());
  for (long j = 0; j < g.cols(); ++j) out.col(j) = sense(cfg, w, g.col(j));
  return out;
}

double SamplingGrid::theta_at(int ai) const { return std::acos(azimuth[ai]); }
double SamplingGrid::phi_at(int bi) const { return std::asin(elevation[bi]); }

std::array<int, 3> SamplingGrid::unflatten(int idx) const {
  const int ci = idx % c();
  const int bi = (idx / c()) % b();
  const int ai = idx / (b() * c());
  return {ai, bi, ci};
}

SamplingGrid build_grid(const ArrayConfig& cfg, double angle_resolution,
                        double r_min, double r_max, double delta, double angle_lo,
                        double angle_hi, double coherence_level) {
  cfg.validate();
  if (r_min > r_max) throw std::invalid_argument("build_grid: r_min > r_max");
  if (r_min <= 0.0) throw std::invalid_argument("build_grid: r_min must be > 0");
  if (delta <= 0.0) throw std::invalid_argument("build_grid: delta must be > 0");
  if (angle_resolution <= 0.0 || angle_hi <= angle_lo)
    throw std::invalid_argument("build_grid: bad angle grid parameters");

  SamplingGrid grid;
  const int pts = static_cast<int>(std::floor((angle_hi - angle_lo) / angle_resolution + 1e-9));
  if (pts < 1) throw std::invalid_argument("build_grid: angle step exceeds the span");
  RVec angles(pts);
  for (int i = 0; i < pts; ++i)
    angles[i] = angle_lo + (i + 0.5) * angle_resolution;
  grid.azimuth = angles;
  grid.elevation = angles;

  const double inv_hi = 1.0 / r_min, inv_lo = 1.0 / r_max;
  const int c = static_cast<int>(std::floor((inv_hi - inv_lo) / delta + 1e-9)) + 1;
  grid.inv_range.resize(c);
  for (int i = 0; i < c; ++i) grid.inv_range[i] = inv_lo + i * delta;
  grid.delta = delta;

  const ApertureInfo ap = rayleigh_distance(cfg);
  grid.z_delta = ap.a_p * ap.a_p /
                 (2.0 * coherence_level * coherence_level * cfg.wavelength);
  grid.delta_ok = grid.z_delta <= 0.0 || delta < 1.0 / grid.z_delta;
  if (!grid.delta_ok)
    std::fprintf(stderr,
                 "warning: range step %.3g exceeds the coherence bound %.3g\n",
                 delta, 1.0 / grid.z_delta);
  return grid;
}

TensorDictionary build_tensor_dictionary(const ArrayConfig& cfg,
                                         const SamplingGrid& grid,
                                         const MeasurementMatrix& w, double beta0) {
  TensorDictionary dict;
  dict.grid = grid;
  dict.beta0 = beta0;
  const int na = grid.a(), nb = grid.b(), nc = grid.c();
  dict.u_atoms.resize(cfg.n_x, na * nb);
  dict.v_atoms.resize(cfg.n_y, na * nb);
  dict.b_atoms.resize(cfg.num_uavs(), grid.atoms());
  const double scale = std::sqrt(beta0);
  for (int ai = 0; ai < na; ++ai)
    for (int bi = 0; bi < nb; ++bi) {
      const double theta = grid.theta_at(ai);
      const double phi = grid.phi_at(bi);
      const int pair = dict.angle_pair_index(ai, bi);
      // any in-grid range gives the same u, v; factors split off the range
      const SteeringFactors f = hspwm_factors(cfg, theta, phi, grid.range_at(0));
      dict.u_atoms.col(pair) = scale * f.u;
      dict.v_atoms.col(pair) = f.v;
      for (int ci = 0; ci < nc; ++ci) {
        const SteeringFactors fr =
            (ci == 0) ? f : hspwm_factors(cfg, theta, phi, grid.range_at(ci));
        dict.b_atoms.col(grid.flat_index(ai, bi, ci)) = fr.b;
      }
    }
  dict.projected_u = w.wx.adjoint() * dict.u_atoms;
  dict.projected_v = w.wy.adjoint() * dict.v_atoms;
  return dict;
}

SdDictionary build_sd_dictionary(const ArrayConfig& cfg, const SamplingGrid& grid,
                                 double beta0, std::size_t memory_budget_bytes) {
  const std::size_t bytes = static_cast<std::size_t>(cfg.total_elements()) *
                            static_cast<std::size_t>(grid.atoms()) * sizeof(cxd);
  if (bytes > memory_budget_bytes)
    throw std::runtime_error(
        "build_sd_dictionary: dictionary of " + std::to_string(bytes) +
        " bytes exceeds the budget; use a coarser grid or raise the budget");
  SdDictionary dict;
  dict.grid = grid;
  dict.beta0 = beta0;
  dict.columns.resize(cfg.total_elements(), grid.atoms());
  for (int ai = 0; ai < grid.a(); ++ai) {
    const double theta = grid.theta_at(ai);
    for (int bi = 0; bi < grid.b(); ++bi) {
      const double phi = grid.phi_at(bi);
      for (int ci = 0; ci < grid.c(); ++ci)
        dict.columns.col(grid.flat_index(ai, bi, ci)) =
            steering_swm(cfg, theta, phi, grid.range_at(ci), beta0);
    }
  }
  return dict;
}

std::string dictionary_content_hash(const ArrayConfig& cfg, const SamplingGrid& grid,
                                    std::uint64_t seed, double beta0, int q_x,
                                    int q_y) {
  const double angle_step = grid.a() > 1 ? grid.azimuth[1] - grid.azimuth[0] : 0.0;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "cfg:%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g|grid:%d,%d,%d,%.17g,%.17g,%.17g,%.17g|seed:%llu|beta0:%.17g|q:%d,%d",
                cfg.m_x, cfg.m_y, cfg.n_x, cfg.n_y, cfg.d, cfg.dx_factor,
                cfg.dy_factor, cfg.wavelength, grid.a(), grid.b(), grid.c(),
                grid.a() ? grid.azimuth[0] : 0.0, angle_step, grid.delta,
                grid.c() ? grid.inv_range[0] : 0.0,
                static_cast<unsigned long long>(seed), beta0, q_x, q_y);
  return sha256_hex(buf);
}

}  // namespace nfswarm
