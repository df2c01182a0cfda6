// SPDX-License-Identifier: Apache-2.0

#include "nfswarm/estimation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nfswarm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RVec clamp_to_bounds(RVec x, const RVec& lower, const RVec& upper) {
  if (lower.size() == x.size())
    for (long i = 0; i < x.size(); ++i) x[i] = std::max(x[i], lower[i]);
  if (upper.size() == x.size())
    for (long i = 0; i < x.size(); ++i) x[i] = std::min(x[i], upper[i]);
  return x;
}

[[noreturn]] void throw_nonfinite(const RVec& x) {
  std::ostringstream oss;
  oss << "nelder_mead: non-finite objective at (";
  for (long i = 0; i < x.size(); ++i) oss << (i ? ", " : "") << x[i];
  oss << ")";
  throw std::runtime_error(oss.str());
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const RVec&)>& objective,
                             const RVec& x0, const RVec& steps,
                             const NelderMeadOptions& opts) {
  const long n = x0.size();
  if (steps.size() != n)
    throw std::invalid_argument("nelder_mead: steps size mismatch");

  NelderMeadResult best;
  long evals = 0;
  auto eval = [&](const RVec& x) {
    const double f = objective(x);
    ++evals;
    if (!std::isfinite(f)) throw_nonfinite(x);
    if (evals == 1 || f < best.fx) {
      best.fx = f;
      best.x = x;
    }
    return f;
  };

  std::vector<RVec> simplex;
  std::vector<double> fvals;
  simplex.reserve(n + 1);
  simplex.push_back(clamp_to_bounds(x0, opts.lower, opts.upper));
  for (long i = 0; i < n; ++i) {
    RVec v = x0;
    v[i] += steps[i];
    v = clamp_to_bounds(v, opts.lower, opts.upper);
    if ((v - simplex[0]).norm() < 1e-14) {
      v = x0;
      v[i] -= steps[i];
      v = clamp_to_bounds(v, opts.lower, opts.upper);
    }
    simplex.push_back(v);
  }
  fvals.resize(n + 1);
  for (long i = 0; i <= n; ++i) fvals[i] = eval(simplex[i]);

  std::vector<int> order(n + 1);
  int iter = 0;
  bool converged = false;
  for (; iter < opts.max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fvals[a] < fvals[b]; });
    const int i_best = order.front();
    const int i_worst = order.back();
    const int i_second = order[n - 1];

    if (fvals[i_worst] - fvals[i_best] <=
        opts.spread_tol * (1.0 + std::abs(fvals[i_best]))) {
      converged = true;
      break;
    }

    RVec centroid = RVec::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != i_worst) centroid += simplex[i];
    centroid /= static_cast<double>(n);

    const RVec reflected =
        clamp_to_bounds(centroid + 1.0 * (centroid - simplex[i_worst]),
                        opts.lower, opts.upper);
    const double f_reflected = eval(reflected);

    if (f_reflected < fvals[i_best]) {
      const RVec expanded =
          clamp_to_bounds(centroid + 2.0 * (centroid - simplex[i_worst]),
                          opts.lower, opts.upper);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[i_worst] = expanded;
        fvals[i_worst] = f_expanded;
      } else {
        simplex[i_worst] = reflected;
        fvals[i_worst] = f_reflected;
      }
    } else if (f_reflected < fvals[i_second]) {
      simplex[i_worst] = reflected;
      fvals[i_worst] = f_reflected;
    } else {
      RVec contracted;
      if (f_reflected < fvals[i_worst])
        contracted = centroid + 0.5 * (reflected - centroid);   // outside
      else
        contracted = centroid + 0.5 * (simplex[i_worst] - centroid);  // inside
      contracted = clamp_to_bounds(contracted, opts.lower, opts.upper);
      const double f_contracted = eval(contracted);
      if (f_contracted < std::min(f_reflected, fvals[i_worst])) {
        simplex[i_worst] = contracted;
        fvals[i_worst] = f_contracted;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == i_best) continue;
          simplex[i] = clamp_to_bounds(
              simplex[i_best] + 0.5 * (simplex[i] - simplex[i_best]),
              opts.lower, opts.upper);
          fvals[i] = eval(simplex[i]);
        }
      }
    }
  }

  best.iterations = iter;
  best.converged = converged;
  best.evals = evals;
  return best;
}

// ---------------------------------------------------------------------------
// Shared least-squares refit
// ---------------------------------------------------------------------------

namespace {

// Normal equations are the reference path; orthogonal factorization takes over
// when X^H X is too ill-conditioned, and outright rank deficiency is an error
// naming the colliding atoms.
CVec least_squares_gains(const CMat& x, const CVec& y, const std::string& atoms) {
  const CMat gram = x.adjoint() * x;
  Eigen::SelfAdjointEigenSolver<CMat> eig(gram);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo > 1e16) {
    Eigen::ColPivHouseholderQR<CMat> qr(x);
    qr.setThreshold(1e-10);  // pivot ratio separating dependent from merely
                             // ill-conditioned atom sets
    if (qr.rank() < x.cols())
      throw std::runtime_error(
          "least_squares_gains: selected atoms are rank deficient: " + atoms);
    return qr.solve(y);
  }
  if (hi / lo > 1e8) {
    Eigen::HouseholderQR<CMat> qr(x);
    return qr.solve(y);
  }
  return gram.llt().solve(x.adjoint() * y);
}

std::string triples_to_string(const std::vector<std::array<int, 3>>& triples) {
  std::ostringstream oss;
  for (std::size_t i = 0; i < triples.size(); ++i)
    oss << (i ? ", " : "") << "(" << triples[i][0] << "," << triples[i][1] << ","
        << triples[i][2] << ")";
  return oss.str();
}

std::string indices_to_string(const std::vector<int>& indices) {
  std::ostringstream oss;
  for (std::size_t i = 0; i < indices.size(); ++i)
    oss << (i ? ", " : "") << indices[i];
  return oss.str();
}

}  // namespace

FlatDictionary sense_sd_dictionary(const ArrayConfig& cfg, const SdDictionary& dict,
                                   const MeasurementMatrix& w) {
  FlatDictionary out;
  out.columns = sense_columns(cfg, w, dict.columns);
  out.norms = out.columns.colwise().norm();
  return out;
}

OmpSelection omp_flat(const CVec& y, const FlatDictionary& dict, int sparsity) {
  const long u = dict.columns.cols();
  if (sparsity < 1 || sparsity > u)
    throw std::invalid_argument("omp_flat: sparsity out of range");
  if (y.size() != dict.columns.rows())
    throw std::invalid_argument("omp_flat: measurement length mismatch");

  OmpSelection sel;
  std::vector<bool> used(u, false);
  CVec residual = y;
  sel.residual_history.push_back(residual.norm());
  CMat x(y.size(), 0);

  for (int l = 0; l < sparsity; ++l) {
    const CVec corr = dict.columns.adjoint() * residual;
    sel.projection_ops += static_cast<std::uint64_t>(u) * y.size();
    int pick = -1;
    double best = -1.0;
    for (long j = 0; j < u; ++j) {
      if (used[j]) continue;
      const double norm_j = dict.norms[j];
      const double val = norm_j > 0.0 ? std::abs(corr[j]) / norm_j : 0.0;
      if (val > best) {
        best = val;
        pick = static_cast<int>(j);
      }
    }
    used[pick] = true;
    sel.indices.push_back(pick);

    x.conservativeResize(Eigen::NoChange, l + 1);
    x.col(l) = dict.columns.col(pick);
    sel.gains = least_squares_gains(x, y, indices_to_string(sel.indices));
    residual = y - x * sel.gains;
    sel.residual_history.push_back(residual.norm());
  }
  return sel;
}

EstimationResult sd_omp_ongrid(const ArrayConfig& cfg, const CVec& y,
                               const MeasurementMatrix& w, const SdDictionary& dict,
                               int sparsity, const FlatDictionary* presensed) {
  const auto t0 = Clock::now();
  FlatDictionary local;
  if (!presensed) {
    local = sense_sd_dictionary(cfg, dict, w);
    presensed = &local;
  }
  OmpSelection sel = omp_flat(y, *presensed, sparsity);

  EstimationResult res;
  for (int idx : sel.indices) res.support.push_back(dict.grid.unflatten(idx));
  res.gains = sel.gains;
  res.residual_history = std::move(sel.residual_history);
  res.projection_ops = sel.projection_ops;
  res.channel_estimate = CVec::Zero(cfg.total_elements());
  for (std::size_t l = 0; l < sel.indices.size(); ++l)
    res.channel_estimate += res.gains[l] * dict.columns.col(sel.indices[l]);
  res.wall_seconds = seconds_since(t0);
  return res;
}

// ---------------------------------------------------------------------------
// Off-grid refinement
// ---------------------------------------------------------------------------

namespace {

struct RefineSetup {
  RVec x0;
  RVec steps;
  RVec lower, upper;
  std::vector<double> fixed_ranges;
  int dims_per_path = 3;
};

RefineSetup make_refine_setup(const EstimationResult& ongrid,
                              const SamplingGrid& grid, bool refine_range) {
  const int l = static_cast<int>(ongrid.support.size());
  RefineSetup s;
  s.dims_per_path = refine_range ? 3 : 2;
  const int n = l * s.dims_per_path;
  s.x0.resize(n);
  s.steps.resize(n);
  s.lower.resize(n);
  s.upper.resize(n);
  const double angle_step =
      grid.a() > 1 ? grid.azimuth[1] - grid.azimuth[0] : 0.1;
  const double r_min = 1.0 / grid.inv_range[grid.c() - 1];
  const double r_max = 1.0 / grid.inv_range[0];
  for (int p = 0; p < l; ++p) {
    const auto [ai, bi, ci] = ongrid.support[p];
    const double theta = grid.theta_at(ai);
    const double phi = grid.phi_at(bi);
    const double range = grid.range_at(ci);
    const int base = p * s.dims_per_path;
    s.x0[base + 0] = theta;
    s.x0[base + 1] = phi;
    s.steps[base + 0] = angle_step / 2.0;
    s.steps[base + 1] = angle_step / 2.0;
    s.lower[base + 0] = 0.0;
    s.upper[base + 0] = kPi;
    s.lower[base + 1] = -kPi / 2.0;
    s.upper[base + 1] = kPi / 2.0;
    if (refine_range) {
      s.x0[base + 2] = range;
      // half the local 1/r cell mapped back to a range step
      s.steps[base + 2] = range * range * grid.delta / 2.0;
      s.lower[base + 2] = r_min / 2.0;
      s.upper[base + 2] = 2.0 * r_max;
    } else {
      s.fixed_ranges.push_back(range);
    }
  }
  return s;
}

CMat refine_atoms(const ArrayConfig& cfg, const RefineSetup& s, const RVec& params,
                  double beta0) {
  const int l = static_cast<int>(params.size()) / s.dims_per_path;
  CMat g(cfg.total_elements(), l);
  for (int p = 0; p < l; ++p) {
    const int base = p * s.dims_per_path;
    const double theta = params[base + 0];
    const double phi = params[base + 1];
    const double range =
        s.dims_per_path == 3 ? params[base + 2] : s.fixed_ranges[p];
    g.col(p) = steering_swm(cfg, theta, phi, range, beta0);
  }
  return g;
}

EstimationResult refine_offgrid(const ArrayConfig& cfg, const EstimationResult& ongrid,
                                const CVec& y, const MeasurementMatrix& w,
                                const SamplingGrid& grid, double beta0,
                                const OffgridOptions& opts) {
  const auto t0 = Clock::now();
  if (ongrid.support.empty())
    throw std::invalid_argument("refine_offgrid: on-grid result has no support");

  RefineSetup setup = make_refine_setup(ongrid, grid, opts.refine_range);

  long evals = 0;
  auto objective = [&](const RVec& params) {
    ++evals;
    const CMat g = refine_atoms(cfg, setup, params, beta0);
    const CMat x = sense_columns(cfg, w, g);
    Eigen::CompleteOrthogonalDecomposition<CMat> cod(x);
    const CVec fitted = x * cod.solve(y);
    return (y - fitted).norm();
  };

  NelderMeadOptions nm = opts.nm;
  nm.lower = setup.lower;
  nm.upper = setup.upper;
  const double f0 = objective(setup.x0);
  const NelderMeadResult nmres = nelder_mead(objective, setup.x0, setup.steps, nm);

  EstimationResult res;
  res.support = ongrid.support;
  const CMat g = refine_atoms(cfg, setup, nmres.x, beta0);
  const CMat x = sense_columns(cfg, w, g);
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(x);
  res.gains = cod.solve(y);
  res.channel_estimate = g * res.gains;
  const int l = static_cast<int>(ongrid.support.size());
  for (int p = 0; p < l; ++p) {
    const int base = p * setup.dims_per_path;
    const double range = setup.dims_per_path == 3 ? nmres.x[base + 2]
                                                  : setup.fixed_ranges[p];
    res.refined_params.push_back({nmres.x[base + 0], nmres.x[base + 1], range});
  }
  res.residual_history = {f0, nmres.fx};
  res.objective_evals = evals;
  res.projection_ops = ongrid.projection_ops;
  res.converged = nmres.converged;
  res.wall_seconds = seconds_since(t0);
  return res;
}

}  // namespace

EstimationResult sd_omp_offgrid(const ArrayConfig& cfg, const EstimationResult& ongrid,
                                const CVec& y, const MeasurementMatrix& w,
                                const SamplingGrid& grid, double beta0,
                                const OffgridOptions& opts) {
  return refine_offgrid(cfg, ongrid, y, w, grid, beta0, opts);
}

Tensor3 measurement_tensor(const ArrayConfig& cfg, const MeasurementMatrix& w,
                           const CVec& y) {
  return devec(y, static_cast<int>(w.wy.cols()), static_cast<int>(w.wx.cols()),
               cfg.num_uavs());
}

EstimationResult tensor_omp_ongrid(const ArrayConfig& cfg, const Tensor3& y_tensor,
                                   const TensorDictionary& dict, int sparsity) {
  const auto t0 = Clock::now();
  const SamplingGrid& grid = dict.grid;
  const int na = grid.a(), nb = grid.b(), nc = grid.c();
  const int n_atoms = grid.atoms();
  if (sparsity < 1 || sparsity > n_atoms)
    throw std::invalid_argument("tensor_omp_ongrid: sparsity out of range");
  const int qy = static_cast<int>(dict.projected_v.rows());
  const int qx = static_cast<int>(dict.projected_u.rows());
  const int m = static_cast<int>(dict.b_atoms.rows());
  if (y_tensor.ni != qy || y_tensor.nj != qx || y_tensor.nk != m)
    throw std::invalid_argument("tensor_omp_ongrid: tensor shape mismatch");

  // separable atom norms
  const RVec u_norms = dict.projected_u.colwise().norm();
  const RVec v_norms = dict.projected_v.colwise().norm();
  const RVec b_norms = dict.b_atoms.colwise().norm();

  EstimationResult res;
  std::vector<bool> used(n_atoms, false);
  std::vector<int> picked;
  Tensor3 residual = y_tensor;
  res.residual_history.push_back(residual.fro_norm());
  CMat x(static_cast<long>(qy) * qx * m, 0);
  const CVec y_flat = vec(y_tensor);

  for (int l = 0; l < sparsity; ++l) {
    int pick = -1;
    double best = -1.0;
    for (int ai = 0; ai < na; ++ai)
      for (int bi = 0; bi < nb; ++bi) {
        const int pair = dict.angle_pair_index(ai, bi);
        // contract the two compressed angle factors once per pair
        const CMat m1 = mode_product(residual, dict.projected_v.col(pair), 1, true);
        const CVec s = m1.transpose() * dict.projected_u.col(pair).conjugate();
        res.projection_ops +=
            static_cast<std::uint64_t>(qy) * qx * m + static_cast<std::uint64_t>(qx) * m;
        const double pair_norm = u_norms[pair] * v_norms[pair];
        for (int ci = 0; ci < nc; ++ci) {
          const int idx = grid.flat_index(ai, bi, ci);
          if (used[idx]) continue;
          res.projection_ops += m;
          const cxd corr = dict.b_atoms.col(idx).dot(s);
          const double den = pair_norm * b_norms[idx];
          const double val = den > 0.0 ? std::abs(corr) / den : 0.0;
          if (val > best) {
            best = val;
            pick = idx;
          }
        }
      }
    used[pick] = true;
    picked.push_back(pick);
    const auto [ai, bi, ci] = grid.unflatten(pick);
    res.support.push_back({ai, bi, ci});

    const int pair = dict.angle_pair_index(ai, bi);
    x.conservativeResize(Eigen::NoChange, l + 1);
    x.col(l) = kron({dict.b_atoms.col(pick), dict.projected_u.col(pair),
                     dict.projected_v.col(pair)});
    res.gains = least_squares_gains(x, y_flat, triples_to_string(res.support));
    const CVec res_flat = y_flat - x * res.gains;
    residual = devec(res_flat, qy, qx, m);
    res.residual_history.push_back(residual.fro_norm());
  }

  // reconstruct from the uncompressed atoms
  const int n = cfg.antennas_per_uav();
  res.channel_estimate = CVec::Zero(static_cast<long>(m) * n);
  for (std::size_t l = 0; l < picked.size(); ++l) {
    const auto [ai, bi, ci] = res.support[l];
    const int pair = dict.angle_pair_index(ai, bi);
    res.channel_estimate +=
        res.gains[l] * kron({dict.b_atoms.col(picked[l]), dict.u_atoms.col(pair),
                             dict.v_atoms.col(pair)});
  }
  res.wall_seconds = seconds_since(t0);
  return res;
}

EstimationResult tensor_omp_offgrid(const ArrayConfig& cfg,
                                    const EstimationResult& ongrid,
                                    const Tensor3& y_tensor,
                                    const MeasurementMatrix& w,
                                    const SamplingGrid& grid, double beta0,
                                    const OffgridOptions& opts) {
  return refine_offgrid(cfg, ongrid, vec(y_tensor), w, grid, beta0, opts);
}

CVec ls_baseline(const ArrayConfig& cfg, const CVec& y, const MeasurementMatrix& w,
                 double regularization) {
  const int m = cfg.num_uavs();
  const int n = cfg.antennas_per_uav();
  const int q = w.q();
  if (y.size() != static_cast<long>(m) * q)
    throw std::invalid_argument("ls_baseline: measurement length mismatch");
  const CMat wm = per_uav_combiner(w);  // n x q
  CVec h(static_cast<long>(m) * n);
  if (regularization > 0.0) {
    const CMat gram = wm.adjoint() * wm +
                      regularization * CMat::Identity(q, q);
    const Eigen::LLT<CMat> llt(gram);
    for (int um = 0; um < m; ++um)
      h.segment(static_cast<long>(um) * n, n) =
          wm * llt.solve(y.segment(static_cast<long>(um) * q, q));
  } else {
    Eigen::CompleteOrthogonalDecomposition<CMat> cod(wm.adjoint());
    for (int um = 0; um < m; ++um)
      h.segment(static_cast<long>(um) * n, n) =
          cod.solve(y.segment(static_cast<long>(um) * q, q));
  }
  return h;
}

}  // namespace nfswarm
