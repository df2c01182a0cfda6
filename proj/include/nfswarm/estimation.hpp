// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nfswarm/sensing.hpp"
#include "nfswarm/tensor.hpp"
#include "nfswarm/types.hpp"
#include "nfswarm/wavefront.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace nfswarm {

// ---------------------------------------------------------------------------
// Nelder-Mead simplex search (reflection 1.0, expansion 2.0, contraction 0.5,
// shrink 0.5). Candidate points are clamped to the optional bounds. The best
// point ever evaluated is returned, so the result never exceeds f(x0).
// ---------------------------------------------------------------------------

struct NelderMeadOptions {
  int max_iter = 400;
  double spread_tol = 1e-10;  // stop when (worst - best) <= tol * (1 + |best|)
  RVec lower;                 // optional per-dimension bounds; empty = none
  RVec upper;
};

struct NelderMeadResult {
  RVec x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
  long evals = 0;
};

NelderMeadResult nelder_mead(const std::function<double(const RVec&)>& objective,
                             const RVec& x0, const RVec& steps,
                             const NelderMeadOptions& opts = {});

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

struct EstimationResult {
  std::vector<std::array<int, 3>> support;  // grid triples (a,b,c), selection order
  CVec gains;
  std::vector<std::array<double, 3>> refined_params;  // (theta, phi, r); empty on-grid
  CVec channel_estimate;                    // length MN
  std::vector<double> residual_history;
  long objective_evals = 0;
  std::uint64_t projection_ops = 0;         // complex MACs spent selecting atoms
  double wall_seconds = 0.0;
  bool converged = true;
};

// Sensed flat dictionary (combiner applied, per-column norms cached).
struct FlatDictionary {
  CMat columns;
  RVec norms;
};

FlatDictionary sense_sd_dictionary(const ArrayConfig& cfg, const SdDictionary& dict,
                                   const MeasurementMatrix& w);

// Greedy selection loop over an explicit sensed dictionary: correlate, pick the
// best-normalized atom (lowest index wins ties), least-squares refit, update the
// residual. Exposed for cross-checking against the factorized route.
struct OmpSelection {
  std::vector<int> indices;
  CVec gains;
  std::vector<double> residual_history;
  std::uint64_t projection_ops = 0;
};

OmpSelection omp_flat(const CVec& y, const FlatDictionary& dict, int sparsity);

EstimationResult sd_omp_ongrid(const ArrayConfig& cfg, const CVec& y,
                               const MeasurementMatrix& w, const SdDictionary& dict,
                               int sparsity, const FlatDictionary* presensed = nullptr);

struct OffgridOptions {
  NelderMeadOptions nm;
  bool refine_range = true;  // false pins every range at its initial value
};

// Continuous refinement of the selected triples: Nelder-Mead over the path
// parameters, minimizing the norm of the measurement residual after projecting
// onto the sensed exact-model atoms at the candidate parameters.
EstimationResult sd_omp_offgrid(const ArrayConfig& cfg, const EstimationResult& ongrid,
                                const CVec& y, const MeasurementMatrix& w,
                                const SamplingGrid& grid, double beta0,
                                const OffgridOptions& opts = {});

// devec of the stacked measurement into its q_y x q_x x m tensor form.
Tensor3 measurement_tensor(const ArrayConfig& cfg, const MeasurementMatrix& w,
                           const CVec& y);

// Factorized greedy selection: contracts the residual tensor with the two
// compressed angle factors once per angle pair, then sweeps range bins against
// the inter-UAV factor. Selection and gains match omp_flat on the flattened
// factor dictionary exactly.
EstimationResult tensor_omp_ongrid(const ArrayConfig& cfg, const Tensor3& y_tensor,
                                   const TensorDictionary& dict, int sparsity);

// Same refinement machinery as sd_omp_offgrid, but over vec of the measurement
// tensor; the refinement atoms use the exact model, so this also corrects the
// factorized model's approximation error.
EstimationResult tensor_omp_offgrid(const ArrayConfig& cfg,
                                    const EstimationResult& ongrid,
                                    const Tensor3& y_tensor,
                                    const MeasurementMatrix& w,
                                    const SamplingGrid& grid, double beta0,
                                    const OffgridOptions& opts = {});

// Minimum-norm least-squares inversion of the measurement (per-UAV blocks);
// exact inversion when the per-axis combiners are square. regularization > 0
// switches to a ridge solve.
CVec ls_baseline(const ArrayConfig& cfg, const CVec& y, const MeasurementMatrix& w,
                 double regularization = 0.0);

}  // namespace nfswarm
