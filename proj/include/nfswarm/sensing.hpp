// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nfswarm/geometry.hpp"
#include "nfswarm/types.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace nfswarm {

// Per-axis analog combiners shared by every UAV. Each UAV applies
// w = kron(wx, wy) (N x Q with Q = q_x*q_y); the swarm-level combiner is the
// block diagonal kron(I_M, wx, wy).
struct MeasurementMatrix {
  CMat wx;          // n_x x q_x
  CMat wy;          // n_y x q_y
  bool normalized = true;  // unit-modulus projection applied

  int q() const { return static_cast<int>(wx.cols() * wy.cols()); }
};

// Draws a single N x Q combiner: random unitaries around a rectangular identity
// (so w^H w = I before projection), then optional entrywise unit-modulus
// normalization. Deterministic per seed.
CMat design_measurement(int n, int q, std::uint64_t seed, bool unit_modulus = true);

MeasurementMatrix design_measurement_pair(const ArrayConfig& cfg, int q_x, int q_y,
                                          std::uint64_t seed,
                                          bool unit_modulus = true);

// One UAV's combiner kron(wx, wy).
CMat per_uav_combiner(const MeasurementMatrix& w);

// Applies the swarm combiner adjoint: y = W^H h with W = kron(I_M, wx, wy).
CVec sense(const ArrayConfig& cfg, const MeasurementMatrix& w, const CVec& h);

// Same, column by column, for an MN x K matrix.
CMat sense_columns(const ArrayConfig& cfg, const MeasurementMatrix& w, const CMat& g);

// Dictionary sampling grid. Angles are sampled in the direction-cosine pair
// (cos(theta), sin(phi)), cell-centered over [lo, hi] with the given step;
// ranges are sampled uniformly in 1/r from 1/r_max up to 1/r_min inclusive.
struct SamplingGrid {
  RVec azimuth;    // cos(theta) samples, strictly increasing
  RVec elevation;  // sin(phi) samples, strictly increasing
  RVec inv_range;  // 1/r ladder, strictly increasing
  double delta = 0.0;      // 1/r step
  double z_delta = 0.0;    // coherence scale; the safe regime is delta < 1/z_delta
  bool delta_ok = true;

  int a() const { return static_cast<int>(azimuth.size()); }
  int b() const { return static_cast<int>(elevation.size()); }
  int c() const { return static_cast<int>(inv_range.size()); }
  int atoms() const { return a() * b() * c(); }

  double theta_at(int ai) const;
  double phi_at(int bi) const;
  double range_at(int ci) const { return 1.0 / inv_range[ci]; }

  // Flat atom order: range fastest, then elevation, then azimuth.
  int flat_index(int ai, int bi, int ci) const { return (ai * b() + bi) * c() + ci; }
  std::array<int, 3> unflatten(int idx) const;
};

// angle_resolution is the step in both sampled cosines; the number of points
// per axis is span/step (cell-centered), e.g. step 2/12 over [-0.75, 0.75]
// gives 9 points. r_min = r_max yields a single-range grid.
SamplingGrid build_grid(const ArrayConfig& cfg, double angle_resolution,
                        double r_min, double r_max, double delta,
                        double angle_lo = -0.75, double angle_hi = 0.75,
                        double coherence_level = 0.3);

// Factor-form dictionary for the cross-field model. Valid atoms share the
// angular index pair across all three factor families (grid "body diagonal");
// only the factor matrices are stored, never the full cube.
struct TensorDictionary {
  SamplingGrid grid;
  double beta0 = 1.0;
  CMat u_atoms;      // n_x x (A*B), carries the sqrt(beta0) scale
  CMat v_atoms;      // n_y x (A*B)
  CMat b_atoms;      // m   x (A*B*C)
  CMat projected_u;  // q_x x (A*B) = wx^H u
  CMat projected_v;  // q_y x (A*B)

  int angle_pair_index(int ai, int bi) const { return ai * grid.b() + bi; }
};

TensorDictionary build_tensor_dictionary(const ArrayConfig& cfg,
                                         const SamplingGrid& grid,
                                         const MeasurementMatrix& w, double beta0);

// Flat spherical-wave dictionary: one exact-model column per grid triple.
struct SdDictionary {
  SamplingGrid grid;
  double beta0 = 1.0;
  CMat columns;  // MN x (A*B*C)
};

// Throws std::runtime_error when MN * atoms would exceed the memory budget.
SdDictionary build_sd_dictionary(const ArrayConfig& cfg, const SamplingGrid& grid,
                                 double beta0,
                                 std::size_t memory_budget_bytes = 2ull << 30);

// Content key for dictionary caching: hash of the array config, grid
// parameters, measurement seed/shape and beta0. q_x/q_y are zero for
// measurement-independent (flat) dictionaries.
std::string dictionary_content_hash(const ArrayConfig& cfg, const SamplingGrid& grid,
                                    std::uint64_t seed, double beta0, int q_x = 0,
                                    int q_y = 0);

}  // namespace nfswarm
