// SPDX-License-Identifier: Apache-2.0
//
// remaa: multiuser beamforming and antenna selection for electronic
// movable-antenna arrays
// Copyright (C) 2026 The remaa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "remaa/geometry.hpp"
#include "remaa/wmmse.hpp"

namespace remaa {

// Axis-aligned transmit rectangle in the y = 0 plane. A zero-width side
// pins that coordinate (linear arrays).
struct MmaRegion {
  double x_lo = 0.0, x_hi = 0.0;
  double z_lo = 0.0, z_hi = 0.0;

  bool x_free() const { return x_hi - x_lo > 1e-12; }
  bool z_free() const { return z_hi - z_lo > 1e-12; }
  bool contains(const Position& p, double tol = 1e-9) const;
  // Bounding box of a candidate grid.
  static MmaRegion footprint(const Layout& grid);
};

struct MmaLayout {
  Layout positions;
  MmaRegion region;
  double min_spacing = 0.5;

  double min_pair_distance() const;
  // Inside the region and pairwise spacing >= min_spacing - tol.
  bool valid(double tol = 1e-9) const;
  // Every barrier slack is positive.
  bool strictly_feasible() const;
};

// Channels seen by movable antennas: the grid channel model evaluated at
// arbitrary positions and normalized by sqrt(1 / N_s). Result is N_s x K.
CMat mma_channel(const Layout& positions, const PathList& paths, double wavelength);

// d(sum_k R_k)/d p_n in bits per meter, one 3-vector per antenna, for fixed
// beamformers W (N_s x K).
std::vector<Eigen::Vector3d> position_gradient(const Layout& positions, const PathList& paths,
                                               const CMat& w, double noise_power,
                                               double wavelength);

double mma_sum_rate(const Layout& positions, const PathList& paths, const CMat& w,
                    double noise_power, double wavelength);

// Region barrier weight (mu), spacing barrier weight (rho), and the fixed
// schedule that shrinks both after every inner solve.
struct BarrierState {
  double mu = 1e-2;
  double rho = 1e-2;
  double decrease = 0.5;
  int stages = 10;
};

struct PositionLimits {
  int max_iters_per_stage = 60;
  double grad_tol = 1e-6;
  double max_step = 0.05;  // wavelengths per iteration
};

struct PositionResult {
  MmaLayout layout;
  double rate_in = 0.0;
  double rate_out = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;  // barrier-gradient inf-norm at the last iterate
};

// Log-barrier position update with fixed beamformers: gradient descent with
// Armijo backtracking on
//   -sum_k R_k - mu sum ln(face slacks) - rho sum_{m<n} ln(|p_m - p_n| - d_min).
// Returns the feasible iterate with the highest rate, so rate_out >= rate_in.
// Throws InitializationFailure unless the start is strictly feasible.
PositionResult optimize_positions(const MmaLayout& layout, const PathList& paths, const CMat& w,
                                  double noise_power, double wavelength,
                                  const BarrierState& barrier = {},
                                  const PositionLimits& limits = {});

// Centered grid with pitch slightly above the minimum spacing. Throws
// InitializationFailure if the region cannot hold n antennas.
MmaLayout initial_layout(const MmaRegion& region, int n, double wavelength);

struct AbapoLimits {
  int outer_iters = 15;
  double tol = 1e-6;  // relative sum-rate change across one outer iteration
  WmmseOptions wmmse;
  BarrierState barrier;
  PositionLimits positions;
  int random_starts = 0;  // extra strictly feasible random starts
  std::uint64_t seed = 0;
};

struct AbapoResult {
  MmaLayout layout;
  CMat beamformer;
  double sum_rate = 0.0;
  std::vector<double> rate_trace;  // best run: rate after each outer iteration
};

// Alternating beamforming (WMMSE) and position optimization.
AbapoResult abapo_run(const MmaRegion& region, const PathList& paths, int n_antennas,
                      double power, double noise_power, double wavelength,
                      const AbapoLimits& limits = {},
                      const std::optional<Layout>& start = std::nullopt);

// Layout serialization for plotting: "index x y z" per line, in wavelengths.
void write_layout(std::ostream& out, const MmaLayout& layout, double wavelength);

}  // namespace remaa
