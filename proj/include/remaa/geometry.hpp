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
#include <span>
#include <vector>

#include "remaa/types.hpp"

namespace remaa {

enum class ArrayKind { PC, FC, FPA };

const char* to_string(ArrayKind kind);

// Candidate-antenna layout of a REMA array. Lengths are in meters; with the
// default wavelength of 1 they read directly in wavelengths.
struct ArrayConfig {
  int m_rows = 1;  // REMAs per column (PC only)
  int m_cols = 1;  // REMAs per row (PC only)
  int s_rows = 1;  // candidate rows inside one REMA
  int s_cols = 1;  // candidate columns inside one REMA
  double d_c = 0.5;
  double d_e = 1.0;
  double wavelength = 1.0;
  ArrayKind kind = ArrayKind::FC;

  int n_rows() const { return m_rows * s_rows; }
  int n_cols() const { return m_cols * s_cols; }
  int n_total() const { return n_rows() * n_cols(); }
  int num_remas() const { return m_rows * m_cols; }

  // Throws std::invalid_argument on nonpositive counts or lengths.
  void validate() const;

  // Uniform half-wavelength array with the given shape.
  static ArrayConfig fpa(int rows, int cols, double wavelength = 1.0);
};

using Position = Eigen::Vector3d;
using Layout = std::vector<Position>;

// Column-major candidate coordinates, entry s = n * N_r + m (zero based),
// with the antenna in the last row and last column at the origin.
Layout build_grid(const ArrayConfig& config);

// Linear antenna index of (row, col), both zero based.
inline int grid_index(int row, int col, int n_rows) { return col * n_rows + row; }

struct ChannelPath {
  cdouble gain;
  double azimuth = 0.0;    // [-pi, pi]
  double elevation = 0.0;  // [-pi/2, pi/2]
};

using PathList = std::vector<std::vector<ChannelPath>>;

// Unit wave vector [cos(el) sin(az), cos(el) cos(az), sin(el)].
Eigen::Vector3d wave_vector(double azimuth, double elevation);

// Planar-wave steering vector over arbitrary positions, normalized by
// sqrt(1 / positions.size()).
CVec steering_vector(std::span<const Position> positions, double azimuth,
                     double elevation, double wavelength);

// Columns are the per-user multipath mixtures of steering vectors.
CMat channel_matrix(std::span<const Position> positions, const PathList& paths,
                    double wavelength);

struct ChannelSet {
  PathList paths;
  CMat matrix;  // N_t x K
};

struct PathSpec {
  std::vector<int> paths_per_user;
  std::uint64_t seed = 0;
};

// Gains CN(0,1); Theta = cos(el) sin(az) uniform on [-1, 1] and
// Omega = sin(el) uniform on the admissible chord [-sqrt(1-Theta^2), +...].
PathList draw_paths(const PathSpec& spec);

ChannelSet make_channel_set(std::span<const Position> positions, PathList paths,
                            double wavelength);
ChannelSet synthesize_channels(const ArrayConfig& config, const PathSpec& spec);

// Plain-text path file: "remaa-paths 1", "users K", then per user a
// "user k L" line followed by L lines "gain_re gain_im azimuth elevation".
void write_paths(std::ostream& out, const PathList& paths);
PathList read_paths(std::istream& in);

// FNV-1a over the raw path parameters; used to check that systems compared
// within one trial consumed the same realization.
std::uint64_t hash_paths(const PathList& paths);

}  // namespace remaa
