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

#include "remaa/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace remaa {

const char* to_string(ArrayKind kind) {
  switch (kind) {
    case ArrayKind::PC: return "PC";
    case ArrayKind::FC: return "FC";
    case ArrayKind::FPA: return "FPA";
  }
  return "?";
}

void ArrayConfig::validate() const {
  if (m_rows < 1 || m_cols < 1 || s_rows < 1 || s_cols < 1) {
    throw std::invalid_argument("array counts must be >= 1");
  }
  if (!(d_c > 0.0) || !(wavelength > 0.0)) {
    throw std::invalid_argument("spacing and wavelength must be positive");
  }
  if (kind == ArrayKind::PC && !(d_e > 0.0)) {
    throw std::invalid_argument("REMA spacing must be positive");
  }
}

ArrayConfig ArrayConfig::fpa(int rows, int cols, double wavelength) {
  ArrayConfig c;
  c.s_rows = rows;
  c.s_cols = cols;
  c.wavelength = wavelength;
  c.d_c = wavelength / 2.0;
  c.kind = ArrayKind::FPA;
  return c;
}

Layout build_grid(const ArrayConfig& config) {
  config.validate();
  const int nr = config.n_rows();
  const int nc = config.n_cols();
  const double dc = config.kind == ArrayKind::FPA ? config.wavelength / 2.0 : config.d_c;

  std::vector<double> x(nc), z(nr);
  if (config.kind == ArrayKind::PC) {
    // n = q * S_c + t, m = p * S_r + s (zero based)
    for (int q = 0; q < config.m_cols; ++q) {
      for (int t = 0; t < config.s_cols; ++t) {
        x[q * config.s_cols + t] =
            (config.m_cols - 1 - q) * config.d_e + (config.s_cols - 1 - t) * dc;
      }
    }
    for (int p = 0; p < config.m_rows; ++p) {
      for (int s = 0; s < config.s_rows; ++s) {
        z[p * config.s_rows + s] =
            (config.m_rows - 1 - p) * config.d_e + (config.s_rows - 1 - s) * dc;
      }
    }
  } else {
    for (int n = 0; n < nc; ++n) x[n] = (nc - 1 - n) * dc;
    for (int m = 0; m < nr; ++m) z[m] = (nr - 1 - m) * dc;
  }

  Layout out(static_cast<std::size_t>(nr) * nc);
  for (int n = 0; n < nc; ++n) {
    for (int m = 0; m < nr; ++m) {
      out[grid_index(m, n, nr)] = Position(x[n], 0.0, z[m]);
    }
  }
  return out;
}

Eigen::Vector3d wave_vector(double azimuth, double elevation) {
  const double ce = std::cos(elevation);
  return {ce * std::sin(azimuth), ce * std::cos(azimuth), std::sin(elevation)};
}

CVec steering_vector(std::span<const Position> positions, double azimuth,
                     double elevation, double wavelength) {
  const auto n = static_cast<Eigen::Index>(positions.size());
  CVec out(n);
  if (n == 0) return out;
  const Eigen::Vector3d k = wave_vector(azimuth, elevation) * (2.0 * kPi / wavelength);
  const double scale = std::sqrt(1.0 / static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = std::polar(scale, k.dot(positions[i]));
  }
  return out;
}

CMat channel_matrix(std::span<const Position> positions, const PathList& paths,
                    double wavelength) {
  CMat h = CMat::Zero(static_cast<Eigen::Index>(positions.size()),
                      static_cast<Eigen::Index>(paths.size()));
  for (std::size_t k = 0; k < paths.size(); ++k) {
    for (const auto& path : paths[k]) {
      h.col(k) += path.gain * steering_vector(positions, path.azimuth, path.elevation, wavelength);
    }
  }
  return h;
}

PathList draw_paths(const PathSpec& spec) {
  if (spec.paths_per_user.empty()) throw std::invalid_argument("need at least one user");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  PathList out(spec.paths_per_user.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const int count = spec.paths_per_user[k];
    if (count < 1) throw std::invalid_argument("each user needs at least one path");
    out[k].reserve(count);
    for (int l = 0; l < count; ++l) {
      ChannelPath p;
      const double re = normal(rng);
      const double im = normal(rng);
      p.gain = {re, im};
      const double theta = unit(rng);
      const double chord = std::sqrt(std::max(0.0, 1.0 - theta * theta));
      const double omega = chord * unit(rng);
      p.elevation = std::asin(omega);
      const double ce = std::cos(p.elevation);
      p.azimuth = ce > 0.0 ? std::asin(std::clamp(theta / ce, -1.0, 1.0)) : 0.0;
      out[k].push_back(p);
    }
  }
  return out;
}

ChannelSet make_channel_set(std::span<const Position> positions, PathList paths,
                            double wavelength) {
  ChannelSet set;
  set.matrix = channel_matrix(positions, paths, wavelength);
  set.paths = std::move(paths);
  return set;
}

ChannelSet synthesize_channels(const ArrayConfig& config, const PathSpec& spec) {
  const Layout grid = build_grid(config);
  return make_channel_set(grid, draw_paths(spec), config.wavelength);
}

void write_paths(std::ostream& out, const PathList& paths) {
  out << "remaa-paths 1\n";
  out << "users " << paths.size() << '\n';
  out << std::setprecision(17);
  for (std::size_t k = 0; k < paths.size(); ++k) {
    out << "user " << k << ' ' << paths[k].size() << '\n';
    for (const auto& p : paths[k]) {
      out << p.gain.real() << ' ' << p.gain.imag() << ' ' << p.azimuth << ' '
          << p.elevation << '\n';
    }
  }
}

PathList read_paths(std::istream& in) {
  auto fail = [](const std::string& what) {
    throw std::runtime_error("malformed path file: " + what);
  };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "remaa-paths" || version != 1) fail("header");
  std::size_t users = 0;
  if (!(in >> tag >> users) || tag != "users") fail("user count");
  PathList out(users);
  for (std::size_t k = 0; k < users; ++k) {
    std::size_t index = 0, count = 0;
    if (!(in >> tag >> index >> count) || tag != "user" || index != k) fail("user block");
    out[k].resize(count);
    for (auto& p : out[k]) {
      double re = 0, im = 0;
      if (!(in >> re >> im >> p.azimuth >> p.elevation)) fail("path line");
      p.gain = {re, im};
    }
  }
  return out;
}

std::uint64_t hash_paths(const PathList& paths) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffULL;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& user : paths) {
    mix(static_cast<double>(user.size()));
    for (const auto& p : user) {
      mix(p.gain.real());
      mix(p.gain.imag());
      mix(p.azimuth);
      mix(p.elevation);
    }
  }
  return h;
}

}  // namespace remaa
