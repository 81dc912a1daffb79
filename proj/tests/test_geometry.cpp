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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "remaa/geometry.hpp"

using namespace remaa;

namespace {

ArrayConfig line_fc(int n_cols, double d_c) {
  ArrayConfig c;
  c.s_cols = n_cols;
  c.d_c = d_c;
  c.kind = ArrayKind::FC;
  return c;
}

}  // namespace

TEST_CASE("fc grid follows the uniform layout") {
  const Layout g = build_grid(line_fc(2, 0.5));
  REQUIRE(g.size() == 2);
  CHECK(g[0].x() == doctest::Approx(0.5));
  CHECK(g[1].x() == doctest::Approx(0.0));
  CHECK(g[0].z() == 0.0);
  CHECK(g[1].z() == 0.0);
}

TEST_CASE("pc grid inside a single rema") {
  ArrayConfig c;
  c.s_cols = 2;
  c.d_c = 0.25;
  c.d_e = 1.0;
  c.kind = ArrayKind::PC;
  const Layout g = build_grid(c);
  CHECK(g[0].x() == doctest::Approx(0.25));
  CHECK(g[1].x() == doctest::Approx(0.0));
}

TEST_CASE("pc grid with two remas per row") {
  ArrayConfig c;
  c.m_cols = 2;
  c.s_cols = 2;
  c.d_c = 0.25;
  c.d_e = 1.0;
  c.kind = ArrayKind::PC;
  const Layout g = build_grid(c);
  const double want[] = {1.25, 1.0, 0.25, 0.0};
  REQUIRE(g.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(g[i].x() == doctest::Approx(want[i]));
}

TEST_CASE("grid is column major with the origin at the last antenna") {
  ArrayConfig c;
  c.s_rows = 3;
  c.s_cols = 2;
  c.d_c = 0.3;
  const Layout g = build_grid(c);
  // s = n * N_r + m
  CHECK(g[grid_index(1, 0, 3)].z() == doctest::Approx(0.3));
  CHECK(g[grid_index(1, 0, 3)].x() == doctest::Approx(0.3));
  CHECK(g[grid_index(2, 1, 3)].norm() == doctest::Approx(0.0));
  CHECK(g[0].z() == doctest::Approx(0.6));
}

TEST_CASE("pc and fc grids coincide when the remas tile the panel") {
  ArrayConfig pc;
  pc.m_rows = 2;
  pc.m_cols = 3;
  pc.s_rows = 4;
  pc.s_cols = 4;
  pc.d_c = 0.125;
  pc.d_e = 0.5;
  pc.kind = ArrayKind::PC;
  ArrayConfig fc = pc;
  fc.kind = ArrayKind::FC;
  const Layout a = build_grid(pc), b = build_grid(fc);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() < 1e-12);
}

TEST_CASE("fpa uses half-wavelength spacing") {
  const Layout g = build_grid(ArrayConfig::fpa(2, 2, 2.0));
  CHECK(g[0].x() == doctest::Approx(1.0));
  CHECK(g[0].z() == doctest::Approx(1.0));
}

TEST_CASE("invalid configs are rejected") {
  ArrayConfig c;
  c.s_cols = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.s_cols = 1;
  c.d_c = 0.0;
  CHECK_THROWS_AS(build_grid(c), std::invalid_argument);
}

TEST_CASE("steering vector at broadside is flat") {
  const Layout g = build_grid(line_fc(5, 0.37));
  const CVec a = steering_vector(g, 0.0, 0.0, 1.0);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(a[i] - cdouble(std::sqrt(0.2), 0)) < 1e-15);
}

TEST_CASE("steering vector half-wavelength endfire phase") {
  const Layout g = build_grid(line_fc(2, 0.5));
  const CVec a = steering_vector(g, kPi / 2, 0.0, 1.0);
  const double s = std::sqrt(0.5);
  CHECK(std::abs(a[0] - s * std::exp(cdouble(0, kPi))) < 1e-12);
  CHECK(std::abs(a[1] - cdouble(s, 0)) < 1e-12);
}

TEST_CASE("steering vectors have unit norm") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    Layout pos;
    for (int i = 0; i < 7; ++i) pos.emplace_back(u(rng), 0.0, u(rng));
    const CVec a = steering_vector(pos, u(rng), u(rng) / 2, 1.0);
    CHECK(std::abs(a.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("steering phase matches the wave-vector formula") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  Layout pos;
  for (int i = 0; i < 4; ++i) pos.emplace_back(u(rng), 0.0, u(rng));
  const double az = 0.7, el = -0.3, lambda = 0.8;
  const CVec a = steering_vector(pos, az, el, lambda);
  for (int i = 0; i < 4; ++i) {
    const double phase = 2 * kPi *
                         (pos[i].x() * std::cos(el) * std::sin(az) + pos[i].z() * std::sin(el)) /
                         lambda;
    CHECK(std::abs(a[i] - 0.5 * std::exp(cdouble(0, phase))) < 1e-12);
  }
}

TEST_CASE("single unit path at broadside gives a flat channel") {
  const Layout g = build_grid(line_fc(4, 0.5));
  const PathList paths{{{cdouble(1, 0), 0.0, 0.0}}};
  const CMat h = channel_matrix(g, paths, 1.0);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(h(i, 0) - 0.5) < 1e-15);
}

TEST_CASE("channel synthesis is deterministic and bounded") {
  ArrayConfig c;
  c.s_rows = 4;
  c.s_cols = 4;
  c.d_c = 0.25;
  const PathSpec spec{{6, 6}, 42};
  const ChannelSet a = synthesize_channels(c, spec);
  const ChannelSet b = synthesize_channels(c, spec);
  CHECK(a.matrix == b.matrix);
  CHECK(hash_paths(a.paths) == hash_paths(b.paths));
  for (int k = 0; k < 2; ++k) {
    double bound = 0.0;
    for (const auto& p : a.paths[k]) bound += std::abs(p.gain);
    CHECK(a.matrix.col(k).norm() <= bound + 1e-9);
    // column equals the regenerated mixture
    CVec col = CVec::Zero(16);
    const Layout g = build_grid(c);
    for (const auto& p : a.paths[k]) col += p.gain * steering_vector(g, p.azimuth, p.elevation, 1.0);
    CHECK((col - a.matrix.col(k)).norm() == 0.0);
  }
}

TEST_CASE("drawn angles stay in range and cover the sine space uniformly") {
  const PathList paths = draw_paths({std::vector<int>(50, 40), 7});
  double sum = 0.0, sum2 = 0.0, gain2 = 0.0;
  int n = 0;
  for (const auto& user : paths) {
    for (const auto& p : user) {
      CHECK(p.azimuth >= -kPi);
      CHECK(p.azimuth <= kPi);
      CHECK(p.elevation >= -kPi / 2);
      CHECK(p.elevation <= kPi / 2);
      const double theta = std::cos(p.elevation) * std::sin(p.azimuth);
      sum += theta;
      sum2 += theta * theta;
      gain2 += std::norm(p.gain);
      ++n;
    }
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sum2 / n - 1.0 / 3.0) < 0.03);
  CHECK(std::abs(gain2 / n - 1.0) < 0.08);
}

TEST_CASE("common translation leaves the beamformed magnitude unchanged") {
  const Layout g = build_grid(line_fc(6, 0.3));
  Layout shifted = g;
  for (auto& p : shifted) p += Position(1.7, 0.0, -0.4);
  const PathList paths = draw_paths({{5}, 11});
  // a single path keeps the common phase factor scalar
  const PathList one{{paths[0][0]}};
  const CMat h1 = channel_matrix(g, one, 1.0);
  const CMat h2 = channel_matrix(shifted, one, 1.0);
  const CVec f = CVec::LinSpaced(6, 0.1, 0.6).cast<cdouble>();
  CHECK(std::abs(std::abs(h1.col(0).dot(f)) - std::abs(h2.col(0).dot(f))) < 1e-9);
}

TEST_CASE("path files round trip exactly") {
  const PathList paths = draw_paths({{3, 1, 2}, 5});
  std::stringstream ss;
  write_paths(ss, paths);
  const PathList back = read_paths(ss);
  CHECK(hash_paths(back) == hash_paths(paths));
  std::istringstream bad("nonsense");
  CHECK_THROWS(read_paths(bad));
}
