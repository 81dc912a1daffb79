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

#include "doctest.h"
#include "remaa/swap_refine.hpp"
#include "remaa/tljbas.hpp"

using namespace remaa;

namespace {

ArrayConfig line(int n, double d_c) {
  ArrayConfig c;
  c.s_cols = n;
  c.d_c = d_c;
  return c;
}

CMat channels(const ArrayConfig& c, int users, std::uint64_t seed) {
  const Layout g = build_grid(c);
  const PathList p = draw_paths({std::vector<int>(users, 4), seed});
  return channel_matrix(g, p, 1.0) * std::sqrt(static_cast<double>(g.size()) / 2.0);
}

}  // namespace

TEST_CASE("no feasible challenger leaves the state unchanged") {
  const ConstraintBundle b = build_bundle(line(3, 0.5));
  const CMat h = channels(line(3, 0.5), 1, 1);
  const auto t = SelectionVector::binary(3, std::vector<int>{0, 2}, 2);
  const SwapState s0 = make_swap_state(t, h, b, ArrayKind::FC, 1.0, 0.1);
  const SwapState s1 = swap_step(s0, h, b, ArrayKind::FC, 1.0, 0.1);
  CHECK(s1.indices == s0.indices);
  CHECK(s1.best_rate == s0.best_rate);
  CHECK(s1.iteration == 1);
  CHECK(s1.unchanged_run == 1);
  CHECK(s1.history[0] == std::vector<int>{0});
}

TEST_CASE("refine rejects infeasible starts") {
  const ConstraintBundle b = build_bundle(line(4, 0.5));
  const CMat h = channels(line(4, 0.5), 1, 2);
  CHECK_THROWS(refine(SelectionVector::binary(4, std::vector<int>{0, 1}, 2), h, b, ArrayKind::FC,
                      1.0, 0.1));
}

TEST_CASE("swap trajectories are monotone and feasible") {
  for (int seed = 0; seed < 50; ++seed) {
    const ArrayConfig c = line(10, 0.25);
    const ConstraintBundle b = build_bundle(c);
    const CMat h = channels(c, 2, 1000 + seed);
    const RVec scores = RVec::LinSpaced(10, 1.0, 0.0);
    const SelectionVector start = repair_selection(scores, b, ArrayKind::FC, 3);
    const RefineResult r = refine(start, h, b, ArrayKind::FC, 1.0, 0.1);
    for (std::size_t i = 1; i < r.rate_trace.size(); ++i) {
      CHECK(r.rate_trace[i] >= r.rate_trace[i - 1]);
    }
    for (const auto& t : r.installed) CHECK(is_feasible(t, b, ArrayKind::FC));
    CHECK_FALSE(r.cap_reached);
    CHECK(r.sum_rate >= r.rate_trace.front());
    CHECK(r.sum_rate ==
          doctest::Approx(sum_rate(h, r.selection.values, r.beamformer.columns, 0.1)).epsilon(1e-9));
  }
}

TEST_CASE("refining a fixed point takes one quiet pass") {
  const ArrayConfig c = line(9, 0.25);
  const ConstraintBundle b = build_bundle(c);
  const CMat h = channels(c, 2, 77);
  const RefineResult first =
      refine(repair_selection(RVec::Ones(9), b, ArrayKind::FC, 2), h, b, ArrayKind::FC, 1.0, 0.1);
  const RefineResult again = refine(first.selection, h, b, ArrayKind::FC, 1.0, 0.1);
  CHECK(again.selection.selected() == first.selection.selected());
  CHECK(again.steps == 2 + 1);
}

TEST_CASE("refine ends at a single-swap local optimum") {
  // Oracle: every single replacement, solved from scratch to full tolerance.
  for (int seed = 0; seed < 10; ++seed) {
    const ArrayConfig c = line(12, 0.25);
    const ConstraintBundle b = build_bundle(c);
    const CMat h = channels(c, 2, 300 + seed);
    const RefineResult r =
        refine(repair_selection(RVec::Ones(12), b, ArrayKind::FC, 2), h, b, ArrayKind::FC, 1.0, 0.1);
    const std::vector<int> sel = r.selection.selected();
    double best_neighbour = 0.0;
    for (int slot = 0; slot < 2; ++slot) {
      for (int p = 0; p < 12; ++p) {
        std::vector<int> trial = sel;
        trial[slot] = p;
        const auto t = SelectionVector::binary(12, trial, 2);
        if (t.values.sum() != 2.0 || !is_feasible(t, b, ArrayKind::FC)) continue;
        best_neighbour = std::max(best_neighbour, wmmse_solve(h, t, 1.0, 0.1).sum_rate);
      }
    }
    CHECK(r.sum_rate >= best_neighbour * (1 - 1e-3));
  }
}

TEST_CASE("refine stays below the exhaustive optimum and above its input") {
  std::mt19937_64 rng(5);
  for (int seed = 0; seed < 10; ++seed) {
    const ArrayConfig c = line(10, 0.25);
    const ConstraintBundle b = build_bundle(c);
    const CMat h = channels(c, 2, 500 + seed);
    const TljbasResult tl = tljbas_run(h, b, ArrayKind::FC, 2, 1.0, 0.1);
    const double input = wmmse_solve(h, tl.selection, 1.0, 0.1).sum_rate;
    const RefineResult r = refine(tl.selection, h, b, ArrayKind::FC, 1.0, 0.1);
    CHECK(r.sum_rate >= input);
    double best = 0.0;
    for (const auto& t : enumerate_feasible(b, ArrayKind::FC, 2)) {
      best = std::max(best, wmmse_solve(h, t, 1.0, 0.1).sum_rate);
    }
    CHECK(r.sum_rate <= best * (1 + 1e-4));
  }
}

TEST_CASE("pc refinement keeps one antenna per rema") {
  ArrayConfig c;
  c.m_cols = 3;
  c.s_cols = 4;
  c.d_c = 0.25;
  c.d_e = 1.0;
  c.kind = ArrayKind::PC;
  const ConstraintBundle b = build_bundle(c);
  const CMat h = channels(c, 2, 9);
  const SelectionVector start = repair_selection(RVec::Ones(12), b, ArrayKind::PC, 3);
  const RefineResult r = refine(start, h, b, ArrayKind::PC, 1.0, 0.1);
  for (const auto& t : r.installed) CHECK(is_feasible(t, b, ArrayKind::PC));
}

TEST_CASE("step cap is reported") {
  const ArrayConfig c = line(10, 0.25);
  const ConstraintBundle b = build_bundle(c);
  const CMat h = channels(c, 2, 4);
  SwapOptions opts;
  opts.cap = 1;
  const RefineResult r =
      refine(repair_selection(RVec::Ones(10), b, ArrayKind::FC, 2), h, b, ArrayKind::FC, 1.0, 0.1, opts);
  CHECK(r.cap_reached);
  CHECK(r.steps == 1);
}
