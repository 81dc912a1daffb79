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

#include <vector>

#include "remaa/constraints.hpp"
#include "remaa/wmmse.hpp"

namespace remaa {

struct SwapOptions {
  int candidate_iters = 25;  // WMMSE cap when scoring a trial selection
  WmmseOptions full;         // used for the incumbent and accepted swaps
  int cap = 1000;            // maximum swap steps in refine()
};

struct SwapState {
  SelectionVector selection;
  std::vector<int> indices;  // I_1..I_Ns
  int iteration = 0;         // d, number of completed steps
  std::vector<std::vector<int>> history;  // per slot n, the index chosen at each visit
  double best_rate = 0.0;                 // V_d
  CMat beamformer;
  int unchanged_run = 0;  // consecutive steps that kept the incumbent
};

struct SwapTraceRow {
  int step = 0;
  int slot = 0;
  int chosen = 0;
  double rate = 0.0;
};

// Solves the incumbent selection to full tolerance. Throws if t is not a
// feasible binary selection.
SwapState make_swap_state(const SelectionVector& t, const CMat& h, const ConstraintBundle& bundle,
                          ArrayKind kind, double power, double noise_power,
                          const SwapOptions& options = {});

// One coordinate-descent step: slot n = d mod N_s is vacated and every
// candidate is tried in its place. Infeasible candidates score 0, the
// incumbent keeps its rate, and a challenger is installed only if it is
// strictly better (lowest index among equal challengers).
SwapState swap_step(SwapState state, const CMat& h, const ConstraintBundle& bundle,
                    ArrayKind kind, double power, double noise_power,
                    const SwapOptions& options = {});

struct RefineResult {
  SelectionVector selection;
  double sum_rate = 0.0;
  BeamformerMatrix beamformer;
  int steps = 0;
  bool cap_reached = false;
  std::vector<double> rate_trace;  // V_0, V_1, ...
  std::vector<SwapTraceRow> trace;
  std::vector<SelectionVector> installed;  // selection after every step
};

// Repeats swap_step until N_s consecutive steps (after the first N_s) leave
// the selection unchanged, or the step cap is hit.
RefineResult refine(const SelectionVector& t, const CMat& h, const ConstraintBundle& bundle,
                    ArrayKind kind, double power, double noise_power,
                    const SwapOptions& options = {});

}  // namespace remaa
