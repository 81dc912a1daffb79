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

#include "remaa/swap_refine.hpp"

#include <algorithm>
#include <stdexcept>

namespace remaa {

SwapState make_swap_state(const SelectionVector& t, const CMat& h, const ConstraintBundle& bundle,
                          ArrayKind kind, double power, double noise_power,
                          const SwapOptions& options) {
  if (!t.is_binary() || !is_feasible(t, bundle, kind)) {
    throw std::invalid_argument("swap refinement needs a feasible binary selection");
  }
  SwapState s;
  s.selection = t;
  s.indices = t.selected();
  s.history.resize(s.indices.size());
  const WmmseResult r = wmmse_solve(h, t, power, noise_power, options.full);
  s.best_rate = r.sum_rate;
  s.beamformer = r.beamformer.columns;
  return s;
}

SwapState swap_step(SwapState state, const CMat& h, const ConstraintBundle& bundle,
                    ArrayKind kind, double power, double noise_power,
                    const SwapOptions& options) {
  const int n_select = static_cast<int>(state.indices.size());
  if (n_select == 0) throw std::invalid_argument("empty selection");
  const int n_total = static_cast<int>(h.rows());
  const int slot = state.iteration % n_select;
  const int incumbent = state.indices[slot];

  std::vector<int> others;
  for (int i = 0; i < n_select; ++i) {
    if (i != slot) others.push_back(state.indices[i]);
  }

  int best_p = -1;
  double best_score = 0.0;
  CMat best_f;
  for (int p = 0; p < n_total; ++p) {
    if (p == incumbent) continue;
    if (!can_add(others, p, bundle, kind)) continue;  // scores 0

    std::vector<int> trial_idx = others;
    trial_idx.push_back(p);
    const auto trial = SelectionVector::binary(n_total, trial_idx, state.selection.n_select);

    CMat warm = state.beamformer;
    warm.row(p) = state.beamformer.row(incumbent);
    warm.row(incumbent).setZero();
    WmmseOptions opts;
    opts.max_iters = options.candidate_iters;
    opts.tol = options.full.tol;
    opts.warm_start = std::move(warm);
    WmmseResult r = wmmse_solve(h, trial, power, noise_power, opts);
    if (r.sum_rate > best_score) {
      best_score = r.sum_rate;
      best_p = p;
      best_f = std::move(r.beamformer.columns);
    }
  }

  int chosen = incumbent;
  if (best_p >= 0 && best_score > state.best_rate) {
    std::vector<int> idx = others;
    idx.push_back(best_p);
    const auto trial = SelectionVector::binary(n_total, idx, state.selection.n_select);
    WmmseOptions opts = options.full;
    opts.warm_start = best_f;
    const WmmseResult r = wmmse_solve(h, trial, power, noise_power, opts);
    if (r.sum_rate >= best_score) {
      best_score = r.sum_rate;
      best_f = r.beamformer.columns;
    }
    chosen = best_p;
    state.indices[slot] = best_p;
    state.selection = trial;
    state.best_rate = best_score;
    state.beamformer = std::move(best_f);
    state.unchanged_run = 0;
  } else {
    ++state.unchanged_run;
  }
  state.history[slot].push_back(chosen);
  ++state.iteration;
  return state;
}

RefineResult refine(const SelectionVector& t, const CMat& h, const ConstraintBundle& bundle,
                    ArrayKind kind, double power, double noise_power,
                    const SwapOptions& options) {
  SwapState state = make_swap_state(t, h, bundle, kind, power, noise_power, options);
  const int n_select = static_cast<int>(state.indices.size());
  RefineResult out;
  out.rate_trace.push_back(state.best_rate);

  while (true) {
    if (state.iteration >= options.cap) {
      out.cap_reached = true;
      break;
    }
    state = swap_step(std::move(state), h, bundle, kind, power, noise_power, options);
    const int slot = (state.iteration - 1) % n_select;
    out.rate_trace.push_back(state.best_rate);
    out.trace.push_back({state.iteration, slot, state.indices[slot], state.best_rate});
    out.installed.push_back(state.selection);
    if (state.iteration > n_select && state.unchanged_run >= n_select) break;
  }

  out.selection = state.selection;
  out.sum_rate = state.best_rate;
  out.beamformer.columns = state.beamformer;
  out.beamformer.power_budget = power;
  out.beamformer.noise_power = noise_power;
  out.steps = state.iteration;
  return out;
}

}  // namespace remaa
