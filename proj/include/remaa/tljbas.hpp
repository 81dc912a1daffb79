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

// Penalty weights for binaryness (rho1), cardinality (rho2) and REMA
// membership (rho3), their per-outer-iteration growth factors, and the
// rounding threshold.
struct PenaltyState {
  double rho1 = 1.0;
  double rho2 = 1.0;
  double rho3 = 1.0;
  double beta1 = 2.0;
  double beta2 = 2.0;
  double beta3 = 2.0;
  double threshold = 0.5;

  void validate() const;
  void grow() {
    rho1 *= beta1;
    rho2 *= beta2;
    rho3 *= beta3;
  }
};

// min t^T quad t + linear^T t + constant  s.t.  0 <= t <= 1 and, for every
// entry of `rows`, the listed entries of t sum to at most 1.
struct QpSubproblem {
  RMat quad;
  RVec linear;
  double constant = 0.0;
  std::vector<std::vector<int>> rows;

  double value(const RVec& t) const { return t.dot(quad * t) + linear.dot(t) + constant; }
  RVec gradient(const RVec& t) const { return 2.0 * (quad * t) + linear; }
};

// Penalized objective
//   sum_k (v_k e_k - log v_k) + rho1 t^T (1 - t) + rho2 (1^T t - N_s)^2
//     + rho3 ||Q^T t - 1||^2
// The rho3 term is dropped unless kind is PC.
double penalty_objective(const CMat& h, const RVec& t, const CMat& f, const CVec& u,
                         const RVec& v, double noise_power, double power,
                         const PenaltyState& penalties, const ConstraintBundle& bundle,
                         ArrayKind kind, int n_select);

// Quadratic model of penalty_objective in t for fixed (u, v, F). The data
// term uses w_{k,i} = conj(h_k) .* f_i so that t^T w_{k,i} = h_k^H diag(t) f_i
// for real t, and takes the real part of the outer products. `constant` makes
// value(t) equal penalty_objective(t) exactly.
QpSubproblem assemble_qp(const CMat& h, const CMat& f, const CVec& u, const RVec& v,
                         double noise_power, double power, const PenaltyState& penalties,
                         const ConstraintBundle& bundle, ArrayKind kind, int n_select);

struct QpOptions {
  int max_iters = 400;
  double tol = 1e-9;  // on ||t - P(t - grad)||_inf
};

struct QpResult {
  RVec t;
  double objective = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  bool stalled = false;
};

// Euclidean projection onto the box intersected with the row constraints
// (Dykstra's alternating projections), followed by an exact feasibility
// repair of any residual violation.
RVec project_feasible(const RVec& y, const std::vector<std::vector<int>>& rows);

// Projected gradient with Armijo backtracking. The returned point is
// feasible and never worse than the (projected) warm start.
QpResult solve_t_subproblem(const QpSubproblem& qp, const RVec& warm_start,
                            const QpOptions& options = {});

struct TljbasLimits {
  int outer_cap = 25;
  int inner_cap = 50;
  double inner_tol = 1e-5;
  QpOptions qp;
};

// Objective after each block update of one inner iteration. `after_u` is
// evaluated with the previous v and is NaN on the first inner iteration.
struct TljbasTraceRow {
  int outer = 0;
  int inner = 0;
  double rho1 = 0, rho2 = 0, rho3 = 0;
  double after_u = 0, after_v = 0, after_f = 0, after_t = 0;
  bool qp_monotone = true;
  int thresholded_count = 0;
};

struct TljbasResult {
  SelectionVector selection;  // binary, feasible
  RVec relaxed;               // last relaxed iterate
  int outer_iterations = 0;
  bool rounded_cleanly = false;  // threshold rounding produced the selection
  bool fallback_used = false;
  double max_binary_gap = 0.0;  // max_p t(1 - t) of `relaxed`
  std::vector<TljbasTraceRow> trace;
};

// Step 1 of the two-step scheme: penalty continuation around alternating
// (u, v, F, t) minimization, stopped once threshold rounding yields exactly
// n_select antennas that pass is_feasible.
TljbasResult tljbas_run(const CMat& h, const ConstraintBundle& bundle, ArrayKind kind,
                        int n_select, double power, double noise_power,
                        PenaltyState penalties = {}, const TljbasLimits& limits = {},
                        bool record_trace = false);

// Feasible completion used when rounding never hits the target count:
// depth-first search over candidates ordered by descending score, so the
// first leaf is the greedy choice whenever greedy succeeds. Throws
// std::runtime_error if no feasible selection exists.
SelectionVector repair_selection(const RVec& scores, const ConstraintBundle& bundle,
                                 ArrayKind kind, int n_select);

}  // namespace remaa
