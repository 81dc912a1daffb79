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

#include <optional>
#include <vector>

#include "remaa/constraints.hpp"
#include "remaa/types.hpp"

namespace remaa {

// Per-user transmit beamformers f_k stored as the columns of an N x K matrix.
struct BeamformerMatrix {
  CMat columns;
  double power_budget = 1.0;
  double noise_power = 1.0;

  double power() const { return columns.squaredNorm(); }
};

struct AuxiliaryState {
  CVec receive;  // u_k
  RVec weights;  // v_k
  RVec mse;      // e_k
};

// Sum of log2(1 + SINR_k) with the selection applied as diag(t). Channels are
// the columns of `h` (N x K).
double sum_rate(const CMat& h, const RVec& t, const CMat& f, double noise_power);
double sum_rate(const CMat& h, const CMat& f, double noise_power);

// Rate with the noise term scaled by ||F||^2 / P. Invariant to the scale of F
// and equal to sum_rate once ||F||^2 = P.
double scaled_sum_rate(const CMat& h, const RVec& t, const CMat& f, double noise_power,
                       double power);

// MMSE receive factors. Throws DegenerateInput if a denominator vanishes.
CVec update_u(const CMat& h, const RVec& t, const CMat& f, double noise_power, double power);

RVec mse_terms(const CMat& h, const RVec& t, const CMat& f, const CVec& u, double noise_power,
               double power);

// v_k = 1 / e_k. Throws DegenerateInput on e_k <= 0.
RVec update_v(const RVec& mse);

// Minimizer of sum_k v_k e_k over F for fixed u, v, t. Every user shares
//   Psi = sum_k v_k |u_k|^2 (T h_k h_k^H T + sigma^2 / P I)
// and f_k solves Psi f_k = v_k conj(u_k) T h_k.
CMat update_f(const CMat& h, const RVec& t, const CVec& u, const RVec& v, double noise_power,
              double power);

// The shared quadratic form of update_f, exposed for tests.
CMat weighted_mse_matrix(const CMat& h, const RVec& t, const CVec& u, const RVec& v,
                         double noise_power, double power);

double wmmse_objective(const RVec& mse, const RVec& weights);

struct WmmseOptions {
  int max_iters = 200;
  double tol = 1e-6;  // relative sum-rate change over one iteration
  std::optional<CMat> warm_start;
};

struct WmmseResult {
  BeamformerMatrix beamformer;  // ||F||_F^2 = P unless the channel is zero
  double sum_rate = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> rate_trace;  // starting point first
};

// Fixed-selection sum-rate maximization; only the selected rows carry power.
WmmseResult wmmse_solve(const CMat& h, const SelectionVector& t, double power,
                        double noise_power, const WmmseOptions& options = {});
// All rows of `h` active.
WmmseResult wmmse_solve(const CMat& h, double power, double noise_power,
                        const WmmseOptions& options = {});

}  // namespace remaa
