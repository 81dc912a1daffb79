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
#include <span>
#include <vector>

#include "remaa/geometry.hpp"

namespace remaa {

struct SelectionVector {
  enum class Mode { Relaxed, Binary };

  RVec values;
  int n_select = 0;
  Mode mode = Mode::Relaxed;

  static SelectionVector relaxed(RVec values, int n_select);
  static SelectionVector binary(int n_total, std::span<const int> selected, int n_select);
  static SelectionVector all_ones(int n_total, int n_select);

  int size() const { return static_cast<int>(values.size()); }
  // Indices with value 1 (binary) or >= 0.5 (relaxed), ascending.
  std::vector<int> selected() const;
  bool is_binary() const;
};

// Selection constraint matrices for one array. S is kept sparse: each column
// lists the antennas inside the exclusion window centered on that antenna,
// truncated at the array edges.
struct ConstraintBundle {
  int n_rows = 0;
  int n_cols = 0;
  int min_index_gap = 0;  // D
  int m_t = 0;            // number of REMAs; 0 for FC/FPA
  std::vector<std::vector<int>> spacing_columns;
  std::optional<Eigen::MatrixXi> rema_matrix;  // Q, N_t x M_t, PC only
  std::vector<int> rema_of;                    // antenna -> REMA column of Q, PC only
  // Maximal (D+1) x (D+1) index windows. Two antennas conflict iff they share
  // one, so "every window sums to <= 1" is the linear form of the pairwise
  // spacing rule used by the relaxed t-subproblem.
  std::vector<std::vector<int>> conflict_windows;

  int n_total() const { return n_rows * n_cols; }
  bool has_rema() const { return rema_matrix.has_value(); }
  Eigen::MatrixXi spacing_dense() const;
  // Antennas a and b are closer than D + 1 grid steps in both row and column.
  bool conflicts(int a, int b) const;
};

// ceil(lambda / (2 d_c)), with a relative tolerance so exact ratios such as
// d_c = lambda / 8 are not pushed up by rounding.
int min_index_gap(const ArrayConfig& config);

ConstraintBundle build_bundle(const ArrayConfig& config);

struct FeasibilityReport {
  bool feasible = false;
  bool count_ok = false;
  // Selected antennas whose spacing window contains another selected antenna.
  std::vector<int> spacing_violations;
  // REMAs (columns of Q) that do not hold exactly one selected antenna.
  std::vector<int> rema_violations;

  explicit operator bool() const { return feasible; }
};

// Binary t only. PC additionally requires Q^T t = 1; FC and FPA ignore Q.
FeasibilityReport is_feasible(const SelectionVector& t, const ConstraintBundle& bundle,
                              ArrayKind kind);

// All binary selections passing is_feasible. Throws std::length_error above
// 24 candidates.
std::vector<SelectionVector> enumerate_feasible(const ConstraintBundle& bundle, ArrayKind kind,
                                                int n_select);

// True if `candidate` can join `selected` without breaking spacing or the
// one-per-REMA rule (count is not checked).
bool can_add(std::span<const int> selected, int candidate, const ConstraintBundle& bundle,
             ArrayKind kind);

}  // namespace remaa
