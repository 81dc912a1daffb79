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

#include "remaa/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace remaa {

SelectionVector SelectionVector::relaxed(RVec values, int n_select) {
  SelectionVector t;
  t.values = std::move(values);
  t.n_select = n_select;
  t.mode = Mode::Relaxed;
  return t;
}

SelectionVector SelectionVector::binary(int n_total, std::span<const int> selected, int n_select) {
  SelectionVector t;
  t.values = RVec::Zero(n_total);
  for (int i : selected) {
    if (i < 0 || i >= n_total) throw std::out_of_range("selection index out of range");
    t.values[i] = 1.0;
  }
  t.n_select = n_select;
  t.mode = Mode::Binary;
  return t;
}

SelectionVector SelectionVector::all_ones(int n_total, int n_select) {
  SelectionVector t;
  t.values = RVec::Ones(n_total);
  t.n_select = n_select;
  t.mode = Mode::Binary;
  return t;
}

std::vector<int> SelectionVector::selected() const {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] >= 0.5) out.push_back(static_cast<int>(i));
  }
  return out;
}

bool SelectionVector::is_binary() const {
  return (values.array() == 0.0 || values.array() == 1.0).all();
}

Eigen::MatrixXi ConstraintBundle::spacing_dense() const {
  const int n = n_total();
  Eigen::MatrixXi s = Eigen::MatrixXi::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    for (int row : spacing_columns[col]) s(row, col) = 1;
  }
  return s;
}

bool ConstraintBundle::conflicts(int a, int b) const {
  const int ra = a % n_rows, ca = a / n_rows;
  const int rb = b % n_rows, cb = b / n_rows;
  return std::abs(ra - rb) <= min_index_gap && std::abs(ca - cb) <= min_index_gap;
}

int min_index_gap(const ArrayConfig& config) {
  if (!(config.d_c > 0.0)) throw std::invalid_argument("d_c must be positive");
  const double ratio = config.wavelength / (2.0 * config.d_c);
  return static_cast<int>(std::ceil(ratio * (1.0 - 1e-12)));
}

namespace {

// Anchors of maximal windows of side `len` along an axis of length `n`.
int window_anchors(int n, int len) { return std::max(1, n - len + 1); }

}  // namespace

ConstraintBundle build_bundle(const ArrayConfig& config) {
  config.validate();
  ConstraintBundle b;
  b.n_rows = config.n_rows();
  b.n_cols = config.n_cols();
  b.min_index_gap = min_index_gap(config);
  const int d = b.min_index_gap;
  const int nr = b.n_rows, nc = b.n_cols;

  b.spacing_columns.resize(static_cast<std::size_t>(nr) * nc);
  for (int n = 0; n < nc; ++n) {
    for (int m = 0; m < nr; ++m) {
      auto& col = b.spacing_columns[grid_index(m, n, nr)];
      for (int bn = std::max(0, n - d); bn <= std::min(nc - 1, n + d); ++bn) {
        for (int am = std::max(0, m - d); am <= std::min(nr - 1, m + d); ++am) {
          col.push_back(grid_index(am, bn, nr));
        }
      }
      std::sort(col.begin(), col.end());
    }
  }

  const int len = d + 1;
  for (int n0 = 0; n0 < window_anchors(nc, len); ++n0) {
    for (int m0 = 0; m0 < window_anchors(nr, len); ++m0) {
      std::vector<int> w;
      for (int n = n0; n < std::min(nc, n0 + len); ++n) {
        for (int m = m0; m < std::min(nr, m0 + len); ++m) w.push_back(grid_index(m, n, nr));
      }
      if (w.size() > 1) b.conflict_windows.push_back(std::move(w));
    }
  }

  if (config.kind == ArrayKind::PC) {
    b.m_t = config.num_remas();
    Eigen::MatrixXi q = Eigen::MatrixXi::Zero(b.n_total(), b.m_t);
    b.rema_of.resize(b.n_total());
    for (int n = 0; n < nc; ++n) {
      for (int m = 0; m < nr; ++m) {
        const int p = m / config.s_rows;
        const int qq = n / config.s_cols;
        const int s = qq * config.m_rows + p;
        const int idx = grid_index(m, n, nr);
        q(idx, s) = 1;
        b.rema_of[idx] = s;
      }
    }
    b.rema_matrix = std::move(q);
  }
  return b;
}

FeasibilityReport is_feasible(const SelectionVector& t, const ConstraintBundle& bundle,
                              ArrayKind kind) {
  if (t.size() != bundle.n_total()) throw std::invalid_argument("selection size mismatch");
  if (!t.is_binary()) throw std::invalid_argument("feasibility is defined for binary selections");
  if (kind == ArrayKind::PC && !bundle.has_rema()) {
    throw std::invalid_argument("PC feasibility needs a REMA membership matrix");
  }

  FeasibilityReport r;
  const auto sel = t.selected();
  r.count_ok = static_cast<int>(sel.size()) == t.n_select;

  for (int s : sel) {
    double window = 0.0;
    for (int row : bundle.spacing_columns[s]) window += t.values[row];
    if (window > 1.0) r.spacing_violations.push_back(s);
  }

  if (kind == ArrayKind::PC) {
    const Eigen::VectorXd per_rema = bundle.rema_matrix->cast<double>().transpose() * t.values;
    for (int s = 0; s < bundle.m_t; ++s) {
      if (per_rema[s] != 1.0) r.rema_violations.push_back(s);
    }
  }

  r.feasible = r.count_ok && r.spacing_violations.empty() && r.rema_violations.empty();
  return r;
}

bool can_add(std::span<const int> selected, int candidate, const ConstraintBundle& bundle,
             ArrayKind kind) {
  for (int s : selected) {
    if (s == candidate || bundle.conflicts(s, candidate)) return false;
    if (kind == ArrayKind::PC && bundle.rema_of[s] == bundle.rema_of[candidate]) return false;
  }
  return true;
}

std::vector<SelectionVector> enumerate_feasible(const ConstraintBundle& bundle, ArrayKind kind,
                                                int n_select) {
  const int n = bundle.n_total();
  if (n > 24) throw std::length_error("enumerate_feasible is limited to 24 candidates");
  if (n_select < 0 || n_select > n) return {};

  std::vector<SelectionVector> out;
  std::vector<int> idx(n_select);
  for (int i = 0; i < n_select; ++i) idx[i] = i;
  while (true) {
    auto t = SelectionVector::binary(n, idx, n_select);
    if (is_feasible(t, bundle, kind)) out.push_back(std::move(t));
    int i = n_select - 1;
    while (i >= 0 && idx[i] == n - n_select + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n_select; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace remaa
