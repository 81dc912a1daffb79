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

#include "remaa/tljbas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace remaa {

void PenaltyState::validate() const {
  if (!(rho1 > 0 && rho2 > 0 && rho3 > 0)) throw std::invalid_argument("penalties must be > 0");
  if (!(beta1 > 1 && beta2 > 1 && beta3 > 1)) throw std::invalid_argument("growth factors must be > 1");
  if (!(threshold > 0 && threshold < 1)) throw std::invalid_argument("threshold must lie in (0, 1)");
}

double penalty_objective(const CMat& h, const RVec& t, const CMat& f, const CVec& u,
                         const RVec& v, double noise_power, double power,
                         const PenaltyState& penalties, const ConstraintBundle& bundle,
                         ArrayKind kind, int n_select) {
  const RVec e = mse_terms(h, t, f, u, noise_power, power);
  double value = wmmse_objective(e, v);
  value += penalties.rho1 * t.dot(RVec::Ones(t.size()) - t);
  const double excess = t.sum() - n_select;
  value += penalties.rho2 * excess * excess;
  if (kind == ArrayKind::PC) {
    if (!bundle.has_rema()) throw std::invalid_argument("PC objective needs a REMA matrix");
    const RVec r = bundle.rema_matrix->cast<double>().transpose() * t - RVec::Ones(bundle.m_t);
    value += penalties.rho3 * r.squaredNorm();
  }
  return value;
}

QpSubproblem assemble_qp(const CMat& h, const CMat& f, const CVec& u, const RVec& v,
                         double noise_power, double power, const PenaltyState& penalties,
                         const ConstraintBundle& bundle, ArrayKind kind, int n_select) {
  const Eigen::Index n = h.rows();
  const Eigen::Index users = h.cols();
  QpSubproblem qp;
  qp.quad = RMat::Zero(n, n);
  qp.linear = RVec::Zero(n);

  const double fnorm = f.squaredNorm();
  for (Eigen::Index k = 0; k < users; ++k) {
    // Columns w_{k,i} = conj(h_k) .* f_i, i = 1..K
    const CMat w = h.col(k).conjugate().asDiagonal() * f;
    const double weight = v[k] * std::norm(u[k]);
    qp.quad += weight * (w * w.adjoint()).real();
    qp.linear -= 2.0 * v[k] * (u[k] * w.col(k)).real();
    qp.constant += v[k] * (1.0 + std::norm(u[k]) * noise_power * fnorm / power) - std::log(v[k]);
  }

  qp.quad.diagonal().array() -= penalties.rho1;
  qp.linear.array() += penalties.rho1;

  qp.quad.array() += penalties.rho2;
  qp.linear.array() -= 2.0 * penalties.rho2 * n_select;
  qp.constant += penalties.rho2 * static_cast<double>(n_select) * n_select;

  if (kind == ArrayKind::PC) {
    if (!bundle.has_rema()) throw std::invalid_argument("PC subproblem needs a REMA matrix");
    const RMat q = bundle.rema_matrix->cast<double>();
    qp.quad += penalties.rho3 * (q * q.transpose());
    qp.linear -= 2.0 * penalties.rho3 * (q * RVec::Ones(bundle.m_t));
    qp.constant += penalties.rho3 * bundle.m_t;
  }

  qp.rows = bundle.conflict_windows;
  return qp;
}

RVec project_feasible(const RVec& y, const std::vector<std::vector<int>>& rows) {
  RVec x = y.cwiseMax(0.0).cwiseMin(1.0);
  auto violated = [&rows](const RVec& p) {
    for (const auto& r : rows) {
      double s = 0.0;
      for (int i : r) s += p[i];
      if (s > 1.0 + 1e-15) return true;
    }
    return false;
  };
  if (!violated(x)) return x;

  x = y;
  RVec box_inc = RVec::Zero(y.size());
  std::vector<std::vector<double>> row_inc(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) row_inc[r].assign(rows[r].size(), 0.0);

  for (int sweep = 0; sweep < 20000; ++sweep) {
    const RVec before = x;
    const RVec z = x + box_inc;
    x = z.cwiseMax(0.0).cwiseMin(1.0);
    box_inc = z - x;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& idx = rows[r];
      double s = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j) s += x[idx[j]] + row_inc[r][j];
      const double shift = s > 1.0 ? (s - 1.0) / static_cast<double>(idx.size()) : 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        const double zj = x[idx[j]] + row_inc[r][j];
        const double pj = zj - shift;
        row_inc[r][j] = zj - pj;
        x[idx[j]] = pj;
      }
    }
    if ((x - before).lpNorm<Eigen::Infinity>() < 1e-14) break;
  }

  x = x.cwiseMax(0.0).cwiseMin(1.0);
  for (const auto& r : rows) {
    double s = 0.0;
    for (int i : r) s += x[i];
    if (s > 1.0) {
      for (int i : r) x[i] /= s;
    }
  }
  return x;
}

QpResult solve_t_subproblem(const QpSubproblem& qp, const RVec& warm_start,
                            const QpOptions& options) {
  if (qp.quad.rows() != qp.linear.size() || warm_start.size() != qp.linear.size()) {
    throw std::invalid_argument("QP dimensions disagree");
  }
  QpResult res;
  RVec t = project_feasible(warm_start, qp.rows);
  double value = qp.value(t);

  const double curvature = 2.0 * qp.quad.cwiseAbs().rowwise().sum().maxCoeff();
  double alpha = curvature > 0.0 ? 1.0 / curvature : 1.0;
  const double alpha_max = 1e6 * alpha;

  for (int it = 0; it < options.max_iters; ++it) {
    const RVec g = qp.gradient(t);
    res.kkt_residual = (t - project_feasible(t - g, qp.rows)).lpNorm<Eigen::Infinity>();
    res.iterations = it;
    if (res.kkt_residual <= options.tol) break;

    alpha = std::min(2.0 * alpha, alpha_max);
    bool accepted = false;
    while (alpha > 1e-18) {
      const RVec cand = project_feasible(t - alpha * g, qp.rows);
      const RVec d = cand - t;
      const double cand_value = qp.value(cand);
      if (cand_value <= value + 1e-4 * g.dot(d) && cand_value <= value) {
        accepted = d.lpNorm<Eigen::Infinity>() > 0.0;
        t = cand;
        value = cand_value;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      res.stalled = res.kkt_residual > options.tol;
      break;
    }
  }
  res.kkt_residual = (t - project_feasible(t - qp.gradient(t), qp.rows)).lpNorm<Eigen::Infinity>();
  res.t = std::move(t);
  res.objective = value;
  return res;
}

SelectionVector repair_selection(const RVec& scores, const ConstraintBundle& bundle,
                                 ArrayKind kind, int n_select) {
  const int n = static_cast<int>(scores.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&scores](int a, int b) { return scores[a] > scores[b]; });

  std::vector<int> chosen;
  long budget = 2'000'000;
  // Depth-first over `order`, preferring higher scores at every level.
  auto dfs = [&](auto&& self, int start) -> bool {
    if (static_cast<int>(chosen.size()) == n_select) return true;
    for (int i = start; i < n; ++i) {
      if (--budget < 0) return false;
      if (n - i < n_select - static_cast<int>(chosen.size())) return false;
      const int c = order[i];
      if (!can_add(chosen, c, bundle, kind)) continue;
      chosen.push_back(c);
      if (self(self, i + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!dfs(dfs, 0)) throw std::runtime_error("no feasible antenna selection found");
  std::sort(chosen.begin(), chosen.end());
  return SelectionVector::binary(n, chosen, n_select);
}

namespace {

SelectionVector threshold_round(const RVec& t, double threshold, int n_select) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t[i] >= threshold) idx.push_back(static_cast<int>(i));
  }
  return SelectionVector::binary(static_cast<int>(t.size()), idx, n_select);
}

}  // namespace

TljbasResult tljbas_run(const CMat& h, const ConstraintBundle& bundle, ArrayKind kind,
                        int n_select, double power, double noise_power, PenaltyState penalties,
                        const TljbasLimits& limits, bool record_trace) {
  penalties.validate();
  const int n = static_cast<int>(h.rows());
  if (n != bundle.n_total()) throw std::invalid_argument("channel rows must match the grid");
  if (n_select < h.cols()) throw std::invalid_argument("need at least as many antennas as users");
  if (n_select > n) throw std::invalid_argument("cannot select more antennas than candidates");
  if (kind == ArrayKind::PC && bundle.m_t != n_select) {
    throw std::invalid_argument("PC arrays select exactly one antenna per REMA");
  }

  TljbasResult result;
  if (n_select == n) {
    auto all = SelectionVector::all_ones(n, n_select);
    if (!is_feasible(all, bundle, kind)) {
      throw std::runtime_error("selecting every candidate violates the spacing rule");
    }
    result.selection = std::move(all);
    result.relaxed = RVec::Ones(n);
    result.rounded_cleanly = true;
    return result;
  }

  RVec t = RVec::Ones(n);
  CMat f = h;
  CVec u;
  RVec v;
  bool have_v = false;

  for (int outer = 0; outer < limits.outer_cap; ++outer) {
    penalties.grow();
    have_v = false;  // weights from the previous penalty level do not bound this one
    double last = std::numeric_limits<double>::infinity();

    for (int inner = 0; inner < limits.inner_cap; ++inner) {
      if (f.squaredNorm() == 0.0) f = t.asDiagonal() * h;
      if (f.squaredNorm() == 0.0) f = h;
      TljbasTraceRow row;
      row.outer = outer;
      row.inner = inner;
      row.rho1 = penalties.rho1;
      row.rho2 = penalties.rho2;
      row.rho3 = penalties.rho3;

      u = update_u(h, t, f, noise_power, power);
      row.after_u = have_v ? penalty_objective(h, t, f, u, v, noise_power, power, penalties,
                                               bundle, kind, n_select)
                           : std::numeric_limits<double>::quiet_NaN();
      v = update_v(mse_terms(h, t, f, u, noise_power, power));
      have_v = true;
      row.after_v =
          penalty_objective(h, t, f, u, v, noise_power, power, penalties, bundle, kind, n_select);
      f = update_f(h, t, u, v, noise_power, power);
      row.after_f =
          penalty_objective(h, t, f, u, v, noise_power, power, penalties, bundle, kind, n_select);

      const QpSubproblem qp =
          assemble_qp(h, f, u, v, noise_power, power, penalties, bundle, kind, n_select);
      const double before_t = qp.value(t);
      QpResult qr = solve_t_subproblem(qp, t, limits.qp);
      row.qp_monotone = qr.objective <= before_t + 1e-9 * std::max(1.0, std::abs(before_t));
      t = std::move(qr.t);
      row.after_t = qr.objective;
      row.thresholded_count = static_cast<int>((t.array() >= penalties.threshold).count());
      if (record_trace) result.trace.push_back(row);

      const double change = std::abs(last - row.after_t);
      last = row.after_t;
      if (change <= limits.inner_tol * std::max(1.0, std::abs(row.after_t))) break;
    }

    result.outer_iterations = outer + 1;
    auto rounded = threshold_round(t, penalties.threshold, n_select);
    if (is_feasible(rounded, bundle, kind)) {
      result.selection = std::move(rounded);
      result.rounded_cleanly = true;
      break;
    }
  }

  result.relaxed = t;
  result.max_binary_gap = (t.array() * (1.0 - t.array())).maxCoeff();
  if (!result.rounded_cleanly) {
    result.selection = repair_selection(t, bundle, kind, n_select);
    result.fallback_used = true;
  }
  return result;
}

}  // namespace remaa
