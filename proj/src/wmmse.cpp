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

#include "remaa/wmmse.hpp"

#include <cmath>
#include <limits>

namespace remaa {

namespace {

void check_dims(const CMat& h, const RVec& t, const CMat& f) {
  if (t.size() != h.rows() || f.rows() != h.rows() || f.cols() != h.cols()) {
    throw std::invalid_argument("channel, selection and beamformer dimensions disagree");
  }
}

// a(k, i) = h_k^H diag(t) f_i
CMat cross_gains(const CMat& h, const RVec& t, const CMat& f) {
  return h.adjoint() * (t.asDiagonal() * f);
}

double rate_from_gains(const CMat& a, double noise) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    const double signal = std::norm(a(k, k));
    const double interference = a.row(k).squaredNorm() - signal;
    total += std::log2(1.0 + signal / (noise + interference));
  }
  return total;
}

}  // namespace

double sum_rate(const CMat& h, const RVec& t, const CMat& f, double noise_power) {
  check_dims(h, t, f);
  return rate_from_gains(cross_gains(h, t, f), noise_power);
}

double sum_rate(const CMat& h, const CMat& f, double noise_power) {
  return sum_rate(h, RVec::Ones(h.rows()), f, noise_power);
}

double scaled_sum_rate(const CMat& h, const RVec& t, const CMat& f, double noise_power,
                       double power) {
  check_dims(h, t, f);
  const double fp = f.squaredNorm();
  if (fp == 0.0) return 0.0;
  return rate_from_gains(cross_gains(h, t, f), noise_power * fp / power);
}

CVec update_u(const CMat& h, const RVec& t, const CMat& f, double noise_power, double power) {
  check_dims(h, t, f);
  const CMat a = cross_gains(h, t, f);
  const double noise = noise_power * f.squaredNorm() / power;
  CVec u(h.cols());
  for (Eigen::Index k = 0; k < h.cols(); ++k) {
    const double denom = a.row(k).squaredNorm() + noise;
    if (!(denom > 0.0)) throw DegenerateInput("receive-factor denominator is zero");
    u[k] = std::conj(a(k, k)) / denom;
  }
  return u;
}

RVec mse_terms(const CMat& h, const RVec& t, const CMat& f, const CVec& u, double noise_power,
               double power) {
  check_dims(h, t, f);
  const CMat a = cross_gains(h, t, f);
  const double noise = noise_power * f.squaredNorm() / power;
  RVec e(h.cols());
  for (Eigen::Index k = 0; k < h.cols(); ++k) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < h.cols(); ++i) {
      const cdouble x = u[k] * a(k, i);
      acc += i == k ? std::norm(x - 1.0) : std::norm(x);
    }
    e[k] = acc + std::norm(u[k]) * noise;
  }
  return e;
}

RVec update_v(const RVec& mse) {
  RVec v(mse.size());
  for (Eigen::Index k = 0; k < mse.size(); ++k) {
    if (!(mse[k] > 0.0)) throw DegenerateInput("MSE must be positive to form a weight");
    v[k] = 1.0 / mse[k];
  }
  return v;
}

CMat weighted_mse_matrix(const CMat& h, const RVec& t, const CVec& u, const RVec& v,
                         double noise_power, double power) {
  const CMat th = t.asDiagonal() * h;
  RVec w(h.cols());
  for (Eigen::Index k = 0; k < h.cols(); ++k) w[k] = v[k] * std::norm(u[k]);
  CMat psi = th * w.asDiagonal() * th.adjoint();
  psi.diagonal().array() += w.sum() * noise_power / power;
  return psi;
}

CMat update_f(const CMat& h, const RVec& t, const CVec& u, const RVec& v, double noise_power,
              double power) {
  const CMat psi = weighted_mse_matrix(h, t, u, v, noise_power, power);
  const CMat th = t.asDiagonal() * h;
  CMat eta(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < h.cols(); ++k) eta.col(k) = v[k] * std::conj(u[k]) * th.col(k);

  Eigen::LDLT<CMat> ldlt(psi);
  CMat f;
  if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
      ldlt.vectorD().real().minCoeff() > 0.0) {
    f = ldlt.solve(eta);
  } else {
    f = psi.completeOrthogonalDecomposition().solve(eta);
  }
  const double scale = std::max(eta.norm(), std::numeric_limits<double>::min());
  if (!f.allFinite() || (psi * f - eta).norm() > 1e-8 * scale) {
    if (eta.norm() > 0.0) throw NumericalFailure("beamformer system is singular and inconsistent");
  }
  return f;
}

double wmmse_objective(const RVec& mse, const RVec& weights) {
  return (weights.array() * mse.array() - weights.array().log()).sum();
}

WmmseResult wmmse_solve(const CMat& h, double power, double noise_power,
                        const WmmseOptions& options) {
  if (!(power > 0.0) || !(noise_power > 0.0)) {
    throw std::invalid_argument("power and noise must be positive");
  }
  const RVec ones = RVec::Ones(h.rows());
  WmmseResult result;
  result.beamformer.power_budget = power;
  result.beamformer.noise_power = noise_power;

  CMat f = options.warm_start ? *options.warm_start : h;
  if (f.rows() != h.rows() || f.cols() != h.cols()) {
    throw std::invalid_argument("warm start has the wrong shape");
  }
  if (f.squaredNorm() == 0.0) f = h;
  if (f.squaredNorm() == 0.0) {
    result.beamformer.columns = CMat::Zero(h.rows(), h.cols());
    result.converged = true;
    result.rate_trace.push_back(0.0);
    return result;
  }
  f *= std::sqrt(power / f.squaredNorm());

  double rate = scaled_sum_rate(h, ones, f, noise_power, power);
  result.rate_trace.push_back(rate);
  CMat best = f;
  double best_rate = rate;

  for (int it = 0; it < options.max_iters; ++it) {
    const CVec u = update_u(h, ones, f, noise_power, power);
    const RVec e = mse_terms(h, ones, f, u, noise_power, power);
    const RVec v = update_v(e);
    CMat next = update_f(h, ones, u, v, noise_power, power);
    const double np = next.squaredNorm();
    if (!(np > 0.0)) break;
    next *= std::sqrt(power / np);
    const double next_rate = scaled_sum_rate(h, ones, next, noise_power, power);
    result.rate_trace.push_back(next_rate);
    result.iterations = it + 1;
    f = std::move(next);
    if (next_rate > best_rate) {
      best_rate = next_rate;
      best = f;
    }
    const double change = std::abs(next_rate - rate) / std::max(std::abs(rate), 1e-12);
    rate = next_rate;
    if (change < options.tol) {
      result.converged = true;
      break;
    }
  }
  result.beamformer.columns = std::move(best);
  result.sum_rate = best_rate;
  return result;
}

WmmseResult wmmse_solve(const CMat& h, const SelectionVector& t, double power,
                        double noise_power, const WmmseOptions& options) {
  if (t.size() != h.rows()) throw std::invalid_argument("selection size mismatch");
  if (!t.is_binary()) throw std::invalid_argument("wmmse_solve needs a binary selection");
  const auto sel = t.selected();

  CMat hs(static_cast<Eigen::Index>(sel.size()), h.cols());
  for (std::size_t i = 0; i < sel.size(); ++i) hs.row(i) = h.row(sel[i]);

  WmmseOptions reduced = options;
  if (options.warm_start) {
    CMat ws(hs.rows(), h.cols());
    for (std::size_t i = 0; i < sel.size(); ++i) ws.row(i) = options.warm_start->row(sel[i]);
    reduced.warm_start = std::move(ws);
  }
  WmmseResult r = wmmse_solve(hs, power, noise_power, reduced);

  CMat full = CMat::Zero(h.rows(), h.cols());
  for (std::size_t i = 0; i < sel.size(); ++i) full.row(sel[i]) = r.beamformer.columns.row(i);
  r.beamformer.columns = std::move(full);
  return r;
}

}  // namespace remaa
