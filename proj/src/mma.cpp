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

#include "remaa/mma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

namespace remaa {

bool MmaRegion::contains(const Position& p, double tol) const {
  return p.x() >= x_lo - tol && p.x() <= x_hi + tol && p.z() >= z_lo - tol &&
         p.z() <= z_hi + tol && std::abs(p.y()) <= tol;
}

MmaRegion MmaRegion::footprint(const Layout& grid) {
  if (grid.empty()) throw std::invalid_argument("empty grid");
  MmaRegion r{grid[0].x(), grid[0].x(), grid[0].z(), grid[0].z()};
  for (const auto& p : grid) {
    r.x_lo = std::min(r.x_lo, p.x());
    r.x_hi = std::max(r.x_hi, p.x());
    r.z_lo = std::min(r.z_lo, p.z());
    r.z_hi = std::max(r.z_hi, p.z());
  }
  return r;
}

double MmaLayout::min_pair_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < positions.size(); ++m) {
    for (std::size_t n = m + 1; n < positions.size(); ++n) {
      best = std::min(best, (positions[m] - positions[n]).norm());
    }
  }
  return best;
}

bool MmaLayout::valid(double tol) const {
  for (const auto& p : positions) {
    if (!region.contains(p, tol)) return false;
  }
  return min_pair_distance() >= min_spacing - tol;
}

bool MmaLayout::strictly_feasible() const {
  for (const auto& p : positions) {
    if (region.x_free() && !(p.x() > region.x_lo && p.x() < region.x_hi)) return false;
    if (region.z_free() && !(p.z() > region.z_lo && p.z() < region.z_hi)) return false;
    if (!region.contains(p, 1e-12)) return false;
  }
  return min_pair_distance() > min_spacing;
}

CMat mma_channel(const Layout& positions, const PathList& paths, double wavelength) {
  return channel_matrix(positions, paths, wavelength);
}

double mma_sum_rate(const Layout& positions, const PathList& paths, const CMat& w,
                    double noise_power, double wavelength) {
  return sum_rate(mma_channel(positions, paths, wavelength), w, noise_power);
}

std::vector<Eigen::Vector3d> position_gradient(const Layout& positions, const PathList& paths,
                                               const CMat& w, double noise_power,
                                               double wavelength) {
  const auto n_ant = static_cast<Eigen::Index>(positions.size());
  const auto users = static_cast<Eigen::Index>(paths.size());
  if (w.rows() != n_ant || w.cols() != users) {
    throw std::invalid_argument("beamformer shape must be N_s x K");
  }
  const double scale = std::sqrt(1.0 / static_cast<double>(n_ant));
  const double two_pi = 2.0 * kPi / wavelength;

  // g(n, k) and d g(n, k) / d p_n (x, y, z)
  CMat g = CMat::Zero(n_ant, users);
  std::vector<CMat> dg(3, CMat::Zero(n_ant, users));
  for (Eigen::Index k = 0; k < users; ++k) {
    for (const auto& path : paths[k]) {
      const Eigen::Vector3d kv = wave_vector(path.azimuth, path.elevation) * two_pi;
      for (Eigen::Index n = 0; n < n_ant; ++n) {
        const cdouble term = path.gain * std::polar(scale, kv.dot(positions[n]));
        g(n, k) += term;
        for (int c = 0; c < 3; ++c) dg[c](n, k) += term * cdouble(0.0, kv[c]);
      }
    }
  }

  const CMat a = g.adjoint() * w;  // a(k, i) = g_k^H w_i
  std::vector<Eigen::Vector3d> grad(positions.size(), Eigen::Vector3d::Zero());
  const double inv_ln2 = 1.0 / std::log(2.0);
  for (Eigen::Index k = 0; k < users; ++k) {
    const double total = a.row(k).squaredNorm() + noise_power;
    const double interference = total - std::norm(a(k, k));
    for (Eigen::Index n = 0; n < n_ant; ++n) {
      for (int c = 0; c < 3; ++c) {
        double d_total = 0.0, d_interf = 0.0;
        for (Eigen::Index i = 0; i < users; ++i) {
          const cdouble da = std::conj(dg[c](n, k)) * w(n, i);
          const double d_abs2 = 2.0 * std::real(std::conj(a(k, i)) * da);
          d_total += d_abs2;
          if (i != k) d_interf += d_abs2;
        }
        grad[n][c] += inv_ln2 * (d_total / total - d_interf / interference);
      }
    }
  }
  return grad;
}

namespace {

struct BarrierEval {
  double value = std::numeric_limits<double>::infinity();
  double rate = 0.0;
  std::vector<Eigen::Vector3d> grad;
};

// Value and gradient of the barrier objective; value is +inf outside the
// strict interior.
BarrierEval evaluate_barrier(const MmaLayout& layout, const PathList& paths, const CMat& w,
                             double noise_power, double wavelength, double mu, double rho,
                             bool with_gradient) {
  BarrierEval ev;
  const auto& pos = layout.positions;
  const auto& reg = layout.region;
  double barrier = 0.0;
  for (const auto& p : pos) {
    if (reg.x_free()) {
      const double a = p.x() - reg.x_lo, b = reg.x_hi - p.x();
      if (!(a > 0 && b > 0)) return ev;
      barrier -= mu * (std::log(a) + std::log(b));
    }
    if (reg.z_free()) {
      const double a = p.z() - reg.z_lo, b = reg.z_hi - p.z();
      if (!(a > 0 && b > 0)) return ev;
      barrier -= mu * (std::log(a) + std::log(b));
    }
  }
  for (std::size_t m = 0; m < pos.size(); ++m) {
    for (std::size_t n = m + 1; n < pos.size(); ++n) {
      const double s = (pos[m] - pos[n]).norm() - layout.min_spacing;
      if (!(s > 0)) return ev;
      barrier -= rho * std::log(s);
    }
  }
  ev.rate = mma_sum_rate(pos, paths, w, noise_power, wavelength);
  ev.value = -ev.rate + barrier;
  if (!with_gradient) return ev;

  ev.grad = position_gradient(pos, paths, w, noise_power, wavelength);
  for (auto& g : ev.grad) g = -g;
  for (std::size_t n = 0; n < pos.size(); ++n) {
    const auto& p = pos[n];
    if (reg.x_free()) ev.grad[n].x() += -mu / (p.x() - reg.x_lo) + mu / (reg.x_hi - p.x());
    if (reg.z_free()) ev.grad[n].z() += -mu / (p.z() - reg.z_lo) + mu / (reg.z_hi - p.z());
  }
  for (std::size_t m = 0; m < pos.size(); ++m) {
    for (std::size_t n = m + 1; n < pos.size(); ++n) {
      const Eigen::Vector3d d = pos[m] - pos[n];
      const double dist = d.norm();
      const double s = dist - layout.min_spacing;
      const Eigen::Vector3d dir = d / dist;
      ev.grad[m] -= rho / s * dir;
      ev.grad[n] += rho / s * dir;
    }
  }
  // y is pinned to the array plane; pinned axes do not move either.
  for (auto& g : ev.grad) {
    g.y() = 0.0;
    if (!reg.x_free()) g.x() = 0.0;
    if (!reg.z_free()) g.z() = 0.0;
  }
  return ev;
}

double grad_inf_norm(const std::vector<Eigen::Vector3d>& g) {
  double m = 0.0;
  for (const auto& v : g) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

PositionResult optimize_positions(const MmaLayout& layout, const PathList& paths, const CMat& w,
                                  double noise_power, double wavelength,
                                  const BarrierState& barrier, const PositionLimits& limits) {
  if (!layout.strictly_feasible()) {
    throw InitializationFailure("position optimization needs a strictly feasible start");
  }
  PositionResult res;
  res.layout = layout;
  res.rate_in = mma_sum_rate(layout.positions, paths, w, noise_power, wavelength);
  res.rate_out = res.rate_in;

  MmaLayout current = layout;
  double mu = barrier.mu, rho = barrier.rho;
  const double max_move = limits.max_step * wavelength;

  for (int stage = 0; stage < barrier.stages; ++stage) {
    BarrierEval ev = evaluate_barrier(current, paths, w, noise_power, wavelength, mu, rho, true);
    double alpha = max_move / std::max(grad_inf_norm(ev.grad), 1e-12);
    for (int it = 0; it < limits.max_iters_per_stage; ++it) {
      const double gnorm = grad_inf_norm(ev.grad);
      res.kkt_residual = gnorm;
      if (gnorm <= limits.grad_tol) break;
      alpha = std::min(2.0 * alpha, max_move / gnorm);

      double gg = 0.0;
      for (const auto& g : ev.grad) gg += g.squaredNorm();
      bool accepted = false;
      while (alpha * gnorm > 1e-12 * wavelength) {
        MmaLayout trial = current;
        for (std::size_t n = 0; n < trial.positions.size(); ++n) {
          trial.positions[n] -= alpha * ev.grad[n];
        }
        BarrierEval tv =
            evaluate_barrier(trial, paths, w, noise_power, wavelength, mu, rho, false);
        if (tv.value <= ev.value - 1e-4 * alpha * gg) {
          current = std::move(trial);
          ev = evaluate_barrier(current, paths, w, noise_power, wavelength, mu, rho, true);
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      ++res.iterations;
      if (!accepted) break;
      if (ev.rate > res.rate_out) {
        res.rate_out = ev.rate;
        res.layout = current;
      }
    }
    mu *= barrier.decrease;
    rho *= barrier.decrease;
  }
  return res;
}

MmaLayout initial_layout(const MmaRegion& region, int n, double wavelength) {
  if (n < 1) throw std::invalid_argument("need at least one antenna");
  MmaLayout layout;
  layout.region = region;
  layout.min_spacing = wavelength / 2.0;
  const double pitch = layout.min_spacing * 1.001;

  int rows = 1, cols = n;
  if (region.z_free() && region.x_free()) {
    rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
    while (rows > 1 && n % rows != 0) --rows;
    cols = (n + rows - 1) / rows;
    if ((region.z_hi - region.z_lo) > (region.x_hi - region.x_lo)) std::swap(rows, cols);
  } else if (region.z_free()) {
    rows = n;
    cols = 1;
  }
  const double width = (cols - 1) * pitch;
  const double height = (rows - 1) * pitch;
  const double xw = region.x_hi - region.x_lo;
  const double zw = region.z_hi - region.z_lo;
  if ((cols > 1 && !(width < xw)) || (rows > 1 && !(height < zw))) {
    throw InitializationFailure("transmit region is too small for the requested antennas");
  }
  const double x0 = region.x_lo + 0.5 * (xw - width);
  const double z0 = region.z_lo + 0.5 * (zw - height);
  for (int i = 0; i < n; ++i) {
    const int r = i / cols, c = i % cols;
    layout.positions.emplace_back(x0 + c * pitch, 0.0, z0 + r * pitch);
  }
  if (!layout.strictly_feasible()) {
    throw InitializationFailure("could not place a strictly feasible starting grid");
  }
  return layout;
}

namespace {

std::optional<MmaLayout> random_layout(const MmaRegion& region, int n, double wavelength,
                                       std::mt19937_64& rng) {
  MmaLayout layout;
  layout.region = region;
  layout.min_spacing = wavelength / 2.0;
  const double margin = 1e-3 * wavelength;
  auto axis = [&](double lo, double hi) {
    if (hi - lo <= 2 * margin) return 0.5 * (lo + hi);
    std::uniform_real_distribution<double> u(lo + margin, hi - margin);
    return u(rng);
  };
  for (int attempt = 0; attempt < 200; ++attempt) {
    layout.positions.clear();
    for (int i = 0; i < n; ++i) {
      bool placed = false;
      for (int tries = 0; tries < 200 && !placed; ++tries) {
        const Position p(axis(region.x_lo, region.x_hi), 0.0, axis(region.z_lo, region.z_hi));
        placed = true;
        for (const auto& q : layout.positions) {
          if ((p - q).norm() <= layout.min_spacing * 1.001) {
            placed = false;
            break;
          }
        }
        if (placed) layout.positions.push_back(p);
      }
      if (!placed) break;
    }
    if (static_cast<int>(layout.positions.size()) == n && layout.strictly_feasible()) {
      return layout;
    }
  }
  return std::nullopt;
}

AbapoResult run_from(const MmaLayout& start, const PathList& paths, double power,
                     double noise_power, double wavelength, const AbapoLimits& limits) {
  AbapoResult out;
  out.layout = start;
  CMat g = mma_channel(start.positions, paths, wavelength);
  WmmseResult wr = wmmse_solve(g, power, noise_power, limits.wmmse);
  out.beamformer = wr.beamformer.columns;
  out.sum_rate = wr.sum_rate;
  out.rate_trace.push_back(out.sum_rate);

  for (int it = 0; it < limits.outer_iters; ++it) {
    const double before = out.sum_rate;
    PositionResult pr = optimize_positions(out.layout, paths, out.beamformer, noise_power,
                                           wavelength, limits.barrier, limits.positions);
    out.layout = std::move(pr.layout);
    g = mma_channel(out.layout.positions, paths, wavelength);

    WmmseOptions opts = limits.wmmse;
    opts.warm_start = out.beamformer;
    wr = wmmse_solve(g, power, noise_power, opts);
    // The warm-started solve cannot end below its start, which carries pr.rate_out.
    if (wr.sum_rate >= pr.rate_out) {
      out.beamformer = wr.beamformer.columns;
      out.sum_rate = wr.sum_rate;
    } else {
      out.sum_rate = pr.rate_out;
    }
    out.rate_trace.push_back(out.sum_rate);
    if (out.sum_rate - before <= limits.tol * std::max(1.0, std::abs(before))) break;
  }
  return out;
}

}  // namespace

AbapoResult abapo_run(const MmaRegion& region, const PathList& paths, int n_antennas,
                      double power, double noise_power, double wavelength,
                      const AbapoLimits& limits, const std::optional<Layout>& start) {
  if (n_antennas < static_cast<int>(paths.size())) {
    throw std::invalid_argument("need at least as many antennas as users");
  }
  std::vector<MmaLayout> starts;
  if (start) {
    MmaLayout l;
    l.positions = *start;
    l.region = region;
    l.min_spacing = wavelength / 2.0;
    if (!l.strictly_feasible()) throw InitializationFailure("given start is not strictly feasible");
    starts.push_back(std::move(l));
  } else {
    starts.push_back(initial_layout(region, n_antennas, wavelength));
  }
  std::mt19937_64 rng(limits.seed);
  for (int i = 0; i < limits.random_starts; ++i) {
    if (auto l = random_layout(region, n_antennas, wavelength, rng)) starts.push_back(std::move(*l));
  }

  AbapoResult best;
  best.sum_rate = -1.0;
  for (const auto& s : starts) {
    AbapoResult r = run_from(s, paths, power, noise_power, wavelength, limits);
    if (r.sum_rate > best.sum_rate) best = std::move(r);
  }
  return best;
}

void write_layout(std::ostream& out, const MmaLayout& layout, double wavelength) {
  for (std::size_t i = 0; i < layout.positions.size(); ++i) {
    const auto& p = layout.positions[i];
    out << i << ' ' << p.x() / wavelength << ' ' << p.y() / wavelength << ' '
        << p.z() / wavelength << '\n';
  }
}

}  // namespace remaa
