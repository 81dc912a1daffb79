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

#include "remaa/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "remaa/types.hpp"

namespace remaa {

void QuantizationSpec::validate() const {
  if (num_angle_bins < 2) throw std::invalid_argument("F must be at least 2");
  if (!(kappa > 0)) throw std::invalid_argument("kappa must be positive");
  if (!(position_interval > 0)) throw std::invalid_argument("interval must be positive");
}

double dirichlet_kernel(int f, double omega) {
  if (f < 1) throw std::invalid_argument("F must be at least 1");
  const double den = std::sin(0.5 * omega);
  if (std::abs(den) < 1e-12) return static_cast<double>(f);
  return std::min(static_cast<double>(f), std::abs(std::sin(0.5 * f * omega) / den));
}

Bandwidth kappa_db_bandwidth(int f, double kappa) {
  if (f < 2) throw std::invalid_argument("F must be at least 2");
  if (!(kappa > 0)) throw std::invalid_argument("kappa must be positive");
  const double null = 2.0 * kPi / f;
  const double target = f * std::pow(10.0, -kappa / 20.0);
  Bandwidth bw;
  if (!(target > 0) || dirichlet_kernel(f, null) >= target) {
    bw.gamma = 2.0 * null / kPi;
    bw.at_null = true;
    return bw;
  }
  // G_F decreases on (0, first null).
  double lo = 0.0, hi = null;
  while (hi - lo > 1e-10 * null) {
    const double mid = 0.5 * (lo + hi);
    (dirichlet_kernel(f, mid) > target ? lo : hi) = mid;
  }
  bw.gamma = 2.0 * 0.5 * (lo + hi) / kPi;
  return bw;
}

LossBound max_power_loss_bound(double position_interval, double wavelength, int f) {
  if (!(position_interval > 0)) throw std::invalid_argument("interval must be positive");
  if (!(wavelength > 0)) throw std::invalid_argument("wavelength must be positive");
  auto width = [&](double kappa) { return kappa_db_bandwidth(f, kappa).gamma * f * wavelength / 4.0; };
  LossBound out;
  const double null_width = 2.0 * 2.0 / f * f * wavelength / 4.0;
  if (position_interval >= null_width * (1.0 - 1e-12)) {
    out.loss = 1.0;
    out.kappa = INFINITY;
    out.at_null = true;
    return out;
  }
  double lo = 0.0, hi = 1.0;
  while (width(hi) < position_interval) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0) break;
    (width(mid) < position_interval ? lo : hi) = mid;
  }
  out.kappa = 0.5 * (lo + hi);
  out.loss = 1.0 - std::pow(10.0, -out.kappa / 10.0);
  return out;
}

double max_power_loss(double position_interval, double wavelength) {
  return max_power_loss_bound(position_interval, wavelength).loss;
}

namespace {

struct Field {
  std::vector<std::complex<double>> gains;
  std::vector<double> k;  // 2 pi Theta / lambda

  double power(double x) const {
    std::complex<double> y = 0.0;
    for (std::size_t l = 0; l < gains.size(); ++l) y += gains[l] * std::polar(1.0, k[l] * x);
    return std::norm(y);
  }
};

struct TrialOutcome {
  double loss = 0.0;
  bool monotone = true;
};

TrialOutcome run_trial(const MonteCarloSpec& spec, std::uint64_t trial) {
  std::mt19937_64 rng(spec.seed ^ (0x9e3779b97f4a7c15ULL * (trial + 1)));
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> theta(-1.0, 1.0);
  Field field;
  for (int l = 0; l < spec.paths; ++l) {
    field.gains.emplace_back(g(rng), g(rng));
    field.k.push_back(2.0 * kPi * theta(rng) / spec.wavelength);
  }

  const double lo = -spec.region_half_width * spec.wavelength;
  const double hi = spec.region_half_width * spec.wavelength;
  const double d = spec.position_interval;
  const int n = static_cast<int>(std::lround((hi - lo) / d));
  double x_grid = lo, p_grid = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * d;
    if (x > hi + 1e-12) break;
    const double p = field.power(x);
    if (p > p_grid) {
      p_grid = p;
      x_grid = x;
    }
  }

  // Coarse scan of the bracket, then golden section around the best sample.
  const double a = std::max(lo, x_grid - d), b = std::min(hi, x_grid + d);
  const int samples = 32;
  const double step = (b - a) / samples;
  double x_best = x_grid, p_best = p_grid;
  for (int i = 0; i <= samples; ++i) {
    const double x = a + i * step;
    const double p = field.power(x);
    if (p > p_best) {
      p_best = p;
      x_best = x;
    }
  }
  double l = std::max(a, x_best - step), r = std::min(b, x_best + step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = r - phi * (r - l), x2 = l + phi * (r - l);
  double f1 = field.power(x1), f2 = field.power(x2);
  while (r - l > 1e-6 * spec.wavelength) {
    if (f1 < f2) {
      l = x1;
      x1 = x2;
      f1 = f2;
      x2 = l + phi * (r - l);
      f2 = field.power(x2);
    } else {
      r = x2;
      x2 = x1;
      f2 = f1;
      x1 = r - phi * (r - l);
      f1 = field.power(x1);
    }
  }
  const double p_cont = std::max({p_best, f1, f2});
  TrialOutcome out;
  out.monotone = p_cont >= p_grid;
  out.loss = p_cont > 0 ? std::clamp(1.0 - p_grid / p_cont, 0.0, 1.0) : 0.0;
  return out;
}

}  // namespace

PowerLossReport monte_carlo_validation(const MonteCarloSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("need at least one trial");
  if (!(spec.position_interval > 0)) throw std::invalid_argument("interval must be positive");
  if (spec.paths < 1) throw std::invalid_argument("need at least one path");

  PowerLossReport rep;
  rep.position_interval = spec.position_interval;
  rep.max_loss_fraction = max_power_loss(spec.position_interval, spec.wavelength);
  rep.empirical_losses.assign(spec.trials, 0.0);
  std::vector<char> monotone(spec.trials, 1);

  unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(spec.trials));
  auto work = [&](unsigned w) {
    for (int t = static_cast<int>(w); t < spec.trials; t += static_cast<int>(workers)) {
      const TrialOutcome o = run_trial(spec, static_cast<std::uint64_t>(t));
      rep.empirical_losses[t] = o.loss;
      monotone[t] = o.monotone;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  int ok = 0;
  double sum = 0.0;
  for (int t = 0; t < spec.trials; ++t) {
    const double loss = rep.empirical_losses[t];
    rep.empirical_max = std::max(rep.empirical_max, loss);
    sum += loss;
    if (loss <= rep.max_loss_fraction) ++ok;
    if (!monotone[t]) rep.refinement_monotone = false;
  }
  rep.empirical_mean = sum / spec.trials;
  rep.bound_satisfaction_rate = static_cast<double>(ok) / spec.trials;
  return rep;
}

void write_report_row(std::ostream& out, const PowerLossReport& report, double wavelength) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g\n", report.position_interval / wavelength,
                report.max_loss_fraction, report.bound_satisfaction_rate);
  out << buf;
}

}  // namespace remaa
