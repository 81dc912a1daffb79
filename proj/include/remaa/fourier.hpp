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

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace remaa {

struct QuantizationSpec {
  int num_angle_bins = 512;  // F
  double kappa = 3.0;        // dB
  double position_interval = 0.5;

  void validate() const;
};

// |sin(F w / 2) / sin(w / 2)|, equal to F at multiples of 2 pi.
double dirichlet_kernel(int f, double omega);

struct Bandwidth {
  double gamma = 0.0;       // two-sided width in units of omega / pi
  bool at_null = false;     // kappa reached the first null
};

// Width of the main lobe where G_F has dropped kappa dB below F.
Bandwidth kappa_db_bandwidth(int f, double kappa);

struct LossBound {
  double loss = 0.0;  // fraction of received power
  double kappa = 0.0;
  bool at_null = false;  // interval reaches the first null; loss is 1
};

// Worst-case power loss of a grid with the given interval: the kappa for
// which Gamma_F(kappa) F lambda / 4 equals the interval, mapped to
// 1 - 10^(-kappa / 10).
LossBound max_power_loss_bound(double position_interval, double wavelength = 1.0,
                               int f = 512);
double max_power_loss(double position_interval, double wavelength = 1.0);

struct MonteCarloSpec {
  double position_interval = 0.1;
  int trials = 10000;
  int paths = 20;
  double region_half_width = 5.0;  // positions in [-w, w]
  double wavelength = 1.0;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
};

struct PowerLossReport {
  double position_interval = 0.0;
  double max_loss_fraction = 0.0;  // analytical bound
  std::vector<double> empirical_losses;
  double empirical_max = 0.0;
  double empirical_mean = 0.0;
  double bound_satisfaction_rate = 0.0;
  // Refined power never fell below the best grid power.
  bool refinement_monotone = true;
};

// Random 1-D multipath field y(x) = sum_l g_l exp(j 2 pi Theta_l x / lambda),
// best grid sample versus locally refined continuous optimum.
PowerLossReport monte_carlo_validation(const MonteCarloSpec& spec);

// "interval,max_loss,satisfaction_rate" row in wavelengths and fractions.
void write_report_row(std::ostream& out, const PowerLossReport& report, double wavelength);

}  // namespace remaa
