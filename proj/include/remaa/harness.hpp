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
#include <string>
#include <vector>

#include "remaa/geometry.hpp"

namespace remaa {

enum class SweepVariable { Interval, Snr, Paths, Users };
enum class System { FC, PC, MMA, FPA };

const char* to_string(SweepVariable v);
const char* to_string(System s);
SweepVariable parse_sweep(const std::string& s);
System parse_system(const std::string& s);

// Lengths are in wavelengths. The candidate grid is rema_rows x rema_cols
// REMAs, each rema_size wide and holding round(rema_size / interval)
// candidates per side (one row when `linear`).
struct ExperimentConfig {
  SweepVariable sweep = SweepVariable::Snr;
  std::vector<double> values{10.0};
  int n_select = 4;
  int users = 4;
  int paths = 6;
  double snr_db = 10.0;
  double power = 1.0;
  int rema_rows = 2;
  int rema_cols = 2;
  double rema_size = 1.0;
  double interval = 0.25;
  bool linear = false;
  int trials = 100;
  std::uint64_t seed = 1;
  std::vector<System> systems{System::FC, System::PC, System::MMA, System::FPA};
  std::string output_path;
  std::string trace_path;
  std::string plot_path;
  int threads = 0;          // 0: hardware concurrency
  int mma_random_starts = 2;
  bool record_timing = true;

  // Throws std::invalid_argument with a readable message.
  void validate() const;
};

// One "key = value" assignment; '#' starts a comment. Unknown keys throw.
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);
ExperimentConfig parse_config(std::istream& in);

// Parameters of one sweep point.
struct TrialSetup {
  ArrayConfig fc;
  ArrayConfig pc;
  ArrayConfig fpa;
  int n_select = 0;
  int users = 0;
  int paths = 0;
  double power = 1.0;
  double noise_power = 1.0;
};

TrialSetup setup_for(const ExperimentConfig& config, double sweep_value);

// Path seed of one trial; depends only on the base seed and trial index so
// that every sweep point and system sees paired draws.
std::uint64_t trial_seed(std::uint64_t base, int trial);

struct SystemOutcome {
  System system = System::FPA;
  bool ok = false;
  double sum_rate = 0.0;
  double wall_ms = 0.0;
  std::string error;
};

struct TrialRecord {
  int trial = 0;
  double sweep_value = 0.0;
  std::uint64_t channel_hash = 0;
  std::vector<SystemOutcome> outcomes;  // config.systems order
};

// Runs every enabled system on one path realization.
TrialRecord run_trial(const ExperimentConfig& config, const TrialSetup& setup,
                      const PathList& paths, int mma_random_starts, std::uint64_t mma_seed);

struct ResultRow {
  System system = System::FPA;
  double sweep_value = 0.0;
  double mean_rate = 0.0;
  double stderr_rate = 0.0;
  int trials = 0;
  int failures = 0;
  double wall_ms = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<TrialRecord> records;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Mean and standard error of the successful outcomes.
ResultRow aggregate(System system, double sweep_value, const std::vector<double>& rates,
                    int trials, int failures, double wall_ms);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
// Throws std::invalid_argument on empty rows, std::runtime_error if the file
// cannot be written.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> parse_csv(std::istream& in);

// "trial,sweep_value,system,channel_hash,ok,sum_rate"
void write_trace(std::ostream& out, const std::vector<TrialRecord>& records);

// gnuplot script drawing mean sum-rate with error bars per system.
void write_plot_script(std::ostream& out, const std::string& csv_path,
                       const std::vector<System>& systems, SweepVariable sweep);

}  // namespace remaa
