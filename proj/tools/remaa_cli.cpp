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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "remaa/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sum-rate sweeps for REMA arrays, movable antennas and fixed arrays"};
  std::string config_path, sweep, values, systems, out, trace, plot;
  int trials = 0, threads = -1;
  long long seed = -1;
  bool no_timing = false;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--sweep", sweep, "interval | snr | paths | users");
  app.add_option("--values", values, "comma-separated sweep values");
  app.add_option("--trials", trials, "Monte Carlo trials per sweep value");
  app.add_option("--seed", seed, "base RNG seed");
  app.add_option("--systems", systems, "comma-separated subset of FC,PC,MMA,FPA");
  app.add_option("--out", out, "CSV output path (stdout if empty)");
  app.add_option("--trace", trace, "per-trial trace CSV");
  app.add_option("--plot", plot, "gnuplot script path");
  app.add_option("--threads", threads, "worker threads (0: all cores)");
  app.add_flag("--no-timing", no_timing, "write wall_ms = 0 for reproducible output");
  CLI11_PARSE(app, argc, argv);

  remaa::ExperimentConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw std::invalid_argument("cannot read config '" + config_path + "'");
      config = remaa::parse_config(f);
    }
    std::map<std::string, std::string> overrides;
    if (!sweep.empty()) overrides["sweep"] = sweep;
    if (!values.empty()) overrides["values"] = values;
    if (trials != 0) overrides["trials"] = std::to_string(trials);
    if (seed >= 0) overrides["seed"] = std::to_string(seed);
    if (!systems.empty()) overrides["systems"] = systems;
    if (!out.empty()) overrides["out"] = out;
    if (!trace.empty()) overrides["trace"] = trace;
    if (!plot.empty()) overrides["plot"] = plot;
    if (threads >= 0) overrides["threads"] = std::to_string(threads);
    if (no_timing) overrides["timing"] = "false";
    for (const auto& [k, v] : overrides) remaa::apply_config_entry(config, k, v);
    config.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    const remaa::ExperimentResult res = remaa::run_experiment(config);
    if (config.output_path.empty()) {
      remaa::write_csv(std::cout, res.rows);
    } else {
      remaa::emit_csv(res.rows, config.output_path);
    }
    if (!config.trace_path.empty()) {
      std::ofstream f(config.trace_path);
      if (!f) throw std::runtime_error("cannot write trace '" + config.trace_path + "'");
      remaa::write_trace(f, res.records);
    }
    if (!config.plot_path.empty()) {
      std::ofstream f(config.plot_path);
      if (!f) throw std::runtime_error("cannot write plot script '" + config.plot_path + "'");
      remaa::write_plot_script(f, config.output_path.empty() ? "results.csv" : config.output_path,
                               config.systems, config.sweep);
    }
    int failures = 0;
    for (const auto& r : res.rows) failures += r.failures;
    if (failures > 0) std::fprintf(stderr, "%d solver failures excluded\n", failures);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
