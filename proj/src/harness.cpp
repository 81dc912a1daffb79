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

#include "remaa/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "remaa/constraints.hpp"
#include "remaa/mma.hpp"
#include "remaa/swap_refine.hpp"
#include "remaa/tljbas.hpp"
#include "remaa/wmmse.hpp"

namespace remaa {

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::Interval: return "interval";
    case SweepVariable::Snr: return "snr";
    case SweepVariable::Paths: return "paths";
    case SweepVariable::Users: return "users";
  }
  return "?";
}

const char* to_string(System s) {
  switch (s) {
    case System::FC: return "FC";
    case System::PC: return "PC";
    case System::MMA: return "MMA";
    case System::FPA: return "FPA";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x)) throw std::invalid_argument("expected an integer for " + key);
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string l = lower(v);
  if (l == "1" || l == "true" || l == "yes" || l == "on") return true;
  if (l == "0" || l == "false" || l == "no" || l == "off") return false;
  throw std::invalid_argument("expected a boolean for " + key);
}

}  // namespace

SweepVariable parse_sweep(const std::string& s) {
  const std::string l = lower(trim(s));
  if (l == "interval") return SweepVariable::Interval;
  if (l == "snr") return SweepVariable::Snr;
  if (l == "paths") return SweepVariable::Paths;
  if (l == "users") return SweepVariable::Users;
  throw std::invalid_argument("unknown sweep variable '" + s + "'");
}

System parse_system(const std::string& s) {
  const std::string l = lower(trim(s));
  if (l == "fc") return System::FC;
  if (l == "pc") return System::PC;
  if (l == "mma") return System::MMA;
  if (l == "fpa") return System::FPA;
  throw std::invalid_argument("unknown system '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (values.empty()) throw std::invalid_argument("sweep values must not be empty");
  if (!std::is_sorted(values.begin(), values.end())) {
    throw std::invalid_argument("sweep values must be sorted");
  }
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (systems.empty()) throw std::invalid_argument("no systems selected");
  if (n_select < 1 || users < 1 || paths < 1) {
    throw std::invalid_argument("n_select, users and paths must be >= 1");
  }
  if (rema_rows < 1 || rema_cols < 1) throw std::invalid_argument("REMA counts must be >= 1");
  if (!(rema_size > 0) || !(interval > 0) || !(power > 0)) {
    throw std::invalid_argument("rema_size, interval and power must be positive");
  }
  if (linear && rema_rows != 1) throw std::invalid_argument("linear arrays need rema_rows = 1");
  if (mma_random_starts < 0 || threads < 0) {
    throw std::invalid_argument("mma_random_starts and threads must be >= 0");
  }
  for (double v : values) {
    if (sweep == SweepVariable::Interval && !(v > 0)) {
      throw std::invalid_argument("interval values must be positive");
    }
    if ((sweep == SweepVariable::Paths || sweep == SweepVariable::Users) &&
        (v < 1 || v != std::floor(v))) {
      throw std::invalid_argument("path and user counts must be positive integers");
    }
  }
  const bool has_pc = std::find(systems.begin(), systems.end(), System::PC) != systems.end();
  if (has_pc && rema_rows * rema_cols != n_select) {
    throw std::invalid_argument("PC needs one selected antenna per REMA (rema_rows * rema_cols = n_select)");
  }
}

void apply_config_entry(ExperimentConfig& c, const std::string& raw_key,
                        const std::string& raw_value) {
  const std::string key = lower(trim(raw_key));
  const std::string v = trim(raw_value);
  if (key == "sweep") {
    c.sweep = parse_sweep(v);
  } else if (key == "values") {
    c.values.clear();
    for (const auto& s : split_list(v)) c.values.push_back(parse_double(key, s));
  } else if (key == "n_select") {
    c.n_select = parse_int(key, v);
  } else if (key == "users") {
    c.users = parse_int(key, v);
  } else if (key == "paths") {
    c.paths = parse_int(key, v);
  } else if (key == "snr_db") {
    c.snr_db = parse_double(key, v);
  } else if (key == "power") {
    c.power = parse_double(key, v);
  } else if (key == "rema_rows") {
    c.rema_rows = parse_int(key, v);
  } else if (key == "rema_cols") {
    c.rema_cols = parse_int(key, v);
  } else if (key == "rema_size") {
    c.rema_size = parse_double(key, v);
  } else if (key == "interval") {
    c.interval = parse_double(key, v);
  } else if (key == "linear") {
    c.linear = parse_bool(key, v);
  } else if (key == "trials") {
    c.trials = parse_int(key, v);
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(parse_double(key, v));
  } else if (key == "systems") {
    c.systems.clear();
    for (const auto& s : split_list(v)) c.systems.push_back(parse_system(s));
  } else if (key == "out") {
    c.output_path = v;
  } else if (key == "trace") {
    c.trace_path = v;
  } else if (key == "plot") {
    c.plot_path = v;
  } else if (key == "threads") {
    c.threads = parse_int(key, v);
  } else if (key == "mma_random_starts") {
    c.mma_random_starts = parse_int(key, v);
  } else if (key == "timing") {
    c.record_timing = parse_bool(key, v);
  } else {
    throw std::invalid_argument("unknown config key '" + raw_key + "'");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_config_entry(c, line.substr(0, eq), line.substr(eq + 1));
  }
  return c;
}

TrialSetup setup_for(const ExperimentConfig& config, double sweep_value) {
  TrialSetup s;
  double interval = config.interval;
  double snr_db = config.snr_db;
  s.users = config.users;
  s.paths = config.paths;
  switch (config.sweep) {
    case SweepVariable::Interval: interval = sweep_value; break;
    case SweepVariable::Snr: snr_db = sweep_value; break;
    case SweepVariable::Paths: s.paths = static_cast<int>(sweep_value); break;
    case SweepVariable::Users: s.users = static_cast<int>(sweep_value); break;
  }
  const int per_rema = std::max(1, static_cast<int>(std::lround(config.rema_size / interval)));

  s.fc.m_rows = config.rema_rows;
  s.fc.m_cols = config.rema_cols;
  s.fc.s_rows = config.linear ? 1 : per_rema;
  s.fc.s_cols = per_rema;
  s.fc.d_c = interval;
  s.fc.d_e = per_rema * interval;
  s.fc.kind = ArrayKind::FC;
  s.pc = s.fc;
  s.pc.kind = ArrayKind::PC;

  int rows = 1;
  if (!config.linear) {
    rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(config.n_select))));
    while (rows > 1 && config.n_select % rows != 0) --rows;
  }
  s.fpa = ArrayConfig::fpa(rows, config.n_select / rows);

  s.n_select = config.n_select;
  s.power = config.power;
  s.noise_power = config.power / std::pow(10.0, snr_db / 10.0);
  return s;
}

std::uint64_t trial_seed(std::uint64_t base, int trial) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

struct RemaOutcome {
  double rate = 0.0;
  Layout positions;
};

// Candidate channels scaled so each antenna sees the same per-element field
// as an N_s-element array.
RemaOutcome run_rema(const ArrayConfig& array, const TrialSetup& s, const PathList& paths) {
  const Layout grid = build_grid(array);
  const CMat h = channel_matrix(grid, paths, array.wavelength) *
                 std::sqrt(static_cast<double>(grid.size()) / s.n_select);
  const ConstraintBundle bundle = build_bundle(array);
  const TljbasResult tl =
      tljbas_run(h, bundle, array.kind, s.n_select, s.power, s.noise_power);
  const RefineResult rf =
      refine(tl.selection, h, bundle, array.kind, s.power, s.noise_power);
  RemaOutcome out;
  out.rate = rf.sum_rate;
  for (int i : rf.selection.selected()) out.positions.push_back(grid[i]);
  return out;
}

// Moves points sitting on the region boundary a hair inside.
Layout nudge_inside(Layout positions, const MmaRegion& region, double eps) {
  for (auto& p : positions) {
    if (region.x_free()) p.x() = std::clamp(p.x(), region.x_lo + eps, region.x_hi - eps);
    if (region.z_free()) p.z() = std::clamp(p.z(), region.z_lo + eps, region.z_hi - eps);
  }
  return positions;
}

double run_mma(const TrialSetup& s, const PathList& paths, const Layout* fc_positions,
               int random_starts, std::uint64_t seed) {
  const MmaRegion region = MmaRegion::footprint(build_grid(s.fc));
  const double wavelength = s.fc.wavelength;
  AbapoLimits limits;
  limits.random_starts = random_starts;
  limits.seed = seed;
  double best = -1.0;
  std::string last_error;
  try {
    best = abapo_run(region, paths, s.n_select, s.power, s.noise_power, wavelength, limits)
               .sum_rate;
  } catch (const InitializationFailure& e) {
    last_error = e.what();
  }
  if (fc_positions != nullptr) {
    MmaLayout start;
    start.positions = nudge_inside(*fc_positions, region, 1e-9 * wavelength);
    start.region = region;
    start.min_spacing = wavelength / 2.0;
    if (start.strictly_feasible()) {
      limits.random_starts = 0;
      best = std::max(best, abapo_run(region, paths, s.n_select, s.power, s.noise_power,
                                      wavelength, limits, start.positions)
                                .sum_rate);
    }
  }
  if (best < 0) throw InitializationFailure(last_error);
  return best;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& config, const TrialSetup& setup,
                      const PathList& paths, int mma_random_starts, std::uint64_t mma_seed) {
  TrialRecord rec;
  rec.channel_hash = hash_paths(paths);
  std::optional<Layout> fc_positions;

  // FC runs first so MMA can start from its layout.
  std::vector<System> order = config.systems;
  std::stable_partition(order.begin(), order.end(), [](System s) { return s == System::FC; });
  std::vector<SystemOutcome> done;
  for (System sys : order) {
    SystemOutcome o;
    o.system = sys;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      switch (sys) {
        case System::FC: {
          RemaOutcome r = run_rema(setup.fc, setup, paths);
          o.sum_rate = r.rate;
          fc_positions = std::move(r.positions);
          break;
        }
        case System::PC:
          o.sum_rate = run_rema(setup.pc, setup, paths).rate;
          break;
        case System::MMA:
          o.sum_rate = run_mma(setup, paths, fc_positions ? &*fc_positions : nullptr,
                               mma_random_starts, mma_seed);
          break;
        case System::FPA: {
          const Layout grid = build_grid(setup.fpa);
          const CMat h = channel_matrix(grid, paths, setup.fpa.wavelength);
          o.sum_rate = wmmse_solve(h, setup.power, setup.noise_power).sum_rate;
          break;
        }
      }
      o.ok = std::isfinite(o.sum_rate);
      if (!o.ok) o.error = "non-finite sum-rate";
    } catch (const std::exception& e) {
      o.ok = false;
      o.error = e.what();
    }
    o.wall_ms = config.record_timing ? elapsed_ms(t0) : 0.0;
    done.push_back(std::move(o));
  }
  for (System sys : config.systems) {
    for (const auto& o : done) {
      if (o.system == sys) {
        rec.outcomes.push_back(o);
        break;
      }
    }
  }
  return rec;
}

ResultRow aggregate(System system, double sweep_value, const std::vector<double>& rates,
                    int trials, int failures, double wall_ms) {
  ResultRow row;
  row.system = system;
  row.sweep_value = sweep_value;
  row.trials = trials;
  row.failures = failures;
  row.wall_ms = wall_ms;
  const auto n = static_cast<double>(rates.size());
  if (rates.empty()) return row;
  double sum = 0.0;
  for (double r : rates) sum += r;
  row.mean_rate = sum / n;
  if (rates.size() > 1) {
    double ss = 0.0;
    for (double r : rates) ss += (r - row.mean_rate) * (r - row.mean_rate);
    row.stderr_rate = std::sqrt(ss / (n - 1.0) / n);
  }
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult res;
  const int trials = config.trials;
  const std::size_t n_values = config.values.size();
  res.records.resize(n_values * static_cast<std::size_t>(trials));

  std::vector<TrialSetup> setups;
  for (double v : config.values) setups.push_back(setup_for(config, v));

  const std::size_t jobs = res.records.size();
  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs));
  auto work = [&](unsigned w) {
    for (std::size_t j = w; j < jobs; j += workers) {
      const std::size_t vi = j / trials;
      const int t = static_cast<int>(j % trials);
      const TrialSetup& s = setups[vi];
      PathSpec spec;
      spec.paths_per_user.assign(s.users, s.paths);
      spec.seed = trial_seed(config.seed, t);
      const PathList paths = draw_paths(spec);
      TrialRecord rec = run_trial(config, s, paths, config.mma_random_starts,
                                  trial_seed(config.seed ^ 0x5bd1e995ULL, t));
      rec.trial = t;
      rec.sweep_value = config.values[vi];
      res.records[j] = std::move(rec);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  for (std::size_t vi = 0; vi < n_values; ++vi) {
    for (std::size_t si = 0; si < config.systems.size(); ++si) {
      std::vector<double> rates;
      int failures = 0;
      double wall = 0.0;
      for (int t = 0; t < trials; ++t) {
        const SystemOutcome& o = res.records[vi * trials + t].outcomes[si];
        wall += o.wall_ms;
        if (o.ok) {
          rates.push_back(o.sum_rate);
        } else {
          ++failures;
        }
      }
      res.rows.push_back(
          aggregate(config.systems[si], config.values[vi], rates, trials, failures, wall));
    }
  }
  return res;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "system,sweep_value,mean_rate,stderr,trials,failures,wall_ms\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6g,%.6g,%.6g,%d,%d,%.6g\n", to_string(r.system),
                  r.sweep_value, r.mean_rate, r.stderr_rate, r.trials, r.failures, r.wall_ms);
    out << buf;
  }
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("no result rows to write");
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(f, rows);
  f.flush();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<ResultRow> parse_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string item;
    std::istringstream ls(line);
    while (std::getline(ls, item, ',')) f.push_back(item);
    if (f.size() != 7) throw std::invalid_argument("malformed CSV row: " + line);
    ResultRow r;
    r.system = parse_system(f[0]);
    r.sweep_value = std::stod(f[1]);
    r.mean_rate = std::stod(f[2]);
    r.stderr_rate = std::stod(f[3]);
    r.trials = std::stoi(f[4]);
    r.failures = std::stoi(f[5]);
    r.wall_ms = std::stod(f[6]);
    rows.push_back(r);
  }
  return rows;
}

void write_trace(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "trial,sweep_value,system,channel_hash,ok,sum_rate\n";
  char buf[256];
  for (const auto& rec : records) {
    for (const auto& o : rec.outcomes) {
      std::snprintf(buf, sizeof buf, "%d,%.6g,%s,%016llx,%d,%.17g\n", rec.trial,
                    rec.sweep_value, to_string(o.system),
                    static_cast<unsigned long long>(rec.channel_hash), o.ok ? 1 : 0,
                    o.sum_rate);
      out << buf;
    }
  }
}

void write_plot_script(std::ostream& out, const std::string& csv_path,
                       const std::vector<System>& systems, SweepVariable sweep) {
  out << "# gnuplot script\n";
  out << "set datafile separator ','\n";
  out << "set key top left\n";
  out << "set grid\n";
  out << "set xlabel '" << to_string(sweep) << "'\n";
  out << "set ylabel 'sum-rate (bits/s/Hz)'\n";
  out << "plot ";
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const char* name = to_string(systems[i]);
    if (i) out << ", \\\n     ";
    out << "'" << csv_path << "' using 2:(strcol(1) eq '" << name
        << "' ? $3 : 1/0):4 with yerrorlines title '" << name << "'";
  }
  out << "\n";
}

}  // namespace remaa
