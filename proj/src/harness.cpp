// Copyright 2026 The ttqst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ttqst/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ttqst/errors.hpp"
#include "ttqst/metrics.hpp"

namespace ttqst {

namespace {

constexpr std::uint64_t kTrialStride = 10007;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad number for " + key + ": '" + v + "'");
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      const unsigned long long x = std::stoull(v, &used);
      if (used == v.size()) return x;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("bad non-negative integer for " + key + ": '" + v + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return s;
}

GradientMethod parse_gradient_method(const std::string& v) {
  if (v == "mpo") return GradientMethod::mpo;
  if (v == "batched") return GradientMethod::batched;
  throw ConfigError("gradient_method must be mpo or batched, got '" + v + "'");
}

std::string gradient_method_name(GradientMethod g) {
  return g == GradientMethod::mpo ? "mpo" : "batched";
}

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string to_string(Algorithm a) { return a == Algorithm::blocktt ? "blocktt" : "lr"; }

Algorithm parse_algorithm(const std::string& s) {
  if (s == "blocktt") return Algorithm::blocktt;
  if (s == "lr") return Algorithm::lr;
  throw ConfigError("algorithm must be blocktt or lr, got '" + s + "'");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n_qubits < 1 || cfg.n_qubits > kMaxPauliQubits) {
    throw ConfigError("n_qubits must be in 1.." + std::to_string(kMaxPauliQubits));
  }
  if (cfg.block_dim < 1) throw ConfigError("block_dim must be positive");
  if (cfg.tt_rank < 1) throw ConfigError("tt_rank must be positive");
  if (cfg.block_position > cfg.n_qubits) throw ConfigError("block_position must be in 1..n_qubits");
  auto check_ratio = [](double r) {
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("sampling ratios must lie in (0, 1]");
  };
  check_ratio(cfg.sampling_ratio);
  for (double r : cfg.sweep_ratios) check_ratio(r);
  if (std::isnan(cfg.snr_db) || cfg.snr_db == -std::numeric_limits<double>::infinity()) {
    throw ConfigError("snr_db must be finite or inf");
  }
  if (cfg.algorithms.empty()) throw ConfigError("at least one algorithm is required");
  if (cfg.lr_rank < 0) throw ConfigError("lr_rank must be non-negative");
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  SolverConfig probe = solver_config(cfg, 0);
  ttqst::validate(probe);
}

std::size_t block_site(const ExperimentConfig& cfg) {
  if (cfg.block_position == 0) return cfg.n_qubits >= 2 ? cfg.n_qubits - 2 : 0;
  return cfg.block_position - 1;
}

RankVector tt_ranks(const ExperimentConfig& cfg) { return uniform_ranks(cfg.n_qubits, cfg.tt_rank); }

Index effective_lr_rank(const ExperimentConfig& cfg) {
  return cfg.lr_rank > 0 ? cfg.lr_rank : 2 * cfg.block_dim;
}

std::vector<double> sweep_ratios(const ExperimentConfig& cfg) {
  return cfg.sweep_ratios.empty() ? std::vector<double>{cfg.sampling_ratio} : cfg.sweep_ratios;
}

std::size_t measurement_count(std::size_t n_qubits, double ratio) {
  const double total = std::ldexp(1.0, static_cast<int>(2 * n_qubits));
  return static_cast<std::size_t>(std::ceil(ratio * total));
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "n_qubits") {
    cfg.n_qubits = parse_uint(key, v);
  } else if (key == "block_dim") {
    cfg.block_dim = static_cast<Index>(parse_uint(key, v));
  } else if (key == "tt_rank") {
    cfg.tt_rank = static_cast<Index>(parse_uint(key, v));
  } else if (key == "block_position") {
    cfg.block_position = parse_uint(key, v);
  } else if (key == "sampling_ratio") {
    cfg.sampling_ratio = parse_double(key, v);
  } else if (key == "sweep_ratios") {
    cfg.sweep_ratios.clear();
    for (const auto& item : split_list(v)) cfg.sweep_ratios.push_back(parse_double(key, item));
  } else if (key == "snr_db") {
    cfg.snr_db = parse_double(key, v);
  } else if (key == "algorithm") {
    cfg.algorithms.clear();
    for (const auto& item : split_list(v)) cfg.algorithms.push_back(parse_algorithm(item));
  } else if (key == "step_size") {
    cfg.step_size = parse_double(key, v);
  } else if (key == "momentum") {
    cfg.momentum = parse_double(key, v);
  } else if (key == "max_iters") {
    cfg.max_iters = static_cast<int>(parse_uint(key, v));
  } else if (key == "rel_cost_tol") {
    cfg.rel_cost_tol = parse_double(key, v);
  } else if (key == "backtracking") {
    cfg.backtracking = parse_bool(key, v);
  } else if (key == "gradient_method") {
    cfg.gradient_method = parse_gradient_method(v);
  } else if (key == "gradient_batch") {
    cfg.gradient_batch = parse_uint(key, v);
  } else if (key == "gradient_rounding_tol") {
    cfg.gradient_rounding_tol = parse_double(key, v);
  } else if (key == "lr_rank") {
    cfg.lr_rank = static_cast<Index>(parse_uint(key, v));
  } else if (key == "allow_identity") {
    cfg.allow_identity = parse_bool(key, v);
  } else if (key == "trials") {
    cfg.trials = static_cast<int>(parse_uint(key, v));
  } else if (key == "seed") {
    cfg.seed = parse_uint(key, v);
  } else if (key == "timing") {
    cfg.timing = parse_bool(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, std::vector<std::string>* keys) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    set_config_value(cfg, key, t.substr(eq + 1));
    if (keys) keys->push_back(key);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::vector<std::string>* keys) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in, keys);
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
  auto list = [](const auto& items, auto to_text) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + to_text(items[i]);
    return s;
  };
  out << "n_qubits = " << cfg.n_qubits << '\n'
      << "block_dim = " << cfg.block_dim << '\n'
      << "tt_rank = " << cfg.tt_rank << '\n'
      << "block_position = " << cfg.block_position << '\n'
      << "sampling_ratio = " << fmt(cfg.sampling_ratio) << '\n'
      << "sweep_ratios = " << list(cfg.sweep_ratios, [](double r) { return fmt(r); }) << '\n'
      << "snr_db = " << fmt(cfg.snr_db) << '\n'
      << "algorithm = "
      << list(cfg.algorithms, [](Algorithm a) { return to_string(a); }) << '\n'
      << "step_size = " << fmt(cfg.step_size) << '\n'
      << "momentum = " << fmt(cfg.momentum) << '\n'
      << "max_iters = " << cfg.max_iters << '\n'
      << "rel_cost_tol = " << fmt(cfg.rel_cost_tol) << '\n'
      << "backtracking = " << (cfg.backtracking ? "true" : "false") << '\n'
      << "gradient_method = " << gradient_method_name(cfg.gradient_method) << '\n'
      << "gradient_batch = " << cfg.gradient_batch << '\n'
      << "gradient_rounding_tol = " << fmt(cfg.gradient_rounding_tol) << '\n'
      << "lr_rank = " << cfg.lr_rank << '\n'
      << "allow_identity = " << (cfg.allow_identity ? "true" : "false") << '\n'
      << "trials = " << cfg.trials << '\n'
      << "seed = " << cfg.seed << '\n'
      << "timing = " << (cfg.timing ? "true" : "false") << '\n';
}

TrialSeeds trial_seeds(std::uint64_t seed, int trial) {
  const std::uint64_t base = seed + static_cast<std::uint64_t>(trial) * kTrialStride;
  return {base, base, base + 1, base + 2, base + 3};
}

BlockTT generate_random_state(std::size_t n_qubits, Index k, const RankVector& ranks,
                              std::size_t block_site, std::uint64_t seed) {
  return random_factor(n_qubits, k, ranks, block_site, seed);
}

SolverConfig solver_config(const ExperimentConfig& cfg, std::uint64_t init_seed) {
  SolverConfig s;
  s.step_size = cfg.step_size;
  s.momentum = cfg.momentum;
  s.max_iters = cfg.max_iters;
  s.rel_cost_tol = cfg.rel_cost_tol;
  s.target_ranks = tt_ranks(cfg);
  s.gradient_method = cfg.gradient_method;
  s.gradient_rounding_tol = cfg.gradient_rounding_tol;
  s.gradient_batch = cfg.gradient_batch;
  s.backtracking = cfg.backtracking;
  s.block_site = block_site(cfg);
  s.seed = init_seed;
  return s;
}

LrConfig lr_config(const ExperimentConfig& cfg, std::uint64_t init_seed) {
  LrConfig l;
  l.step_size = cfg.step_size;
  l.momentum = cfg.momentum;
  l.max_iters = cfg.max_iters;
  l.rel_cost_tol = cfg.rel_cost_tol;
  l.backtracking = cfg.backtracking;
  l.seed = init_seed;
  return l;
}

ResultRow run_trial(const ExperimentConfig& cfg, double ratio, Algorithm alg, int trial) {
  const TrialSeeds seeds = trial_seeds(cfg.seed, trial);
  ResultRow row;
  row.trial = trial;
  row.algorithm = alg;
  row.n_qubits = cfg.n_qubits;
  row.m = measurement_count(cfg.n_qubits, ratio);
  row.sampling_ratio = ratio;
  row.snr_db = cfg.snr_db;
  row.seed = seeds.base;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const BlockTT truth =
        generate_random_state(cfg.n_qubits, cfg.block_dim, tt_ranks(cfg), block_site(cfg), seeds.truth);
    const PauliSet set = sample_pauli_set(cfg.n_qubits, row.m, seeds.pauli, cfg.allow_identity);
    const auto clean = measure_all(truth, set);
    const auto records = add_noise(set.strings, clean, {cfg.snr_db, seeds.noise});

    DensityMatrix estimate;
    SolveStatus status;
    if (alg == Algorithm::blocktt) {
      const SolveResult res = solve(cfg.block_dim, records, set, solver_config(cfg, seeds.init));
      status = res.status;
      row.final_cost = res.trace.rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                              : res.trace.rows.back().cost;
      row.iters = res.trace.rows.empty() ? 0 : res.trace.rows.back().iter;
      if (status != SolveStatus::diverged) estimate = densify_state(res.factor);
    } else {
      const LrResult res =
          lr_solve(records, set, effective_lr_rank(cfg), lr_config(cfg, seeds.init));
      status = res.status;
      row.final_cost = res.trace.rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                              : res.trace.rows.back().cost;
      row.iters = res.trace.rows.empty() ? 0 : res.trace.rows.back().iter;
      if (status != SolveStatus::diverged) estimate = densify_state(res.factor);
    }
    row.status = to_string(status);
    if (status == SolveStatus::diverged) {
      row.note = "non-finite cost";
    } else {
      const DensityMatrix ref = densify_state(truth);
      const Fidelity f = fidelity(ref, estimate);
      row.fidelity_raw = f.raw;
      row.fidelity_clamped = f.clamped;
      row.trace_distance = trace_distance(ref, estimate);
    }
  } catch (const std::exception& e) {
    row.status = "error";
    row.note = csv_safe(e.what());
    row.fidelity_raw = row.fidelity_clamped = row.trace_distance =
        std::numeric_limits<double>::quiet_NaN();
  }
  if (cfg.timing) {
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return row;
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg,
                                 const std::function<void(const ResultRow&)>& progress) {
  validate(cfg);
  std::vector<ResultRow> rows;
  for (double ratio : sweep_ratios(cfg))
    for (Algorithm alg : cfg.algorithms)
      for (int t = 0; t < cfg.trials; ++t) {
        rows.push_back(run_trial(cfg, ratio, alg, t));
        if (progress) progress(rows.back());
      }
  return rows;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::vector<std::pair<Algorithm, double>> keys;
  for (const auto& r : rows) {
    const std::pair<Algorithm, double> k{r.algorithm, r.sampling_ratio};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  std::vector<SummaryRow> out;
  for (const auto& [alg, ratio] : keys) {
    SummaryRow s;
    s.algorithm = alg;
    s.sampling_ratio = ratio;
    std::vector<double> fr, fc, td, cost, iters;
    for (const auto& r : rows) {
      if (r.algorithm != alg || r.sampling_ratio != ratio) continue;
      s.m = r.m;
      ++s.trials;
      if (!std::isfinite(r.trace_distance)) {
        ++s.failed;
        continue;
      }
      fr.push_back(r.fidelity_raw);
      fc.push_back(r.fidelity_clamped);
      td.push_back(r.trace_distance);
      cost.push_back(r.final_cost);
      iters.push_back(r.iters);
    }
    s.median_fidelity_raw = median(fr);
    s.median_fidelity_clamped = median(fc);
    s.median_trace_distance = median(td);
    s.median_final_cost = median(cost);
    s.median_iters = median(iters);
    out.push_back(s);
  }
  return out;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "trial,algorithm,n_qubits,m,sampling_ratio,snr_db,fidelity_raw,fidelity_clamped,"
         "trace_distance,final_cost,iters,wall_time_s,seed,status,note\n";
  for (const auto& r : rows) {
    out << r.trial << ',' << to_string(r.algorithm) << ',' << r.n_qubits << ',' << r.m << ','
        << fmt(r.sampling_ratio) << ',' << fmt(r.snr_db) << ',' << fmt(r.fidelity_raw) << ','
        << fmt(r.fidelity_clamped) << ',' << fmt(r.trace_distance) << ',' << fmt(r.final_cost)
        << ',' << r.iters << ',' << fmt(r.wall_time_s) << ',' << r.seed << ',' << r.status << ','
        << csv_safe(r.note) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "algorithm,sampling_ratio,m,trials,failed,median_fidelity_raw,median_fidelity_clamped,"
         "median_trace_distance,median_final_cost,median_iters\n";
  for (const auto& s : rows) {
    out << to_string(s.algorithm) << ',' << fmt(s.sampling_ratio) << ',' << s.m << ',' << s.trials
        << ',' << s.failed << ',' << fmt(s.median_fidelity_raw) << ','
        << fmt(s.median_fidelity_clamped) << ',' << fmt(s.median_trace_distance) << ','
        << fmt(s.median_final_cost) << ',' << fmt(s.median_iters) << '\n';
  }
}

std::vector<TimingRow> run_timing_benchmark(const TimingConfig& cfg) {
  if (cfg.n_min < 1 || cfg.n_max < cfg.n_min || cfg.n_max > kMaxPauliQubits) {
    throw ConfigError("bad qubit range");
  }
  if (cfg.reps < 1) throw ConfigError("reps must be positive");
  if (!(cfg.sampling_ratio > 0.0 && cfg.sampling_ratio <= 1.0)) {
    throw ConfigError("sampling ratio must lie in (0, 1]");
  }
  std::vector<TimingRow> rows;
  bool dense_over = false;
  for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
    const std::size_t site = n >= 2 ? n - 2 : 0;
    const BlockTT truth = generate_random_state(n, cfg.block_dim, uniform_ranks(n, cfg.tt_rank),
                                                site, cfg.seed + n);
    const std::size_t m = measurement_count(n, cfg.sampling_ratio);
    const PauliSet set = sample_pauli_set(n, m, cfg.seed + 1000 + n);

    std::vector<double> tt_times;
    for (int rep = 0; rep < cfg.reps; ++rep) {
      tt_times.push_back(seconds([&] { (void)measure_all(truth, set); }));
    }
    rows.push_back({n, m, "tt", median(tt_times), false});

    TimingRow dense{n, m, "dense", std::numeric_limits<double>::quiet_NaN(), true};
    if (!dense_over && n <= kMaxDenseQubits) {
      const Matrix a = to_matrix(truth);
      const Matrix rho = a * a.adjoint();
      // Probe a couple of calls and extrapolate before committing.
      const std::size_t probe_n = std::min<std::size_t>(m, 2);
      const std::span<const PauliString> probe(set.strings.data(), probe_n);
      const double probe_s = seconds([&] { (void)measure_all_dense(rho, probe); });
      const double predicted = probe_s / static_cast<double>(probe_n) * static_cast<double>(m) * cfg.reps;
      if (predicted <= cfg.dense_budget_s) {
        std::vector<double> times;
        for (int rep = 0; rep < cfg.reps; ++rep) {
          times.push_back(seconds([&] { (void)measure_all_dense(rho, set.strings); }));
        }
        dense.median_s = median(times);
        dense.budget_exceeded = false;
      }
    }
    dense_over = dense.budget_exceeded;
    rows.push_back(dense);
  }
  return rows;
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
  out << "n_qubits,m,path,median_s\n";
  for (const auto& r : rows) {
    out << r.n_qubits << ',' << r.m << ',' << r.path << ','
        << (r.budget_exceeded ? std::string("budget-exceeded") : fmt(r.median_s)) << '\n';
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ShapeError("need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace ttqst
