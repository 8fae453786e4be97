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

// ttqst: generate states, simulate Pauli measurements, reconstruct, evaluate,
// sweep sampling ratios and time the measurement map.
//
// Exit status: 0 success, 1 configuration or input error, 2 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "ttqst/errors.hpp"
#include "ttqst/harness.hpp"
#include "ttqst/metrics.hpp"
#include "ttqst/tt_io.hpp"

using namespace ttqst;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

// Flag name -> config key. Flags override values read from --config.
const std::vector<std::pair<std::string, std::string>> kExperimentFlags = {
    {"--n-qubits", "n_qubits"},
    {"--block-dim", "block_dim"},
    {"--tt-rank", "tt_rank"},
    {"--block-position", "block_position"},
    {"--sampling-ratio", "sampling_ratio"},
    {"--ratios", "sweep_ratios"},
    {"--snr-db", "snr_db"},
    {"--algorithm", "algorithm"},
    {"--step-size", "step_size"},
    {"--momentum", "momentum"},
    {"--max-iters", "max_iters"},
    {"--rel-cost-tol", "rel_cost_tol"},
    {"--backtracking", "backtracking"},
    {"--gradient-method", "gradient_method"},
    {"--lr-rank", "lr_rank"},
    {"--allow-identity", "allow_identity"},
    {"--trials", "trials"},
    {"--seed", "seed"},
};

struct ExperimentOptions {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool timing = false;

  void attach(CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value experiment file")->check(CLI::ExistingFile);
    for (const auto& [flag, key] : kExperimentFlags) {
      options[key] = sub->add_option(flag, values[key], "overrides '" + key + "'");
    }
    sub->add_flag("--timing", timing, "record wall-clock seconds in result rows");
  }

  // File values first, then flags. With `need_seed`, the seed must come from
  // one of the two.
  ExperimentConfig resolve(bool need_seed) const {
    ExperimentConfig cfg;
    std::vector<std::string> file_keys;
    if (!config_path.empty()) cfg = load_config(config_path, &file_keys);
    bool seeded = std::find(file_keys.begin(), file_keys.end(), "seed") != file_keys.end();
    for (const auto& [key, opt] : options) {
      if (opt->count() == 0) continue;
      set_config_value(cfg, key, values.at(key));
      if (key == "seed") seeded = true;
    }
    if (timing) cfg.timing = true;
    if (need_seed && !seeded) throw ConfigError("--seed is required");
    return cfg;
  }
};

bool has_magic(const std::string& path, const char* magic) {
  std::ifstream in(path, std::ios::binary);
  char buf[4] = {};
  return in.read(buf, 4) && std::memcmp(buf, magic, 4) == 0;
}

DensityMatrix load_state(const std::string& path) {
  if (has_magic(path, "TTQS")) return densify_state(load_block_tt(path));
  if (has_magic(path, "DQSF")) return densify_state(load_dense_factor(path));
  throw FormatError(path + " is neither a block-train nor a dense factor file");
}

template <class Write>
void write_file(const std::string& path, Write&& write) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  write(out);
}

PauliSet set_from_records(const std::vector<MeasurementRecord>& records, std::uint64_t seed) {
  if (records.empty()) throw FormatError("no measurements");
  PauliSet set{records.front().pauli.size(), seed, {}};
  for (const auto& r : records) set.strings.push_back(r.pauli);
  return set;
}

int run_generate(const ExperimentOptions& opts, const std::string& out) {
  ExperimentConfig cfg = opts.resolve(true);
  validate(cfg);
  const BlockTT a =
      generate_random_state(cfg.n_qubits, cfg.block_dim, tt_ranks(cfg), block_site(cfg), cfg.seed);
  save_block_tt(out, a);
  std::cerr << "wrote " << cfg.n_qubits << "-qubit state, K=" << cfg.block_dim << ", block at site "
            << block_site(cfg) + 1 << " to " << out << '\n';
  return 0;
}

int run_measure(const ExperimentOptions& opts, const std::string& state_path,
                const std::string& out, const std::string& paulis_out) {
  ExperimentConfig cfg = opts.resolve(true);
  const BlockTT a = load_block_tt(state_path);
  cfg.n_qubits = a.num_sites();
  validate(cfg);
  const TrialSeeds seeds = trial_seeds(cfg.seed, 0);
  const std::size_t m = measurement_count(cfg.n_qubits, cfg.sampling_ratio);
  const PauliSet set = sample_pauli_set(cfg.n_qubits, m, seeds.pauli, cfg.allow_identity);
  const auto clean = measure_all(a, set);
  const auto records = add_noise(set.strings, clean, {cfg.snr_db, seeds.noise});
  save_measurements_csv(out, records);
  if (!paulis_out.empty()) save_pauli_set(paulis_out, set);
  std::cerr << "wrote " << m << " measurements to " << out << '\n';
  return 0;
}

int run_reconstruct(const ExperimentOptions& opts, const std::string& meas_path,
                    const std::string& out, const std::string& trace_path) {
  ExperimentConfig cfg = opts.resolve(true);
  const auto records = load_measurements_csv(meas_path);
  cfg.n_qubits = records.empty() ? cfg.n_qubits : records.front().pauli.size();
  validate(cfg);
  if (cfg.algorithms.size() != 1) throw ConfigError("reconstruct takes exactly one algorithm");
  const PauliSet set = set_from_records(records, cfg.seed);
  const TrialSeeds seeds = trial_seeds(cfg.seed, 0);

  SolveStatus status;
  SolverTrace trace;
  if (cfg.algorithms.front() == Algorithm::blocktt) {
    SolveResult res = solve(cfg.block_dim, records, set, solver_config(cfg, seeds.init));
    status = res.status;
    trace = std::move(res.trace);
    save_block_tt(out, res.factor);
  } else {
    LrResult res = lr_solve(records, set, effective_lr_rank(cfg), lr_config(cfg, seeds.init));
    status = res.status;
    trace = std::move(res.trace);
    save_dense_factor(out, res.factor);
  }
  if (!trace_path.empty()) save_trace_csv(trace_path, trace);
  std::cerr << "status " << to_string(status) << " after " << trace.rows.size() << " rows";
  if (!trace.rows.empty()) std::cerr << ", cost " << trace.rows.back().cost;
  std::cerr << '\n';
  return status == SolveStatus::diverged ? kExitNumerical : 0;
}

int run_evaluate(const std::string& truth_path, const std::string& est_path,
                 const std::string& out) {
  const DensityMatrix truth = load_state(truth_path);
  const DensityMatrix est = load_state(est_path);
  const Fidelity f = fidelity(truth, est);
  char line[256];
  std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", f.raw, f.clamped,
                trace_distance(truth, est), relative_error(est, truth), est.raw_trace);
  const std::string header = "fidelity_raw,fidelity_clamped,trace_distance,relative_error,raw_trace\n";
  if (out.empty()) {
    std::cout << header << line;
  } else {
    write_file(out, [&](std::ostream& o) { o << header << line; });
  }
  return 0;
}

int run_sweep_cmd(const ExperimentOptions& opts, const std::string& out, std::string summary,
                  bool quiet) {
  const ExperimentConfig cfg = opts.resolve(true);
  validate(cfg);
  const auto rows = run_sweep(cfg, [&](const ResultRow& r) {
    if (quiet) return;
    std::fprintf(stderr, "%-7s ratio %.3f trial %2d: td %.3g  F %.6f  iters %d  %s\n",
                 to_string(r.algorithm).c_str(), r.sampling_ratio, r.trial, r.trace_distance,
                 r.fidelity_raw, r.iters, r.status.c_str());
  });
  write_file(out, [&](std::ostream& o) { write_results_csv(o, rows); });
  if (summary.empty()) {
    const std::filesystem::path p(out);
    summary = (p.parent_path() / (p.stem().string() + "_summary.csv")).string();
  }
  const auto medians = summarize(rows);
  write_file(summary, [&](std::ostream& o) { write_summary_csv(o, medians); });
  write_summary_csv(std::cout, medians);
  return 0;
}

int run_bench(const TimingConfig& cfg, const std::string& out) {
  const auto rows = run_timing_benchmark(cfg);
  if (out.empty()) {
    write_timing_csv(std::cout, rows);
  } else {
    write_file(out, [&](std::ostream& o) { write_timing_csv(o, rows); });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block tensor-train quantum state tomography"};
  app.require_subcommand(1);

  ExperimentOptions gen_opts, meas_opts, rec_opts, sweep_opts;
  std::string out, state_path, paulis_out, meas_path, trace_path, truth_path, est_path, summary;
  bool quiet = false;

  auto* gen = app.add_subcommand("generate", "random Ginibre block-train state");
  gen_opts.attach(gen);
  gen->add_option("--out", out, "state file")->required();

  auto* meas = app.add_subcommand("measure", "sample Pauli strings and simulate noisy data");
  meas_opts.attach(meas);
  meas->add_option("--state", state_path, "state file")->required()->check(CLI::ExistingFile);
  meas->add_option("--out", out, "measurement CSV")->required();
  meas->add_option("--paulis", paulis_out, "also write the Pauli set");

  auto* rec = app.add_subcommand("reconstruct", "estimate a state from measurements");
  rec_opts.attach(rec);
  rec->add_option("--measurements", meas_path, "measurement CSV")->required()->check(CLI::ExistingFile);
  rec->add_option("--out", out, "factor file")->required();
  rec->add_option("--trace", trace_path, "per-iteration trace CSV");

  auto* eval = app.add_subcommand("evaluate", "fidelity and trace distance between two states");
  eval->add_option("--truth", truth_path)->required()->check(CLI::ExistingFile);
  eval->add_option("--estimate", est_path)->required()->check(CLI::ExistingFile);
  eval->add_option("--out", out, "CSV output (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "sampling-ratio sweep over trials");
  sweep_opts.attach(sweep);
  sweep->add_option("--out", out, "per-trial CSV")->required();
  sweep->add_option("--summary", summary, "median CSV (default <out>_summary.csv)");
  sweep->add_flag("--quiet", quiet, "no per-trial progress");

  TimingConfig tcfg;
  auto* bench = app.add_subcommand("bench", "time M expectations, block train vs dense");
  bench->add_option("--n-min", tcfg.n_min)->capture_default_str();
  bench->add_option("--n-max", tcfg.n_max)->capture_default_str();
  bench->add_option("--tt-rank", tcfg.tt_rank)->capture_default_str();
  bench->add_option("--block-dim", tcfg.block_dim)->capture_default_str();
  bench->add_option("--sampling-ratio", tcfg.sampling_ratio)->capture_default_str();
  bench->add_option("--reps", tcfg.reps)->capture_default_str();
  bench->add_option("--budget", tcfg.dense_budget_s, "dense-path seconds per N")->capture_default_str();
  bench->add_option("--seed", tcfg.seed)->required();
  bench->add_option("--out", out, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) return run_generate(gen_opts, out);
    if (*meas) return run_measure(meas_opts, state_path, out, paulis_out);
    if (*rec) return run_reconstruct(rec_opts, meas_path, out, trace_path);
    if (*eval) return run_evaluate(truth_path, est_path, out);
    if (*sweep) return run_sweep_cmd(sweep_opts, out, summary, quiet);
    if (*bench) return run_bench(tcfg, out);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
