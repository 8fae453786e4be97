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

#pragma once

// Experiment driver behind the ttqst command-line tool.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "ttqst/dense_baseline.hpp"
#include "ttqst/qst_solver.hpp"

namespace ttqst {

enum class Algorithm { blocktt, lr };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

/**
 * Flat `key = value` configuration. Keys match the field names below;
 * list-valued keys take comma-separated values. `block_position` is 1-based,
 * with 0 standing for the default N-1. `tt_rank` is the interior bond
 * dimension and `lr_rank` 0 means 2 * block_dim.
 */
struct ExperimentConfig {
  std::size_t n_qubits = 7;
  Index block_dim = 2;
  Index tt_rank = 2;
  std::size_t block_position = 0;
  double sampling_ratio = 0.4;
  /// Ratios visited by a sweep; empty means {sampling_ratio}.
  std::vector<double> sweep_ratios;
  double snr_db = 60.0;
  std::vector<Algorithm> algorithms{Algorithm::blocktt};
  double step_size = 0.05;
  double momentum = 0.3;
  int max_iters = 5000;
  double rel_cost_tol = 1e-10;
  bool backtracking = true;
  GradientMethod gradient_method = GradientMethod::mpo;
  std::size_t gradient_batch = 32;
  double gradient_rounding_tol = 1e-12;
  Index lr_rank = 0;
  bool allow_identity = true;
  int trials = 20;
  std::uint64_t seed = 0;
  /// Record wall-clock seconds in result rows. Off by default because
  /// timings make otherwise identical CSVs differ.
  bool timing = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError on any out-of-range field.
void validate(const ExperimentConfig& cfg);

/// 0-based block site.
std::size_t block_site(const ExperimentConfig& cfg);
RankVector tt_ranks(const ExperimentConfig& cfg);
Index effective_lr_rank(const ExperimentConfig& cfg);
std::vector<double> sweep_ratios(const ExperimentConfig& cfg);

/// M = ceil(ratio * 4^N).
std::size_t measurement_count(std::size_t n_qubits, double ratio);

/// Applies one `key = value` setting; throws ConfigError for unknown keys or
/// unparsable values.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
/// `keys`, when given, receives every key the input sets.
ExperimentConfig parse_config(std::istream& in, std::vector<std::string>* keys = nullptr);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::vector<std::string>* keys = nullptr);
void write_config(std::ostream& out, const ExperimentConfig& cfg);

/// Seeds of one trial, all derived from seed + trial * 10007.
struct TrialSeeds {
  std::uint64_t base, truth, pauli, noise, init;
};
TrialSeeds trial_seeds(std::uint64_t seed, int trial);

/// Unit-norm, left-orthogonal Ginibre block train; `block_site` is 0-based.
BlockTT generate_random_state(std::size_t n_qubits, Index k, const RankVector& ranks,
                              std::size_t block_site, std::uint64_t seed);

SolverConfig solver_config(const ExperimentConfig& cfg, std::uint64_t init_seed);
LrConfig lr_config(const ExperimentConfig& cfg, std::uint64_t init_seed);

struct ResultRow {
  int trial = 0;
  Algorithm algorithm = Algorithm::blocktt;
  std::size_t n_qubits = 0;
  std::size_t m = 0;
  double sampling_ratio = 0.0;
  double snr_db = 0.0;
  double fidelity_raw = std::numeric_limits<double>::quiet_NaN();
  double fidelity_clamped = std::numeric_limits<double>::quiet_NaN();
  double trace_distance = std::numeric_limits<double>::quiet_NaN();
  double final_cost = std::numeric_limits<double>::quiet_NaN();
  int iters = 0;
  double wall_time_s = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  std::string status;
  std::string note;
};

/// One reconstruction: truth, Pauli set, noisy data, solve, metrics.
/// Failures come back as rows with NaN metrics and a note.
ResultRow run_trial(const ExperimentConfig& cfg, double ratio, Algorithm alg, int trial);

/// Every (ratio, algorithm, trial) in that nesting order. `progress`, when
/// set, sees each row as it completes.
std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg,
                                 const std::function<void(const ResultRow&)>& progress = {});

struct SummaryRow {
  Algorithm algorithm = Algorithm::blocktt;
  double sampling_ratio = 0.0;
  std::size_t m = 0;
  int trials = 0;
  int failed = 0;
  double median_fidelity_raw = 0.0;
  double median_fidelity_clamped = 0.0;
  double median_trace_distance = 0.0;
  double median_final_cost = 0.0;
  double median_iters = 0.0;
};

/// Medians per (algorithm, ratio) over the rows with finite metrics.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

double median(std::vector<double> v);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

struct TimingConfig {
  std::size_t n_min = 3;
  std::size_t n_max = 12;
  Index tt_rank = 2;
  Index block_dim = 2;
  double sampling_ratio = 0.05;
  int reps = 10;
  /// Wall-clock allowance for all reps of the dense path at one N.
  double dense_budget_s = 60.0;
  std::uint64_t seed = 0;
};

struct TimingRow {
  std::size_t n_qubits = 0;
  std::size_t m = 0;
  std::string path;  ///< "tt" or "dense"
  double median_s = std::numeric_limits<double>::quiet_NaN();
  bool budget_exceeded = false;
};

/// Times M expectations per N through the block-train contraction and the
/// dense trace with explicit Pauli matrices.
std::vector<TimingRow> run_timing_benchmark(const TimingConfig& cfg);

/// `n_qubits,m,path,median_s`; skipped points carry `budget-exceeded`.
void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ttqst
