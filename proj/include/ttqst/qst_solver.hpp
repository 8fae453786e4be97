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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ttqst/measurement.hpp"
#include "ttqst/parallel.hpp"
#include "ttqst/pauli.hpp"
#include "ttqst/tt_core.hpp"

namespace ttqst {

enum class GradientMethod {
  /// Exact weighted Pauli-sum operator applied to A, rounded once.
  mpo,
  /// Per-term sum, rounded every `gradient_batch` terms.
  batched,
};

struct SolverConfig {
  double step_size = 0.05;
  /// Heavy-ball coefficient; 0 gives plain projected gradient descent.
  double momentum = 0.3;
  int max_iters = 5000;
  double rel_cost_tol = 1e-10;
  /// Rank caps for the iterates (N+1 entries). Empty keeps the ranks of the
  /// initial factor.
  RankVector target_ranks;
  GradientMethod gradient_method = GradientMethod::mpo;
  double gradient_rounding_tol = 1e-12;
  std::size_t gradient_batch = 32;
  /// Largest bond dimension the gradient train may reach before we give up.
  Index gradient_rank_cap = 4096;
  /// Halve the step until the projected Armijo condition holds.
  bool backtracking = true;
  /// 0-based site of the block index for randomly initialised runs.
  std::size_t block_site = 0;
  std::uint64_t seed = 0;
  Execution exec = Execution::parallel;
};

void validate(const SolverConfig& cfg);

struct TraceRow {
  int iter = 0;
  double cost = 0.0;
  double grad_norm = 0.0;
  double factor_norm = 0.0;
  double elapsed_s = 0.0;
};

struct SolverTrace {
  std::vector<TraceRow> rows;
};

enum class SolveStatus { converged, max_iters, step_underflow, diverged };

struct SolveResult {
  BlockTT factor;
  SolverTrace trace;
  SolveStatus status = SolveStatus::max_iters;
  /// Step size in force at the end (backtracking only ever shrinks it).
  double final_step = 0.0;
};

std::string to_string(SolveStatus s);

/// y values of `records`, after checking that they line up with `set`.
std::vector<double> observed_values(std::span<const MeasurementRecord> records, const PauliSet& set);

/// 1/2 sum_m (y_m - <A A^H, E_m>)^2.
double objective(const BlockTT& a, std::span<const MeasurementRecord> records, const PauliSet& set,
                 Execution exec = Execution::parallel);

/**
 * -2 sum_m r_m E_m A with r_m = y_m - <A A^H, E_m>, the gradient with respect
 * to conj(A). Terms are summed in batches of `batch`, each batch rounded with
 * relative tolerance `rounding_tol`, and batch sums combined in a fixed tree.
 *
 * Throws NumericalError when a bond dimension exceeds `rank_cap`.
 */
BlockTT gradient(const BlockTT& a, std::span<const MeasurementRecord> records,
                 const PauliSet& set, double rounding_tol, std::size_t batch,
                 Index rank_cap = 4096, Execution exec = Execution::parallel);

/// Same gradient through kernels::PauliSumPlan.
BlockTT gradient_mpo(const BlockTT& a, std::span<const MeasurementRecord> records,
                     const PauliSet& set, double rounding_tol, Index rank_cap = 4096,
                     Execution exec = Execution::parallel);

/// Truncates to `target_ranks` and divides the last core by its norm. The
/// result is left-orthogonal with unit Frobenius norm.
BlockTT project_normalize(const BlockTT& a, const RankVector& target_ranks);

/// Unit-norm Ginibre factor with physical extent 2 on every site.
BlockTT random_factor(std::size_t n_sites, Index k, const RankVector& ranks,
                      std::size_t block_site, std::uint64_t seed);

/// Projected gradient descent from `init`.
SolveResult solve(const BlockTT& init, std::span<const MeasurementRecord> records,
                  const PauliSet& set, const SolverConfig& cfg);

/// Same, starting from random_factor(N, k, cfg.target_ranks, cfg.block_site, cfg.seed).
SolveResult solve(Index k, std::span<const MeasurementRecord> records, const PauliSet& set,
                  const SolverConfig& cfg);

/// CSV with header `iter,cost,grad_norm,factor_norm,elapsed_s`.
void write_trace_csv(std::ostream& out, const SolverTrace& trace);
void save_trace_csv(const std::filesystem::path& path, const SolverTrace& trace);

}  // namespace ttqst
