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

// Dense D x R factor solvers used as a baseline and as test oracles.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>

#include "ttqst/measurement.hpp"
#include "ttqst/parallel.hpp"
#include "ttqst/pauli.hpp"
#include "ttqst/qst_solver.hpp"

namespace ttqst {

/// Largest register the dense code paths accept.
inline constexpr std::size_t kMaxDenseQubits = 12;

struct DenseFactor {
  Matrix a;  ///< D x R, rho = a a^H
};

struct LrConfig {
  double step_size = 0.05;
  double momentum = 0.3;
  int max_iters = 5000;
  double rel_cost_tol = 1e-10;
  bool backtracking = true;
  std::uint64_t seed = 0;
  Execution exec = Execution::parallel;
};

struct LrResult {
  DenseFactor factor;
  SolverTrace trace;
  SolveStatus status = SolveStatus::max_iters;
  double final_step = 0.0;
};

/// Unit-norm D x r factor with i.i.d. complex Gaussian entries.
DenseFactor random_dense_factor(std::size_t n_qubits, Index r, std::uint64_t seed);

/// 1/2 sum_m (y_m - Tr(E_m a a^H))^2 via bit-mask Pauli actions.
double lr_objective(const DenseFactor& f, std::span<const MeasurementRecord> records,
                    const PauliSet& set, Execution exec = Execution::parallel);

/// -2 sum_m r_m E_m a via bit-mask Pauli actions.
Matrix lr_gradient(const DenseFactor& f, std::span<const MeasurementRecord> records,
                   const PauliSet& set, Execution exec = Execution::parallel);

/**
 * Projected factored gradient descent on the Frobenius ball ||a||_F <= 1.
 *
 * Iterates are rescaled only when they leave the ball. Starts from `init` or,
 * when absent, from random_dense_factor(N, r, cfg.seed).
 */
LrResult lr_solve(std::span<const MeasurementRecord> records, const PauliSet& set, Index r,
                  const LrConfig& cfg, const std::optional<DenseFactor>& init = std::nullopt);

struct DenseObjective {
  double value = 0.0;
  Matrix gradient;  ///< D x R
};

/// Objective and gradient from explicit D x D Pauli matrices. Slow and
/// literal; meant for cross-checking the fast paths.
DenseObjective dense_objective_oracle(const DenseFactor& f,
                                      std::span<const MeasurementRecord> records,
                                      const PauliSet& set);

/**
 * Flat complex matrix file:
 *
 *   "DQSF"   4 bytes magic
 *   D        u64 rows
 *   R        u64 columns
 *   entries  row-major, each as two little-endian float64 (re, im)
 */
void write_dense_factor(std::ostream& out, const DenseFactor& f);
DenseFactor read_dense_factor(std::istream& in);
void save_dense_factor(const std::filesystem::path& path, const DenseFactor& f);
DenseFactor load_dense_factor(const std::filesystem::path& path);

}  // namespace ttqst
