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

// Hot loops of the library. Every OpenMP kernel has a serial twin that is
// kept as the reference in tests and in the kernel benchmark.

#include <cstdint>
#include <span>
#include <vector>

#include "ttqst/pauli.hpp"
#include "ttqst/tt_core.hpp"

namespace ttqst::kernels {

/// Scratch buffers reused across Pauli contractions on one thread.
struct ContractionWorkspace {
  std::vector<Complex> env;
  std::vector<Complex> next;
  std::vector<Complex> tmp;
};

/// Raw complex <A A^H, E_p>. Throws ShapeError on a site-count mismatch or a
/// non-qubit site.
Complex pauli_expectation(const BlockTT& a, const PauliString& p, ContractionWorkspace& ws);

/// As pauli_expectation, adding the number of complex multiply-adds to `fma`.
Complex pauli_expectation_counted(const BlockTT& a, const PauliString& p,
                                  ContractionWorkspace& ws, std::uint64_t& fma);

void measure_all_serial(const BlockTT& a, std::span<const PauliString> strings,
                        std::span<Complex> out);
void measure_all_parallel(const BlockTT& a, std::span<const PauliString> strings,
                          std::span<Complex> out);

void measure_all_dense_serial(const Matrix& rho, std::span<const PauliString> strings,
                              std::span<double> out);
void measure_all_dense_parallel(const Matrix& rho, std::span<const PauliString> strings,
                                std::span<double> out);

/// Applies a Pauli string to the physical indices of every core: the result
/// is E_p A with A's bond dimensions, scaled by `weight` on the last core.
BlockTT apply_pauli(const BlockTT& a, const PauliString& p, Complex weight);

/// Sum of weight_m * E_m A over a contiguous range, rounded once with
/// relative tolerance `tol`.
BlockTT weighted_pauli_sum(const BlockTT& a, std::span<const PauliString> strings,
                           std::span<const double> weights, double tol);

/**
 * sum_m weight_m * E_m A as a block train.
 *
 * Terms are added in consecutive batches of `batch`; each batch sum is
 * rounded with tolerance `tol` and batch results are combined pairwise in a
 * fixed binary tree, rounding after every combination. The tree depends on
 * (M, batch) only, so serial and parallel runs agree bitwise.
 */
BlockTT pauli_sum_apply_serial(const BlockTT& a, std::span<const PauliString> strings,
                               std::span<const double> weights, std::size_t batch, double tol);
BlockTT pauli_sum_apply_parallel(const BlockTT& a, std::span<const PauliString> strings,
                                 std::span<const double> weights, std::size_t batch, double tol);

/**
 * Exact TT-matrix for sum_m w_m E_m over a fixed list of strings.
 *
 * Left of a junction bond c the operator is a prefix trie (one state per
 * distinct prefix), right of it a suffix trie; the weights live in the
 * prefix-by-suffix junction matrix, which is SVD-compressed. Bond n thus has
 * dimension at most min(4^n, 4^(N-n), M). The tries depend only on the
 * strings, so the plan is built once and re-weighted every iteration.
 */
class PauliSumPlan {
 public:
  explicit PauliSumPlan(std::span<const PauliString> strings);

  std::size_t num_terms() const { return junction_row_.size(); }
  std::size_t num_sites() const { return n_sites_; }
  std::size_t junction() const { return cut_; }

  TTMatrix mpo(std::span<const double> weights) const;

 private:
  std::size_t n_sites_ = 0;
  std::size_t cut_ = 0;
  // Per bond n: number of distinct prefixes of length n (n <= cut_) or
  // suffixes of length N - n (n >= cut_).
  std::vector<Index> prefix_count_, suffix_count_;
  // Trie edges per site: (parent state, child state, letter).
  struct Edge {
    Index from, to;
    Pauli letter;
  };
  std::vector<std::vector<Edge>> edges_;
  std::vector<Index> junction_row_, junction_col_;
};

/// E applied to A core by core; the parallel twin splits over sites.
BlockTT apply_mpo_serial(const TTMatrix& e, const BlockTT& a);
BlockTT apply_mpo_parallel(const TTMatrix& e, const BlockTT& a);

/// sum_m weight_m * E_m A through the plan's operator, rounded once with
/// relative tolerance `tol`.
BlockTT pauli_sum_apply_mpo(const BlockTT& a, const PauliSumPlan& plan,
                            std::span<const double> weights, double tol, bool parallel);

/// G = W A with W = sum_m weight_m * E_m formed explicitly (D x D). The
/// parallel twin splits W by rows; each entry sums its terms in list order.
Matrix dense_pauli_sum_apply_serial(const Matrix& a, std::span<const PauliString> strings,
                                    std::span<const double> weights);
Matrix dense_pauli_sum_apply_parallel(const Matrix& a, std::span<const PauliString> strings,
                                      std::span<const double> weights);

/// Tr(E_m A A^H) for every string from rho = A A^H, O(D) each after the
/// O(D^2 R) product.
void dense_factor_measure_serial(const Matrix& a, std::span<const PauliString> strings,
                                 std::span<double> out);
void dense_factor_measure_parallel(const Matrix& a, std::span<const PauliString> strings,
                                   std::span<double> out);

}  // namespace ttqst::kernels
