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

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "ttqst/core.hpp"
#include "ttqst/linalg.hpp"

namespace ttqst {

/// Bond dimensions (R_0, ..., R_N) of an N-site chain.
using RankVector = std::vector<Index>;

/// (1, r, ..., r, 1) for an `n_sites` chain.
RankVector uniform_ranks(std::size_t n_sites, Index r);

enum class Orthogonality { none, left };

/**
 * Block tensor train: N cores, all order-3 (block extent 1) except the one at
 * `block_site()` which carries the extra index of extent K.
 *
 * Sites are numbered from 0. The tensor it represents has the D x K matrix
 * form A(i_1 ... i_N, k) with i_1 the slowest physical index; the block index
 * never takes part in the row ordering, so that form does not depend on where
 * the block core sits.
 *
 * The density operator is rho = A A^H.
 */
class BlockTT {
 public:
  BlockTT() = default;
  BlockTT(std::vector<Core> cores, std::size_t block_site,
          Orthogonality orth = Orthogonality::none);

  std::size_t num_sites() const { return cores_.size(); }
  std::size_t block_site() const { return block_site_; }
  Index block_dim() const { return cores_[block_site_].block(); }
  /// Product of the physical extents, i.e. the row count of the matrix form.
  Index dim() const;
  RankVector ranks() const;
  Orthogonality orthogonality() const { return orth_; }

  const Core& core(std::size_t n) const { return cores_[n]; }
  std::span<const Core> cores() const { return cores_; }

  friend bool operator==(const BlockTT&, const BlockTT&) = default;

 private:
  std::vector<Core> cores_;
  std::size_t block_site_ = 0;
  Orthogonality orth_ = Orthogonality::none;
};

/// TT-matrix (MPO): cores with extents (left, rows I_n, cols J_n, right).
class TTMatrix {
 public:
  TTMatrix() = default;
  explicit TTMatrix(std::vector<Core> cores);

  std::size_t num_sites() const { return cores_.size(); }
  RankVector ranks() const;
  Index row_dim() const;
  Index col_dim() const;

  const Core& core(std::size_t n) const { return cores_[n]; }
  std::span<const Core> cores() const { return cores_; }

 private:
  std::vector<Core> cores_;
};

struct TTSvdResult {
  BlockTT tt;
  /// sqrt of the summed squares of every discarded singular value.
  double truncation_error = 0.0;
};

/// Left-to-right QR sweep; the R factors travel right into the last core.
BlockTT left_orthogonalize(const BlockTT& a);

/// Max over non-final cores of ||U^H U - I||_F for the left unfolding U.
double left_orthogonality_error(const BlockTT& a);

/**
 * TT-SVD rounding of a block train.
 *
 * Ranks are capped by `max_ranks` (size N+1; the end entries are ignored) and
 * by a relative tolerance: each of the N-1 sequential truncations may discard
 * singular values whose root-sum-square is at most tol * ||a||_F / sqrt(N-1).
 * The result is left-orthogonal.
 */
TTSvdResult tt_svd(const BlockTT& a, const RankVector& max_ranks, double tol);

/**
 * TT-SVD of a dense tensor of order N+1 whose shape lists the physical extents
 * in site order with the block extent directly after the physical extent of
 * site `block_site`.
 */
TTSvdResult tt_svd(const DenseTensor& x, std::size_t block_site, const RankVector& max_ranks,
                   double tol, std::size_t limit = kDefaultDensifyLimit);

/// Exact sum; interior bond dims add.
BlockTT tt_add(const BlockTT& a, const BlockTT& b);
/// Exact sum of several trains sharing shape, block site and K.
BlockTT tt_add(std::span<const BlockTT> terms);

/// Multiplies the last core by `c`. Left-orthogonality is preserved.
BlockTT tt_scale(const BlockTT& a, Complex c);

/// Frobenius norm. Reads the last core when the train is left-orthogonal.
double frob_norm(const BlockTT& a);

/// <a, b> = sum conj(a) * b over all entries.
Complex inner(const BlockTT& a, const BlockTT& b);

/// Full (N+1)-order tensor in core index order.
DenseTensor densify(const BlockTT& a, std::size_t limit = kDefaultDensifyLimit);
/// Tensor with index order (i_1, j_1, i_2, j_2, ..., i_N, j_N).
DenseTensor densify(const TTMatrix& e, std::size_t limit = kDefaultDensifyLimit);

/// D x K matrix form of a block train.
Matrix to_matrix(const BlockTT& a, std::size_t limit = kDefaultDensifyLimit);
/// Row-dim x col-dim matrix of a TT-matrix, i_1 / j_1 slowest.
Matrix to_matrix(const TTMatrix& e, std::size_t limit = kDefaultDensifyLimit);

/// Shape of the dense tensor of an N-qubit block train.
std::vector<Index> block_tensor_shape(std::size_t n_sites, std::size_t block_site, Index k);
/// Rearranges a D x K matrix (D = 2^n_sites) into the dense block tensor.
DenseTensor block_tensor_from_matrix(const Matrix& a, std::size_t n_sites, std::size_t block_site,
                                     std::size_t limit = kDefaultDensifyLimit);

/// E applied to the physical indices of A. Bond dims multiply sitewise.
BlockTT apply_operator(const TTMatrix& e, const BlockTT& a);

enum class Direction { left, right };

/**
 * Moves the block index one site in `direction`: the block core is merged with
 * that neighbour and split again by an SVD truncated to `new_rank`.
 *
 * The rest of the chain is put into mixed canonical form around the merged
 * pair first, so the reported truncation error is the Frobenius error of the
 * whole tensor.
 */
TTSvdResult shift_block(const BlockTT& a, Direction direction, Index new_rank);

/// Cores with i.i.d. complex Gaussian entries, real and imaginary parts each
/// N(0, 1/2). Not normalized. Physical extent 2 on every site.
BlockTT random_block_tt(std::size_t n_sites, Index k, const RankVector& ranks,
                        std::size_t block_site, std::mt19937_64& rng);

}  // namespace ttqst
