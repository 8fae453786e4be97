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

#include <complex>
#include <cstdint>

#include <Eigen/Core>

namespace ttqst {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Row-major complex matrix. Core unfoldings are row-major views of the
/// C-ordered core storage, so this is the working matrix type of the library.
using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
/// Column-major complex matrix, used for dense operators and factors.
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

using RowMatrixMap = Eigen::Map<RowMatrix>;
using ConstRowMatrixMap = Eigen::Map<const RowMatrix>;

/// Thin SVD `m ≈ u * diag(s) * vh` truncated to at most `max_rank` values and
/// to the largest number of trailing values whose root-sum-square does not
/// exceed `abs_tol`. At least one singular triplet is always kept.
///
/// Columns of `u` are rephased so that their largest-magnitude entry is real
/// and positive; rows of `vh` absorb the conjugate phase.
struct TruncatedSvd {
  RowMatrix u;
  RealVector s;
  RowMatrix vh;
  double discarded_sq = 0.0;  ///< sum of squares of dropped singular values
};

TruncatedSvd truncated_svd(const RowMatrix& m, Index max_rank, double abs_tol);

/// Thin QR `m = q * r` with `q` having orthonormal columns.
/// `q` has min(rows, cols) columns.
void thin_qr(const RowMatrix& m, RowMatrix& q, RowMatrix& r);

}  // namespace ttqst
