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

#include "ttqst/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace ttqst {

namespace {

// Singular values below this fraction of the largest one are numerical zeros
// and are always dropped.
constexpr double kRelativeZero = 1e-14;

}  // namespace

TruncatedSvd truncated_svd(const RowMatrix& m, Index max_rank, double abs_tol) {
  TruncatedSvd out;
  const Index full = std::min(m.rows(), m.cols());
  if (full == 0) {
    out.u = RowMatrix::Zero(m.rows(), 1);
    out.s = RealVector::Zero(1);
    out.vh = RowMatrix::Zero(1, m.cols());
    return out;
  }

  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();

  // Largest count of trailing values that fit inside the tolerance budget.
  Index keep = full;
  double tail = 0.0;
  const double budget = abs_tol * abs_tol;
  while (keep > 1) {
    const double next = tail + sv(keep - 1) * sv(keep - 1);
    if (next > budget) break;
    tail = next;
    --keep;
  }
  while (keep > 1 && sv(keep - 1) <= kRelativeZero * sv(0)) --keep;
  keep = std::clamp<Index>(std::min(keep, max_rank), 1, full);

  out.discarded_sq = 0.0;
  for (Index i = keep; i < full; ++i) out.discarded_sq += sv(i) * sv(i);

  out.u = svd.matrixU().leftCols(keep);
  out.s = sv.head(keep);
  out.vh = svd.matrixV().leftCols(keep).adjoint();

  for (Index c = 0; c < keep; ++c) {
    Index arg = 0;
    double best = -1.0;
    for (Index r = 0; r < out.u.rows(); ++r) {
      const double a = std::abs(out.u(r, c));
      // strict comparison with a small slack keeps the first of near-ties
      if (a > best * (1.0 + 1e-12)) {
        best = a;
        arg = r;
      }
    }
    if (best <= 0.0) continue;
    const Complex phase = std::conj(out.u(arg, c)) / best;
    out.u.col(c) *= phase;
    out.vh.row(c) *= std::conj(phase);
  }
  return out;
}

void thin_qr(const RowMatrix& m, RowMatrix& q, RowMatrix& r) {
  const Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Matrix> qr(m);
  q = qr.householderQ() * Matrix::Identity(m.rows(), k);
  r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  // Unique form: real nonnegative diagonal of r.
  for (Index i = 0; i < k; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag == 0.0) continue;
    const Complex phase = r(i, i) / mag;
    r.row(i) *= std::conj(phase);
    q.col(i) *= phase;
  }
}

}  // namespace ttqst
