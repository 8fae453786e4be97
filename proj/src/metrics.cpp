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

#include "ttqst/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ttqst/errors.hpp"

namespace ttqst {

namespace {

void check_pair(const DensityMatrix& r1, const DensityMatrix& r2) {
  if (r1.rho.rows() != r2.rho.rows() || r1.rho.cols() != r2.rho.cols()) {
    throw ShapeError("density matrices differ in dimension");
  }
}

// B with rho = B B^H, from the eigenpairs above a round-off cutoff. Square
// roots of eigenvalues at the 1e-16 level would otherwise contribute 1e-8.
Matrix psd_factor(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  const RealVector& lam = es.eigenvalues();
  const double cutoff = std::max(lam.maxCoeff(), 0.0) * static_cast<double>(rho.rows()) *
                        std::numeric_limits<double>::epsilon();
  Index first = 0;
  while (first < lam.size() && lam(first) <= cutoff) ++first;
  const Index kept = lam.size() - first;
  return es.eigenvectors().rightCols(kept) * lam.tail(kept).cwiseSqrt().asDiagonal();
}

}  // namespace

DensityMatrix make_density(const Matrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw ShapeError("density matrix must be square");
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance * std::max(1.0, rho.cwiseAbs().maxCoeff())) {
    throw ShapeError("matrix is not Hermitian (deviation " + std::to_string(asym) + ")");
  }
  DensityMatrix out;
  out.rho = 0.5 * (rho + rho.adjoint());
  out.raw_trace = out.rho.trace().real();
  if (!(out.raw_trace > 0.0) || !std::isfinite(out.raw_trace)) {
    throw NumericalError("density matrix has non-positive trace");
  }
  out.rho /= out.raw_trace;
  return out;
}

DensityMatrix densify_state(const BlockTT& a, std::size_t limit) {
  const Matrix m = to_matrix(a, limit);
  return make_density(m * m.adjoint());
}

DensityMatrix densify_state(const DenseFactor& f) { return make_density(f.a * f.a.adjoint()); }

Fidelity fidelity(const DensityMatrix& r1, const DensityMatrix& r2) {
  check_pair(r1, r2);
  // Tr sqrt(sqrt(r1) r2 sqrt(r1)) is the nuclear norm of B1^H B2.
  const Matrix b1 = psd_factor(r1.rho);
  const Matrix b2 = psd_factor(r2.rho);
  double root_sum = 0.0;
  if (b1.cols() > 0 && b2.cols() > 0) {
    Eigen::JacobiSVD<Matrix> svd(b1.adjoint() * b2);
    root_sum = svd.singularValues().sum();
  }
  Fidelity f;
  f.raw = root_sum * root_sum;
  f.clamped = std::clamp(f.raw, 0.0, 1.0);
  return f;
}

double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
  check_pair(r1, r2);
  const Matrix diff = r1.rho - r2.rho;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double relative_error(const DensityMatrix& r1, const DensityMatrix& r2) {
  check_pair(r1, r2);
  return (r1.rho - r2.rho).norm() / r2.rho.norm();
}

}  // namespace ttqst
