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

#include "ttqst/dense_baseline.hpp"
#include "ttqst/tt_core.hpp"

namespace ttqst {

/// Largest |rho - rho^H| entry accepted as Hermitian.
inline constexpr double kHermitianTolerance = 1e-10;

struct DensityMatrix {
  Matrix rho;               ///< Hermitian, unit trace
  double raw_trace = 1.0;   ///< trace before normalization
};

/// Symmetrizes and normalizes an explicit matrix. Throws ShapeError for a
/// non-square or non-Hermitian input and NumericalError for zero trace.
DensityMatrix make_density(const Matrix& rho);

/// A A^H from the densified factor, symmetrized and normalized.
DensityMatrix densify_state(const BlockTT& a, std::size_t limit = kDefaultDensifyLimit);
DensityMatrix densify_state(const DenseFactor& f);

struct Fidelity {
  double raw = 0.0;
  double clamped = 0.0;  ///< raw clipped to [0, 1]
};

/// (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2. Eigenvalues below round-off level,
/// negative ones included, are clamped to 0 before taking square roots.
Fidelity fidelity(const DensityMatrix& r1, const DensityMatrix& r2);

/// 1/2 sum |eig(r1 - r2)|.
double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2);

/// ||r1 - r2||_F / ||r2||_F.
double relative_error(const DensityMatrix& r1, const DensityMatrix& r2);

}  // namespace ttqst
