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
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ttqst/parallel.hpp"
#include "ttqst/pauli.hpp"
#include "ttqst/tt_core.hpp"

namespace ttqst {

/// Largest tolerated |Im <rho, E>| relative to max(1, |Re <rho, E>|).
inline constexpr double kImaginaryTolerance = 1e-10;

/**
 * <rho, E> = Tr(A A^H E) for rho = A A^H, without forming rho.
 *
 * The bra train is first contracted with the operator over their shared
 * physical modes, and the result with the ket train; both happen site by site
 * from the right end, so the cost is linear in N for fixed ranks.
 *
 * Throws NumericalError when the imaginary part exceeds kImaginaryTolerance.
 */
double expectation_tt(const BlockTT& a, const TTMatrix& e);

/// Same contraction specialised to a rank-1 Pauli operator.
double expectation_tt(const BlockTT& a, const PauliString& p);

/// Complex multiply-adds performed by the Pauli contraction for (a, p).
std::uint64_t expectation_fma_count(const BlockTT& a, const PauliString& p);

/// expectation_tt for every string, in set order.
std::vector<double> measure_all(const BlockTT& a, std::span<const PauliString> strings,
                                Execution exec = Execution::parallel);
inline std::vector<double> measure_all(const BlockTT& a, const PauliSet& set,
                                       Execution exec = Execution::parallel) {
  return measure_all(a, std::span<const PauliString>(set.strings), exec);
}

/// Tr(rho E) from explicit matrices, O(D^2).
double dense_expectation(const Matrix& rho, const Matrix& e);

/// Dense measurement map: materializes every Pauli matrix and takes the trace.
std::vector<double> measure_all_dense(const Matrix& rho, std::span<const PauliString> strings,
                                      Execution exec = Execution::parallel);

/// Tr(rho E) for a Pauli string using its bit-mask action, O(D).
double pauli_trace(const Matrix& rho, const PauliString& p);

struct NoiseSpec {
  /// +infinity disables noise.
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

struct MeasurementRecord {
  PauliString pauli;
  double y = 0.0;
  std::optional<double> clean;
};

/**
 * y_m = clean_m + g_m with g_m ~ N(0, sigma^2) i.i.d. and
 * sigma^2 = (||clean||^2 / M) * 10^(-snr_db / 10). One sequential RNG stream.
 *
 * Throws ConfigError for an empty list, a size mismatch with `strings`, or an
 * all-zero clean vector with finite SNR.
 */
std::vector<MeasurementRecord> add_noise(std::span<const PauliString> strings,
                                         std::span<const double> clean, const NoiseSpec& spec);

/// Records with y = clean.
std::vector<MeasurementRecord> noiseless_records(std::span<const PauliString> strings,
                                                 std::span<const double> clean);

/// CSV with header `index,pauli,clean,y`; floats with 17 significant digits,
/// an empty clean field when unknown.
void write_measurements_csv(std::ostream& out, std::span<const MeasurementRecord> records);
std::vector<MeasurementRecord> read_measurements_csv(std::istream& in);
void save_measurements_csv(const std::filesystem::path& path,
                           std::span<const MeasurementRecord> records);
std::vector<MeasurementRecord> load_measurements_csv(const std::filesystem::path& path);

}  // namespace ttqst
