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

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ttqst/core.hpp"
#include "ttqst/tt_core.hpp"

namespace ttqst {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Largest register whose 4^N enumeration index fits in 64 bits.
inline constexpr std::size_t kMaxPauliQubits = 31;

/// Row-major 2x2 entries of a single-qubit Pauli matrix.
std::array<Complex, 4> pauli_entries(Pauli p);

/**
 * Word over {I, X, Y, Z}. The enumeration index reads the word as a base-4
 * number with I=0, X=1, Y=2, Z=3 and the first letter most significant.
 */
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> letters);

  /// Parses a word over "IXYZ". Throws ConfigError on other characters.
  static PauliString parse(std::string_view word);
  static PauliString from_index(std::uint64_t index, std::size_t n_qubits);

  std::size_t size() const { return letters_.size(); }
  Pauli operator[](std::size_t j) const { return letters_[j]; }
  const std::vector<Pauli>& letters() const { return letters_; }

  std::uint64_t index() const;
  std::string str() const;
  bool is_identity() const;

  // Bit masks over basis-state labels, qubit 1 in the most significant bit:
  // E |b> = i^{#Y} (-1)^{popcount(b & z_mask)} |b ^ x_mask>.
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;
  int y_count() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  std::vector<Pauli> letters_;
};

struct PauliSet {
  std::size_t n_qubits = 0;
  std::uint64_t seed = 0;
  std::vector<PauliString> strings;

  std::size_t size() const { return strings.size(); }
};

/// Kronecker product of the single-qubit matrices in letter order.
Matrix pauli_dense(const PauliString& p, std::size_t limit = kDefaultDensifyLimit);

/// Rank-1 TT-matrix whose matrix form equals pauli_dense(p).
TTMatrix pauli_ttm(const PauliString& p);

/// All 4^N strings in index order.
PauliSet full_pauli_set(std::size_t n_qubits);

/**
 * `m` distinct strings drawn uniformly without replacement, in draw order.
 * Deterministic in `seed`. With `allow_identity == false` the all-I string is
 * excluded from the population. Throws ConfigError when m exceeds the
 * population size.
 */
PauliSet sample_pauli_set(std::size_t n_qubits, std::size_t m, std::uint64_t seed,
                          bool allow_identity = true);

/// Text format: "# n_qubits=<N> seed=<seed>" then one word per line.
void write_pauli_set(std::ostream& out, const PauliSet& set);
PauliSet read_pauli_set(std::istream& in);
void save_pauli_set(const std::filesystem::path& path, const PauliSet& set);
PauliSet load_pauli_set(const std::filesystem::path& path);

}  // namespace ttqst
