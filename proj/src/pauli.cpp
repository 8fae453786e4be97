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

#include "ttqst/pauli.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

#include <unsupported/Eigen/KroneckerProduct>

#include "ttqst/errors.hpp"

namespace ttqst {

std::array<Complex, 4> pauli_entries(Pauli p) {
  using namespace std::complex_literals;
  switch (p) {
    case Pauli::I: return {1.0, 0.0, 0.0, 1.0};
    case Pauli::X: return {0.0, 1.0, 1.0, 0.0};
    case Pauli::Y: return {0.0, -1.0i, 1.0i, 0.0};
    case Pauli::Z: return {1.0, 0.0, 0.0, -1.0};
  }
  return {};
}

PauliString::PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {
  if (letters_.size() > kMaxPauliQubits) throw ConfigError("Pauli string too long");
}

PauliString PauliString::parse(std::string_view word) {
  std::vector<Pauli> letters;
  letters.reserve(word.size());
  for (char c : word) {
    switch (c) {
      case 'I': letters.push_back(Pauli::I); break;
      case 'X': letters.push_back(Pauli::X); break;
      case 'Y': letters.push_back(Pauli::Y); break;
      case 'Z': letters.push_back(Pauli::Z); break;
      default: throw ConfigError("invalid Pauli letter '" + std::string(1, c) + "'");
    }
  }
  return PauliString(std::move(letters));
}

PauliString PauliString::from_index(std::uint64_t index, std::size_t n_qubits) {
  if (n_qubits > kMaxPauliQubits) throw ConfigError("too many qubits for a Pauli index");
  if (n_qubits < 32 && index >> (2 * n_qubits) != 0) throw ConfigError("Pauli index out of range");
  std::vector<Pauli> letters(n_qubits);
  for (std::size_t j = n_qubits; j-- > 0;) {
    letters[j] = static_cast<Pauli>(index & 3u);
    index >>= 2;
  }
  return PauliString(std::move(letters));
}

std::uint64_t PauliString::index() const {
  std::uint64_t idx = 0;
  for (Pauli p : letters_) idx = (idx << 2) | static_cast<std::uint64_t>(p);
  return idx;
}

std::string PauliString::str() const {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  s.reserve(letters_.size());
  for (Pauli p : letters_) s.push_back(kLetters[static_cast<int>(p)]);
  return s;
}

bool PauliString::is_identity() const {
  for (Pauli p : letters_)
    if (p != Pauli::I) return false;
  return true;
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  for (Pauli p : letters_) m = (m << 1) | static_cast<std::uint64_t>(p == Pauli::X || p == Pauli::Y);
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  for (Pauli p : letters_) m = (m << 1) | static_cast<std::uint64_t>(p == Pauli::Z || p == Pauli::Y);
  return m;
}

int PauliString::y_count() const {
  int n = 0;
  for (Pauli p : letters_) n += p == Pauli::Y;
  return n;
}

Matrix pauli_dense(const PauliString& p, std::size_t limit) {
  const Index d = Index{1} << p.size();
  const std::vector<Index> shape = {d, d};
  check_dense_size(shape, limit);
  Matrix out = Matrix::Identity(1, 1);
  for (Pauli letter : p.letters()) {
    const auto e = pauli_entries(letter);
    Matrix s(2, 2);
    s << e[0], e[1], e[2], e[3];
    Matrix next = Eigen::kroneckerProduct(out, s).eval();
    out = std::move(next);
  }
  return out;
}

TTMatrix pauli_ttm(const PauliString& p) {
  if (p.size() == 0) throw ShapeError("empty Pauli string");
  // Core n carries letter n. Our matrix form orders rows with i_1 slowest,
  // which is exactly the Kronecker order, so no reversal is needed here; a
  // first-index-fastest layout would place letter N+1-n in core n instead.
  std::vector<Core> cores;
  cores.reserve(p.size());
  for (Pauli letter : p.letters()) {
    const auto e = pauli_entries(letter);
    Core c(1, 2, 2, 1);
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j) c(0, i, j, 0) = e[static_cast<std::size_t>(2 * i + j)];
    cores.push_back(std::move(c));
  }
  return TTMatrix(std::move(cores));
}

PauliSet full_pauli_set(std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > 12) throw ConfigError("full enumeration supports 1..12 qubits");
  PauliSet set{n_qubits, 0, {}};
  const std::uint64_t total = std::uint64_t{1} << (2 * n_qubits);
  set.strings.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) set.strings.push_back(PauliString::from_index(i, n_qubits));
  return set;
}

PauliSet sample_pauli_set(std::size_t n_qubits, std::size_t m, std::uint64_t seed,
                          bool allow_identity) {
  if (n_qubits == 0 || n_qubits > kMaxPauliQubits) throw ConfigError("unsupported qubit count");
  const std::uint64_t offset = allow_identity ? 0 : 1;
  const std::uint64_t population = (std::uint64_t{1} << (2 * n_qubits)) - offset;
  if (m > population) {
    throw ConfigError("cannot draw " + std::to_string(m) + " distinct strings from " +
                      std::to_string(population));
  }
  // Partial Fisher-Yates over the implicit array [0, population), with only
  // the displaced slots kept in a map.
  std::mt19937_64 rng(seed);
  std::unordered_map<std::uint64_t, std::uint64_t> moved;
  auto slot = [&](std::uint64_t i) {
    auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  PauliSet set{n_qubits, seed, {}};
  set.strings.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::uint64_t> pick(i, population - 1);
    const std::uint64_t j = pick(rng);
    const std::uint64_t vi = slot(i);
    const std::uint64_t vj = slot(j);
    moved[j] = vi;
    moved[i] = vj;
    set.strings.push_back(PauliString::from_index(vj + offset, n_qubits));
  }
  return set;
}

void write_pauli_set(std::ostream& out, const PauliSet& set) {
  out << "# n_qubits=" << set.n_qubits << " seed=" << set.seed << '\n';
  for (const auto& p : set.strings) out << p.str() << '\n';
}

PauliSet read_pauli_set(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty Pauli set file");
  PauliSet set;
  {
    std::istringstream header(line);
    std::string hash, nq, sd;
    header >> hash >> nq >> sd;
    if (hash != "#" || nq.rfind("n_qubits=", 0) != 0 || sd.rfind("seed=", 0) != 0) {
      throw FormatError("bad Pauli set header: " + line);
    }
    try {
      set.n_qubits = std::stoul(nq.substr(9));
      set.seed = std::stoull(sd.substr(5));
    } catch (const std::exception&) {
      throw FormatError("bad Pauli set header: " + line);
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    PauliString p = PauliString::parse(line);
    if (p.size() != set.n_qubits) throw FormatError("Pauli word length differs from n_qubits");
    set.strings.push_back(std::move(p));
  }
  return set;
}

void save_pauli_set(const std::filesystem::path& path, const PauliSet& set) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_pauli_set(out, set);
}

PauliSet load_pauli_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_pauli_set(in);
}

}  // namespace ttqst
