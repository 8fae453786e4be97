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

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <doctest.h>

#include "oracles.hpp"
#include "ttqst/errors.hpp"
#include "ttqst/measurement.hpp"

using namespace ttqst;

namespace {

BlockTT zero_state(std::size_t n) {
  std::vector<Core> cores;
  for (std::size_t s = 0; s < n; ++s) {
    Core c(1, 2, 1, 1);
    c(0, 0, 0, 0) = 1.0;
    cores.push_back(c);
  }
  return BlockTT(cores, n - 1);
}

PauliString random_string(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << (2 * n)) - 1);
  return PauliString::from_index(pick(rng), n);
}

}  // namespace

TEST_CASE("expectation_tt") {
  SUBCASE("eigenstate") {
    CHECK(expectation_tt(zero_state(4), pauli_ttm(PauliString::parse("ZZZZ"))) == 1.0);
  }
  SUBCASE("single flip") {
    CHECK(expectation_tt(zero_state(4), PauliString::parse("IZXI")) == 0.0);
  }
  SUBCASE("random state against the dense trace") {
    std::mt19937_64 rng(1);
    const BlockTT a = oracle::random_tt(4, 2, 2, 2, 5);
    const Matrix a_rows = oracle::tt_rows(a);
    const Matrix rho = a_rows * a_rows.adjoint();
    for (int t = 0; t < 20; ++t) {
      const PauliString p = random_string(4, rng);
      const double want = oracle::trace_value(rho, p);
      CHECK(std::abs(expectation_tt(a, p) - want) < 1e-10);
      CHECK(std::abs(expectation_tt(a, pauli_ttm(p)) - want) < 1e-10);
      CHECK(std::abs(pauli_trace(rho, p) - want) < 1e-10);
      CHECK(std::abs(dense_expectation(rho, pauli_dense(p)) - want) < 1e-10);
    }
  }
  SUBCASE("many random pairs up to six qubits") {
    std::mt19937_64 rng(2);
    double worst = 0.0;
    for (int t = 0; t < 120; ++t) {
      const std::size_t n = 1 + t % 6;
      const Index k = 1 + t % 3;
      const BlockTT a = oracle::random_tt(n, k, 1 + t % 4, t % n, 100 + t);
      const Matrix ar = oracle::tt_rows(a);
      const PauliString p = random_string(n, rng);
      worst = std::max(worst, std::abs(expectation_tt(a, p) - oracle::trace_value(ar * ar.adjoint(), p)));
    }
    CHECK(worst < 1e-10);
  }
  SUBCASE("quadratic scaling") {
    const BlockTT a = oracle::random_tt(5, 2, 3, 3, 6);
    const PauliString p = PauliString::parse("XZIYY");
    const double c = 2.7;
    CHECK(expectation_tt(tt_scale(a, std::sqrt(c)), p) ==
          doctest::Approx(c * expectation_tt(a, p)).epsilon(1e-12));
  }
  SUBCASE("non-Hermitian operator is rejected") {
    std::vector<Core> cores(1, Core(1, 2, 2, 1));
    cores[0](0, 0, 1, 0) = Complex(0.0, 1.0);
    const BlockTT a = oracle::random_tt(1, 1, 1, 0, 7);
    CHECK_THROWS_AS(expectation_tt(a, TTMatrix(cores)), NumericalError);
  }
}

TEST_CASE("measure_all") {
  SUBCASE("basis state over the full set") {
    // |010>: exactly the 8 strings over {I, Z} have nonzero value, each +-1.
    std::vector<Core> cores;
    for (int b : {0, 1, 0}) {
      Core c(1, 2, 1, 1);
      c(0, b, 0, 0) = 1.0;
      cores.push_back(c);
    }
    const BlockTT a(cores, 2);
    const PauliSet full = full_pauli_set(3);
    const auto v = measure_all(a, full);
    int nonzero = 0;
    for (std::size_t m = 0; m < v.size(); ++m) {
      if (v[m] != 0.0) {
        ++nonzero;
        CHECK(std::abs(v[m]) == 1.0);
        CHECK(full.strings[m].x_mask() == 0);
      }
    }
    CHECK(nonzero == 8);
  }
  SUBCASE("empty set") {
    CHECK(measure_all(zero_state(3), std::span<const PauliString>{}).empty());
  }
  SUBCASE("dense vector at three qubits") {
    const BlockTT a = oracle::random_tt(3, 2, 2, 1, 9);
    const Matrix ar = oracle::tt_rows(a);
    const Matrix rho = ar * ar.adjoint();
    const PauliSet full = full_pauli_set(3);
    const auto v = measure_all(a, full);
    const auto vd = measure_all_dense(rho, full.strings);
    for (std::size_t m = 0; m < v.size(); ++m) {
      const double want = oracle::trace_value(rho, full.strings[m]);
      CHECK(std::abs(v[m] - want) < 1e-10);
      CHECK(std::abs(vd[m] - want) < 1e-10);
    }
  }
  SUBCASE("serial and parallel agree bitwise") {
    const BlockTT a = oracle::random_tt(6, 2, 3, 4, 10);
    const PauliSet s = sample_pauli_set(6, 300, 11);
    CHECK(measure_all(a, s, Execution::serial) == measure_all(a, s, Execution::parallel));
  }
}

TEST_CASE("contraction cost grows linearly in N") {
  std::vector<double> ns, counts;
  for (std::size_t n = 4; n <= 12; ++n) {
    const BlockTT a = oracle::random_tt(n, 2, 2, n - 2, 200 + n);
    std::string word(n, 'X');
    word[0] = 'Y';
    ns.push_back(static_cast<double>(n));
    counts.push_back(static_cast<double>(expectation_fma_count(a, PauliString::parse(word))));
  }
  // Least-squares line through (n, count) must explain the data exactly up
  // to edge effects.
  const double mn = std::accumulate(ns.begin(), ns.end(), 0.0) / ns.size();
  const double mc = std::accumulate(counts.begin(), counts.end(), 0.0) / counts.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sxy += (ns[i] - mn) * (counts[i] - mc);
    sxx += (ns[i] - mn) * (ns[i] - mn);
    syy += (counts[i] - mc) * (counts[i] - mc);
  }
  const double r2 = sxy * sxy / (sxx * syy);
  CHECK(r2 > 0.999);
  // Doubling N from 6 to 12 roughly doubles the work.
  CHECK(counts[8] / counts[2] < 2.5);
}

TEST_CASE("add_noise") {
  const PauliSet s = sample_pauli_set(4, 40, 3);
  const BlockTT a = oracle::random_tt(4, 2, 2, 2, 12);
  const auto clean = measure_all(left_orthogonalize(a), s);
  SUBCASE("infinite SNR is exact") {
    const auto rec = add_noise(s.strings, clean, {});
    for (std::size_t m = 0; m < rec.size(); ++m) {
      CHECK(rec[m].y == clean[m]);
      CHECK(rec[m].clean == clean[m]);
      CHECK(rec[m].pauli == s.strings[m]);
    }
  }
  SUBCASE("deterministic") {
    const auto r1 = add_noise(s.strings, clean, {40.0, 5});
    const auto r2 = add_noise(s.strings, clean, {40.0, 5});
    for (std::size_t m = 0; m < r1.size(); ++m) CHECK(r1[m].y == r2[m].y);
    CHECK(r1[0].y != clean[0]);
  }
  SUBCASE("empirical SNR") {
    const std::size_t m = 100000;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(m);
    for (auto& v : x) v = u(rng);
    const std::vector<PauliString> strings(m, PauliString::parse("Z"));
    const auto rec = add_noise(strings, x, {60.0, 8});
    double signal = 0, noise = 0;
    for (std::size_t i = 0; i < m; ++i) {
      signal += x[i] * x[i];
      noise += (rec[i].y - x[i]) * (rec[i].y - x[i]);
    }
    CHECK(std::abs(10.0 * std::log10(signal / noise) - 60.0) < 0.5);
  }
  SUBCASE("all-zero signal") {
    const std::vector<double> zeros(s.size(), 0.0);
    CHECK_THROWS_AS(add_noise(s.strings, zeros, {60.0, 1}), ConfigError);
    CHECK_THROWS_AS(add_noise({}, {}, {}), ConfigError);
  }
}

TEST_CASE("measurement CSV") {
  const PauliSet s = sample_pauli_set(3, 10, 3);
  const BlockTT a = left_orthogonalize(oracle::random_tt(3, 2, 2, 1, 13));
  const auto rec = add_noise(s.strings, measure_all(a, s), {30.0, 2});
  std::stringstream buf;
  write_measurements_csv(buf, rec);
  CHECK(buf.str().rfind("index,pauli,clean,y\n", 0) == 0);
  const auto back = read_measurements_csv(buf);
  REQUIRE(back.size() == rec.size());
  for (std::size_t m = 0; m < rec.size(); ++m) {
    CHECK(back[m].pauli == rec[m].pauli);
    CHECK(back[m].y == rec[m].y);
    CHECK(back[m].clean == rec[m].clean);
  }
}
