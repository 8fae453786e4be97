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

// Serial and parallel twins must agree bitwise; ctest runs this binary with
// several OpenMP threads so the comparison is not vacuous on small machines.

#include <algorithm>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "ttqst/kernels.hpp"
#include "ttqst/measurement.hpp"

using namespace ttqst;

namespace {

std::vector<double> random_weights(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> w(m);
  for (auto& v : w) v = g(rng);
  return w;
}

Matrix oracle_sum(const PauliSet& s, const std::vector<double>& w) {
  const Index d = Index{1} << s.n_qubits;
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t m = 0; m < s.size(); ++m) out += w[m] * oracle::pauli_kron(s.strings[m]);
  return out;
}

bool same_cores(const BlockTT& a, const BlockTT& b) {
  if (a.num_sites() != b.num_sites() || a.block_site() != b.block_site()) return false;
  for (std::size_t s = 0; s < a.num_sites(); ++s)
    if (!(a.core(s) == b.core(s))) return false;
  return true;
}

}  // namespace

TEST_CASE("threads are available") { CHECK(available_threads() >= 1); }

TEST_CASE("expectation kernels") {
  const BlockTT a = oracle::random_tt(6, 2, 3, 4, 1);
  const PauliSet s = sample_pauli_set(6, 500, 2);
  std::vector<Complex> ser(s.size()), par(s.size());
  kernels::measure_all_serial(a, s.strings, ser);
  kernels::measure_all_parallel(a, s.strings, par);
  CHECK(ser == par);

  const Matrix ar = oracle::tt_rows(a);
  const Matrix rho = ar * ar.adjoint();
  std::vector<double> dser(s.size()), dpar(s.size());
  kernels::measure_all_dense_serial(rho, s.strings, dser);
  kernels::measure_all_dense_parallel(rho, s.strings, dpar);
  CHECK(dser == dpar);
  for (std::size_t m = 0; m < s.size(); m += 25) {
    const double want = oracle::trace_value(rho, s.strings[m]);
    CHECK(std::abs(ser[m].real() - want) < 1e-10);
    CHECK(std::abs(ser[m].imag()) < 1e-10);
    CHECK(std::abs(dser[m] - want) < 1e-10);
  }
}

TEST_CASE("single Pauli action") {
  const BlockTT a = oracle::random_tt(4, 2, 2, 2, 3);
  const PauliString p = PauliString::parse("YXZY");
  const BlockTT b = kernels::apply_pauli(a, p, Complex(0.5, -2.0));
  CHECK(b.ranks() == a.ranks());
  const Matrix want = Complex(0.5, -2.0) * oracle::pauli_kron(p) * oracle::tt_rows(a);
  CHECK(oracle::rel_err(to_matrix(b), want) < 1e-13);
}

TEST_CASE("weighted Pauli sums") {
  const std::size_t n = 4;
  const BlockTT a = oracle::random_tt(n, 2, 2, n - 2, 4);
  const PauliSet s = sample_pauli_set(n, 90, 5);
  const auto w = random_weights(s.size(), 6);
  const Matrix want = oracle_sum(s, w) * oracle::tt_rows(a);

  SUBCASE("direct sum") {
    CHECK(oracle::rel_err(to_matrix(kernels::weighted_pauli_sum(a, s.strings, w, 0.0)), want) <
          1e-12);
  }
  SUBCASE("batched tree") {
    for (std::size_t batch : {1, 7, 32, 90}) {
      const BlockTT ser = kernels::pauli_sum_apply_serial(a, s.strings, w, batch, 1e-14);
      const BlockTT par = kernels::pauli_sum_apply_parallel(a, s.strings, w, batch, 1e-14);
      CHECK(same_cores(ser, par));
      CHECK(oracle::rel_err(to_matrix(ser), want) < 1e-12);
    }
  }
  SUBCASE("operator plan") {
    const kernels::PauliSumPlan plan(s.strings);
    CHECK(plan.num_terms() == s.size());
    const TTMatrix e = plan.mpo(w);
    CHECK(oracle::rel_err(oracle::ttm_rows(e), oracle_sum(s, w)) < 1e-12);
    const auto ranks = e.ranks();
    for (std::size_t b = 0; b <= n; ++b) {
      const Index cap = std::min<Index>({Index{1} << (2 * b), Index{1} << (2 * (n - b)),
                                         static_cast<Index>(s.size())});
      CHECK(ranks[b] <= cap);
    }
    const BlockTT ser = kernels::apply_mpo_serial(e, a);
    const BlockTT par = kernels::apply_mpo_parallel(e, a);
    CHECK(same_cores(ser, par));
    CHECK(oracle::rel_err(to_matrix(ser), want) < 1e-12);

    const BlockTT rs = kernels::pauli_sum_apply_mpo(a, plan, w, 1e-14, false);
    const BlockTT rp = kernels::pauli_sum_apply_mpo(a, plan, w, 1e-14, true);
    CHECK(same_cores(rs, rp));
    CHECK(oracle::rel_err(to_matrix(rs), want) < 1e-12);
  }
  SUBCASE("plan with repeated prefixes and a single term") {
    const std::vector<PauliString> one{PauliString::parse("XYZI")};
    const std::vector<double> w1{-1.5};
    const kernels::PauliSumPlan plan(one);
    const TTMatrix e = plan.mpo(w1);
    for (Index r : e.ranks()) CHECK(r == 1);
    CHECK(oracle::rel_err(oracle::ttm_rows(e), -1.5 * oracle::pauli_kron(one[0])) < 1e-14);
  }
}

TEST_CASE("dense factor kernels") {
  const std::size_t n = 5;
  std::mt19937_64 rng(7);
  const Matrix a = oracle::ginibre(Index{1} << n, 3, rng);
  const PauliSet s = sample_pauli_set(n, 200, 8);
  const auto w = random_weights(s.size(), 9);

  const Matrix ser = kernels::dense_pauli_sum_apply_serial(a, s.strings, w);
  const Matrix par = kernels::dense_pauli_sum_apply_parallel(a, s.strings, w);
  CHECK(ser == par);
  CHECK(oracle::rel_err(ser, oracle_sum(s, w) * a) < 1e-12);

  std::vector<double> ms(s.size()), mp(s.size());
  kernels::dense_factor_measure_serial(a, s.strings, ms);
  kernels::dense_factor_measure_parallel(a, s.strings, mp);
  CHECK(ms == mp);
  const Matrix rho = a * a.adjoint();
  for (std::size_t m = 0; m < s.size(); ++m) {
    CHECK(std::abs(ms[m] - oracle::trace_value(rho, s.strings[m])) < 1e-10 * rho.norm());
  }
}
