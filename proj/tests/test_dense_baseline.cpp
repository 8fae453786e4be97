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
#include <sstream>

#include <doctest.h>

#include "oracles.hpp"
#include "ttqst/dense_baseline.hpp"
#include "ttqst/errors.hpp"

using namespace ttqst;

TEST_CASE("dense objective oracle") {
  SUBCASE("zero factor, no measurements") {
    const PauliSet empty{3, 0, {}};
    const DenseFactor z{Matrix::Zero(8, 2)};
    const auto out = dense_objective_oracle(z, {}, empty);
    CHECK(out.value == 0.0);
    CHECK(out.gradient.norm() == 0.0);
  }
  SUBCASE("agrees with the block-train objective") {
    const BlockTT a = oracle::random_tt(4, 2, 2, 2, 1);
    const PauliSet s = sample_pauli_set(4, 70, 2);
    const auto y = measure_all(oracle::random_tt(4, 2, 2, 2, 3), s);
    const auto rec = oracle::records(s.strings, y);
    const DenseFactor f{to_matrix(a)};
    const double tt = objective(a, rec, s);
    CHECK(dense_objective_oracle(f, rec, s).value == doctest::Approx(tt).epsilon(1e-10));
    CHECK(lr_objective(f, rec, s) == doctest::Approx(tt).epsilon(1e-10));
  }
  SUBCASE("gradient against finite differences") {
    std::mt19937_64 rng(4);
    const Matrix a = 0.4 * oracle::ginibre(8, 3, rng);
    const PauliSet s = sample_pauli_set(3, 25, 5);
    std::normal_distribution<double> g(0.0, 0.2);
    std::vector<double> y(s.size());
    for (auto& v : y) v = g(rng);
    const auto rec = oracle::records(s.strings, y);
    const auto out = dense_objective_oracle({a}, rec, s);
    const Matrix fd = oracle::fd_gradient(
        a, [&](const Matrix& x) { return dense_objective_oracle({x}, rec, s).value; }, 1e-5);
    CHECK(oracle::rel_err(out.gradient, fd) < 1e-6);
    CHECK(oracle::rel_err(lr_gradient({a}, rec, s), out.gradient) < 1e-12);
    CHECK(oracle::rel_err(out.gradient, oracle::dense_grad(a, s.strings, y)) < 1e-12);
  }
  SUBCASE("serial and parallel agree bitwise") {
    std::mt19937_64 rng(6);
    const Matrix a = oracle::ginibre(64, 4, rng);
    const PauliSet s = sample_pauli_set(6, 300, 7);
    const auto y = std::vector<double>(s.size(), 0.1);
    const auto rec = oracle::records(s.strings, y);
    CHECK(lr_objective({a}, rec, s, Execution::serial) ==
          lr_objective({a}, rec, s, Execution::parallel));
    CHECK(lr_gradient({a}, rec, s, Execution::serial) ==
          lr_gradient({a}, rec, s, Execution::parallel));
  }
}

TEST_CASE("lr_solve") {
  // Rank-1 two-qubit truth |psi><psi|.
  std::mt19937_64 rng(10);
  Matrix psi = oracle::ginibre(4, 1, rng);
  psi /= psi.norm();
  const Matrix rho = psi * psi.adjoint();
  const PauliSet full = full_pauli_set(2);
  std::vector<double> y;
  for (const auto& p : full.strings) y.push_back(oracle::trace_value(rho, p));
  const auto rec = oracle::records(full.strings, y);

  SUBCASE("recovers a pure state from the full set") {
    LrConfig cfg;
    cfg.seed = 11;
    const LrResult res = lr_solve(rec, full, 1, cfg);
    const Matrix est = res.factor.a * res.factor.a.adjoint();
    const double fid = (psi.adjoint() * est * psi)(0, 0).real() / est.trace().real();
    CHECK(fid > 0.999);
    CHECK(res.factor.a.norm() <= 1.0 + 1e-12);
  }
  SUBCASE("fixed point at the truth") {
    LrConfig cfg;
    cfg.max_iters = 50;
    cfg.rel_cost_tol = 0.0;
    const LrResult res = lr_solve(rec, full, 1, cfg, DenseFactor{psi});
    for (const auto& row : res.trace.rows) CHECK(row.cost < 1e-18);
  }
  SUBCASE("iterates stay in the unit ball") {
    const PauliSet s = sample_pauli_set(3, 30, 12);
    std::vector<double> yy(s.size(), 0.5);
    const auto rr = oracle::records(s.strings, yy);
    LrConfig cfg;
    cfg.seed = 13;
    cfg.rel_cost_tol = 0.0;
    for (int iters = 1; iters <= 10; ++iters) {
      cfg.max_iters = iters;
      const LrResult res = lr_solve(rr, s, 2, cfg);
      CHECK(res.factor.a.norm() <= 1.0 + 1e-12);
      for (const auto& row : res.trace.rows) CHECK(row.factor_norm <= 1.0 + 1e-12);
    }
  }
  SUBCASE("rejects bad settings") {
    LrConfig cfg;
    cfg.step_size = -1.0;
    CHECK_THROWS_AS(lr_solve(rec, full, 1, cfg), ConfigError);
    const PauliSet big{13, 0, {}};
    CHECK_THROWS_AS(lr_solve({}, big, 1, LrConfig{}), SizeLimitError);
  }
}

TEST_CASE("random dense factor") {
  const DenseFactor f = random_dense_factor(4, 3, 9);
  CHECK(f.a.rows() == 16);
  CHECK(f.a.cols() == 3);
  CHECK(f.a.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(random_dense_factor(4, 3, 9).a == f.a);
}

TEST_CASE("dense factor file") {
  const DenseFactor f = random_dense_factor(3, 2, 5);
  std::stringstream buf;
  write_dense_factor(buf, f);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "DQSF");
  CHECK(bytes.size() == 4 + 8 + 8 + 8 * 2 * 16);
  const DenseFactor g = read_dense_factor(buf);
  CHECK(g.a == f.a);
  std::stringstream bad("TTQS");
  CHECK_THROWS_AS(read_dense_factor(bad), FormatError);
}
