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
#include <random>
#include <sstream>

#include <doctest.h>

#include "oracles.hpp"
#include "ttqst/errors.hpp"
#include "ttqst/pauli.hpp"
#include "ttqst/tt_core.hpp"
#include "ttqst/tt_io.hpp"

using namespace ttqst;

namespace {

// Basis state |bits> with all bonds 1 and a block extent of 1 at `site`.
BlockTT basis_state(const std::vector<int>& bits, std::size_t site = 0) {
  std::vector<Core> cores;
  for (int b : bits) {
    Core c(1, 2, 1, 1);
    c(0, b, 0, 0) = 1.0;
    cores.push_back(c);
  }
  return BlockTT(cores, site);
}

BlockTT product_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Core> cores;
  for (std::size_t s = 0; s < n; ++s) {
    Core c(1, 2, 1, 1);
    for (auto& v : c.data()) v = {g(rng), g(rng)};
    cores.push_back(c);
  }
  return BlockTT(cores, n - 1);
}

}  // namespace

TEST_CASE("left_orthogonalize keeps the tensor") {
  SUBCASE("product state") {
    const BlockTT a = product_state(4, 1);
    const BlockTT q = left_orthogonalize(a);
    CHECK(q.orthogonality() == Orthogonality::left);
    for (std::size_t s = 0; s + 1 < q.num_sites(); ++s) CHECK(q.core(s).norm() == doctest::Approx(1.0));
    CHECK(oracle::rel_err(oracle::tt_rows(q), oracle::tt_rows(a)) < 1e-12);
  }
  SUBCASE("idempotent") {
    const BlockTT q = left_orthogonalize(oracle::random_tt(4, 2, 2, 2, 7));
    const BlockTT qq = left_orthogonalize(q);
    CHECK(oracle::rel_err(to_matrix(qq), to_matrix(q)) < 1e-12);
  }
  SUBCASE("random chain") {
    const BlockTT a = oracle::random_tt(4, 2, 2, 1, 3);
    const BlockTT q = left_orthogonalize(a);
    CHECK(oracle::rel_err(oracle::tt_rows(q), oracle::tt_rows(a)) < 1e-12);
    CHECK(left_orthogonality_error(q) < 1e-12);
  }
}

TEST_CASE("tt_svd") {
  SUBCASE("exact-rank round trip") {
    const BlockTT a = oracle::random_tt(3, 2, 2, 1, 11);
    const auto res = tt_svd(a, a.ranks(), 0.0);
    CHECK(oracle::rel_err(to_matrix(res.tt), oracle::tt_rows(a)) < 1e-12);
    CHECK(res.truncation_error < 1e-12 * frob_norm(a));
  }
  SUBCASE("round trip through a dense tensor") {
    for (std::size_t site = 0; site < 4; ++site) {
      const BlockTT a = oracle::random_tt(4, 3, 2, site, 20 + site);
      const auto res = tt_svd(densify(a), site, a.ranks(), 0.0);
      CHECK(res.tt.block_site() == site);
      CHECK(oracle::rel_err(to_matrix(res.tt), oracle::tt_rows(a)) < 1e-12);
      CHECK(left_orthogonality_error(res.tt) < 1e-12);
    }
  }
  SUBCASE("outer product of unit vectors has unit ranks") {
    const BlockTT a = product_state(5, 4);
    const auto res = tt_svd(densify(a), 4, RankVector(6, 8), 1e-12);
    for (Index r : res.tt.ranks()) CHECK(r == 1);
    CHECK(oracle::rel_err(to_matrix(res.tt), oracle::tt_rows(a)) < 1e-12);
  }
  SUBCASE("truncation error matches sequential dense SVDs") {
    // 2x2x2x2 tensor read as three sites with a block of 2 on the last one.
    std::mt19937_64 rng(5);
    const Matrix flat = oracle::ginibre(16, 1, rng);
    DenseTensor x(block_tensor_shape(3, 2, 2));
    for (Index i = 0; i < 16; ++i) x[i] = flat(i);

    // First cut: i1 | (i2 i3 k). Keep one singular triplet and carry s*v^H on.
    Matrix m1(2, 8);
    for (Index i = 0; i < 16; ++i) m1(i / 8, i % 8) = flat(i);
    Eigen::JacobiSVD<Matrix> svd1(m1, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double t1 = oracle::tail_sq(m1, 1);
    const Matrix carry = svd1.singularValues()(0) * svd1.matrixV().col(0).adjoint();
    Matrix m2(2, 4);
    for (Index j = 0; j < 8; ++j) m2(j / 4, j % 4) = carry(0, j);
    const double t2 = oracle::tail_sq(m2, 1);

    const auto res = tt_svd(x, 2, RankVector(4, 1), 0.0);
    CHECK(res.truncation_error == doctest::Approx(std::sqrt(t1 + t2)).epsilon(1e-12));
  }
  SUBCASE("tolerance drops a negligible direction") {
    const BlockTT a = oracle::random_tt(4, 2, 2, 2, 9);
    const BlockTT b = oracle::random_tt(4, 2, 2, 2, 10);
    const BlockTT sum = tt_add(a, tt_scale(b, 1e-9));
    const auto res = tt_svd(sum, RankVector(5, 64), 1e-6);
    CHECK(res.tt.ranks() == tt_svd(a, RankVector(5, 64), 0.0).tt.ranks());
    CHECK(res.truncation_error < 1e-6 * frob_norm(sum));
  }
  SUBCASE("dense input above the limit is rejected") {
    CHECK_THROWS_AS(DenseTensor(std::vector<Index>(26, 2)), SizeLimitError);
    const BlockTT a = oracle::random_tt(4, 2, 2, 2, 1);
    CHECK_THROWS_AS(densify(a, 16), SizeLimitError);
  }
}

TEST_CASE("tt_add") {
  const BlockTT a = oracle::random_tt(3, 2, 2, 1, 31);
  SUBCASE("additive inverse") {
    const BlockTT z = tt_add(a, tt_scale(a, -1.0));
    CHECK(to_matrix(z).norm() < 1e-12 * frob_norm(a));
  }
  SUBCASE("rank bookkeeping") {
    std::mt19937_64 rng(2);
    const BlockTT b = random_block_tt(3, 2, {1, 3, 2, 1}, 1, rng);
    CHECK(tt_add(a, b).ranks() == RankVector{1, 5, 4, 1});
  }
  SUBCASE("dense sum") {
    const BlockTT b = oracle::random_tt(3, 2, 3, 1, 32);
    const Matrix want = oracle::tt_rows(a) + oracle::tt_rows(b);
    CHECK((to_matrix(tt_add(a, b)) - want).cwiseAbs().maxCoeff() < 1e-12 * want.norm());
  }
  SUBCASE("linearity") {
    const BlockTT b = oracle::random_tt(3, 2, 3, 1, 33);
    const Complex alpha(0.3, -1.7);
    const Matrix want = alpha * oracle::tt_rows(a) + oracle::tt_rows(b);
    CHECK(oracle::rel_err(to_matrix(tt_add(tt_scale(a, alpha), b)), want) < 1e-12);
  }
  SUBCASE("mismatched block position") {
    const BlockTT b = oracle::random_tt(3, 2, 2, 2, 34);
    CHECK_THROWS_AS(tt_add(a, b), ShapeError);
  }
}

TEST_CASE("tt_scale and frob_norm") {
  const BlockTT a = oracle::random_tt(4, 2, 3, 2, 41);
  CHECK(frob_norm(tt_scale(a, 0.0)) == 0.0);
  CHECK(frob_norm(a) == doctest::Approx(oracle::tt_rows(a).norm()).epsilon(1e-12));
  CHECK(frob_norm(tt_scale(a, 2.0)) == doctest::Approx(2.0 * frob_norm(a)).epsilon(1e-12));
  const BlockTT q = left_orthogonalize(a);
  CHECK(q.core(3).norm() == doctest::Approx(oracle::tt_rows(a).norm()).epsilon(1e-12));
  CHECK(std::sqrt(inner(a, a).real()) == doctest::Approx(frob_norm(q)).epsilon(1e-12));
}

TEST_CASE("densify") {
  SUBCASE("all-ones cores") {
    std::vector<Core> cores(2, Core(1, 2, 1, 1));
    for (auto& c : cores)
      for (auto& v : c.data()) v = 1.0;
    const DenseTensor t = densify(BlockTT(cores, 0));
    for (Index i = 0; i < t.size(); ++i) CHECK(t[i] == Complex(1.0));
  }
  SUBCASE("ZZ") {
    const Matrix m = to_matrix(pauli_ttm(PauliString::parse("ZZ")));
    Matrix want = Matrix::Zero(4, 4);
    want.diagonal() << 1.0, -1.0, -1.0, 1.0;
    CHECK((m - want).norm() == 0.0);
  }
  SUBCASE("per-index products") {
    const BlockTT a = oracle::random_tt(3, 2, 2, 1, 51);
    const Matrix want = oracle::tt_rows(a);
    const DenseTensor t = densify(a);
    CHECK(t.shape() == std::vector<Index>{2, 2, 2, 2});
    for (Index i1 = 0; i1 < 2; ++i1)
      for (Index i2 = 0; i2 < 2; ++i2)
        for (Index k = 0; k < 2; ++k)
          for (Index i3 = 0; i3 < 2; ++i3) {
            const std::vector<Index> idx{i1, i2, k, i3};
            CHECK(std::abs(t.at(idx) - want(i1 * 4 + i2 * 2 + i3, k)) < 1e-14);
          }
    CHECK((to_matrix(a) - want).norm() < 1e-14);
  }
}

TEST_CASE("apply_operator") {
  SUBCASE("identity") {
    const BlockTT a = oracle::random_tt(3, 2, 2, 1, 61);
    const BlockTT b = apply_operator(pauli_ttm(PauliString::parse("III")), a);
    CHECK((to_matrix(b) - to_matrix(a)).norm() == 0.0);
    CHECK(b.ranks() == a.ranks());
  }
  SUBCASE("bit flip") {
    const BlockTT b = apply_operator(pauli_ttm(PauliString::parse("X")), basis_state({0}));
    const Matrix m = to_matrix(b);
    CHECK(m(0, 0) == Complex(0.0));
    CHECK(m(1, 0) == Complex(1.0));
  }
  SUBCASE("random rank-1 operator") {
    std::mt19937_64 rng(62);
    std::vector<Core> cores;
    for (int s = 0; s < 3; ++s) {
      Core c(1, 2, 2, 1);
      const Matrix g = oracle::ginibre(4, 1, rng);
      for (Index j = 0; j < 4; ++j) c.data()[j] = g(j);
      cores.push_back(c);
    }
    const TTMatrix e(cores);
    const BlockTT a = oracle::random_tt(3, 2, 2, 2, 63);
    const BlockTT b = apply_operator(e, a);
    CHECK(b.ranks() == a.ranks());
    CHECK(oracle::rel_err(to_matrix(b), oracle::ttm_rows(e) * oracle::tt_rows(a)) < 1e-12);
  }
  SUBCASE("site count mismatch") {
    CHECK_THROWS_AS(apply_operator(pauli_ttm(PauliString::parse("XX")), basis_state({0, 1, 0})),
                    ShapeError);
  }
}

TEST_CASE("shift_block") {
  SUBCASE("lossless round trip") {
    const BlockTT a = oracle::random_tt(4, 2, 2, 1, 71);
    const auto right = shift_block(a, Direction::right, 16);
    CHECK(right.tt.block_site() == 2);
    const auto back = shift_block(right.tt, Direction::left, 16);
    CHECK(back.tt.block_site() == 1);
    CHECK(oracle::rel_err(to_matrix(back.tt), oracle::tt_rows(a)) < 1e-12);
  }
  SUBCASE("product state") {
    BlockTT a = product_state(3, 72);
    const auto res = shift_block(a, Direction::left, 1);
    CHECK(res.tt.block_site() == 1);
    CHECK(oracle::rel_err(to_matrix(res.tt), oracle::tt_rows(a)) < 1e-12);
  }
  SUBCASE("truncation matches the dense unfolding") {
    const BlockTT a = oracle::random_tt(4, 2, 3, 1, 73);
    const Matrix full = oracle::tt_rows(a);
    // The new bond splits (i1 i2) from (i3 i4 k).
    Matrix unf(4, 8);
    for (Index row = 0; row < 16; ++row)
      for (Index k = 0; k < 2; ++k) unf(row / 4, (row % 4) * 2 + k) = full(row, k);
    const auto res = shift_block(a, Direction::right, 1);
    const double want = std::sqrt(oracle::tail_sq(unf, 1));
    CHECK(res.truncation_error == doctest::Approx(want).epsilon(1e-10));
    CHECK((to_matrix(res.tt) - full).norm() == doctest::Approx(want).epsilon(1e-10));
  }
  SUBCASE("ends of the chain") {
    const BlockTT a = oracle::random_tt(3, 2, 2, 2, 74);
    CHECK_THROWS_AS(shift_block(a, Direction::right, 2), ShapeError);
    CHECK_THROWS_AS(shift_block(oracle::random_tt(3, 2, 2, 0, 75), Direction::left, 2),
                    ShapeError);
  }
}

TEST_CASE("binary format round trip") {
  SUBCASE("block train") {
    const BlockTT a = left_orthogonalize(oracle::random_tt(5, 3, 2, 3, 81));
    std::stringstream buf;
    write_block_tt(buf, a);
    const std::string bytes = buf.str();
    CHECK(bytes.substr(0, 4) == "TTQS");
    const BlockTT b = read_block_tt(buf);
    CHECK(b.block_site() == a.block_site());
    CHECK(b.ranks() == a.ranks());
    for (std::size_t s = 0; s < a.num_sites(); ++s) CHECK(b.core(s) == a.core(s));
    std::stringstream again;
    write_block_tt(again, b);
    CHECK(again.str() == bytes);
  }
  SUBCASE("tt-matrix") {
    const TTMatrix e = pauli_ttm(PauliString::parse("XYZI"));
    std::stringstream buf;
    write_tt_matrix(buf, e);
    const TTMatrix f = read_tt_matrix(buf);
    for (std::size_t s = 0; s < 4; ++s) CHECK(f.core(s) == e.core(s));
  }
  SUBCASE("bad magic") {
    std::stringstream buf("NOPE0000000000000000");
    CHECK_THROWS_AS(read_block_tt(buf), FormatError);
  }
}
