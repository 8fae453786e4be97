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
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "oracles.hpp"
#include "ttqst/errors.hpp"
#include "ttqst/harness.hpp"

using namespace ttqst;

namespace {

ExperimentConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> small(1, 6);
  ExperimentConfig c;
  c.n_qubits = 2 + small(rng);
  c.block_dim = small(rng);
  c.tt_rank = small(rng);
  c.block_position = static_cast<std::size_t>(small(rng)) % (c.n_qubits + 1);
  c.sampling_ratio = 0.01 + 0.99 * u(rng);
  for (int i = 0; i < small(rng) - 1; ++i) c.sweep_ratios.push_back(0.001 + 0.999 * u(rng));
  c.snr_db = u(rng) < 0.2 ? std::numeric_limits<double>::infinity() : 100.0 * u(rng) - 20.0;
  c.algorithms = u(rng) < 0.5 ? std::vector<Algorithm>{Algorithm::lr, Algorithm::blocktt}
                              : std::vector<Algorithm>{Algorithm::blocktt};
  c.step_size = u(rng) * 0.3 + 1e-3;
  c.momentum = u(rng) * 0.9;
  c.max_iters = small(rng) * 100;
  c.rel_cost_tol = u(rng) * 1e-8;
  c.backtracking = u(rng) < 0.5;
  c.gradient_method = u(rng) < 0.5 ? GradientMethod::mpo : GradientMethod::batched;
  c.gradient_batch = small(rng) * 8;
  c.gradient_rounding_tol = u(rng) * 1e-10;
  c.lr_rank = small(rng) - 1;
  c.allow_identity = u(rng) < 0.5;
  c.trials = small(rng);
  c.seed = rng();
  c.timing = u(rng) < 0.5;
  return c;
}

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.n_qubits = 3;
  c.sweep_ratios = {0.3, 0.6};
  c.algorithms = {Algorithm::blocktt, Algorithm::lr};
  c.trials = 2;
  c.max_iters = 200;
  c.seed = 12345;
  return c;
}

std::string results_text(const std::vector<ResultRow>& rows) {
  std::stringstream s;
  write_results_csv(s, rows);
  write_summary_csv(s, summarize(rows));
  return s.str();
}

}  // namespace

TEST_CASE("config round trip") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const ExperimentConfig c = random_config(rng);
    REQUIRE_NOTHROW(validate(c));
    std::stringstream buf;
    write_config(buf, c);
    std::vector<std::string> keys;
    const ExperimentConfig back = parse_config(buf, &keys);
    CHECK(back == c);
    CHECK(keys.size() == 21);
  }
}

TEST_CASE("config parsing") {
  SUBCASE("comments, spacing and defaults") {
    std::stringstream in("# sweep\n n_qubits=5\n\nsweep_ratios = 0.1, 0.2\nalgorithm = lr,blocktt\n");
    const ExperimentConfig c = parse_config(in);
    CHECK(c.n_qubits == 5);
    CHECK(c.sweep_ratios == std::vector<double>{0.1, 0.2});
    CHECK(c.algorithms == std::vector<Algorithm>{Algorithm::lr, Algorithm::blocktt});
    CHECK(c.trials == 20);
  }
  SUBCASE("errors") {
    ExperimentConfig c;
    CHECK_THROWS_AS(set_config_value(c, "qubits", "3"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "n_qubits", "three"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "trials", "-1"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "backtracking", "maybe"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "algorithm", "cvx"), ConfigError);
    c.sampling_ratio = 0.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = {};
    c.block_position = 8;
    CHECK_THROWS_AS(validate(c), ConfigError);
  }
  SUBCASE("derived quantities") {
    ExperimentConfig c;
    CHECK(block_site(c) == 5);
    c.block_position = 1;
    CHECK(block_site(c) == 0);
    CHECK(tt_ranks(c) == RankVector{1, 2, 2, 2, 2, 2, 2, 1});
    CHECK(effective_lr_rank(c) == 4);
    CHECK(measurement_count(7, 0.4) == 6554);
    CHECK(measurement_count(7, 0.05) == 820);
    CHECK(measurement_count(2, 1.0) == 16);
  }
}

TEST_CASE("trial seeds") {
  const TrialSeeds s = trial_seeds(100, 3);
  CHECK(s.base == 100 + 3 * 10007);
  CHECK(s.truth == s.base);
  CHECK(s.pauli == s.base + 1);
  CHECK(s.noise == s.base + 2);
  CHECK(s.init == s.base + 3);
}

TEST_CASE("generate_random_state") {
  SUBCASE("unit norm and deterministic") {
    const BlockTT a = generate_random_state(5, 2, uniform_ranks(5, 3), 3, 9);
    CHECK(frob_norm(a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(left_orthogonality_error(a) < 1e-12);
    CHECK(a == generate_random_state(5, 2, uniform_ranks(5, 3), 3, 9));
  }
  SUBCASE("pure state") {
    const BlockTT a = generate_random_state(4, 1, uniform_ranks(4, 1), 2, 10);
    const Matrix rho = oracle::unit_density(a);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho);
    CHECK(eig.eigenvalues()(15) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eig.eigenvalues()(14)) < 1e-12);
  }
  SUBCASE("default experiment shape") {
    const ExperimentConfig c;
    const BlockTT a = generate_random_state(c.n_qubits, c.block_dim, tt_ranks(c), block_site(c), 11);
    CHECK(a.num_sites() == 7);
    CHECK(a.block_site() == 5);
    CHECK(a.block_dim() == 2);
    CHECK(densify(a).order() == 8);
    const Matrix rho = oracle::unit_density(a);
    CHECK(rho.rows() == 128);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho);
    int rank = 0;
    for (Index i = 0; i < 128; ++i) rank += eig.eigenvalues()(i) > 1e-10;
    CHECK(rank <= 4);
  }
}

TEST_CASE("run_sweep") {
  SUBCASE("noiseless full sampling") {
    ExperimentConfig c;
    c.n_qubits = 3;
    c.sampling_ratio = 1.0;
    c.snr_db = std::numeric_limits<double>::infinity();
    c.trials = 1;
    c.seed = 5;
    const auto rows = run_sweep(c);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fidelity_clamped > 0.999);
    CHECK(rows[0].m == 64);
    CHECK(std::isnan(rows[0].wall_time_s));
  }
  SUBCASE("row count and determinism") {
    const ExperimentConfig c = tiny_config();
    int seen = 0;
    const auto rows = run_sweep(c, [&](const ResultRow&) { ++seen; });
    CHECK(rows.size() == 2 * 2 * 2);
    CHECK(seen == 8);
    CHECK(rows[0].sampling_ratio == 0.3);
    CHECK(rows[0].algorithm == Algorithm::blocktt);
    CHECK(rows[2].algorithm == Algorithm::lr);
    CHECK(results_text(rows) == results_text(run_sweep(c)));
  }
  SUBCASE("failed trials become rows") {
    ExperimentConfig c;
    c.n_qubits = 13;
    c.sampling_ratio = 1e-6;
    c.algorithms = {Algorithm::lr};
    c.trials = 2;
    c.seed = 1;
    const auto rows = run_sweep(c);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
      CHECK(r.status == "error");
      CHECK_FALSE(r.note.empty());
      CHECK(std::isnan(r.trace_distance));
    }
    const auto summary = summarize(rows);
    REQUIRE(summary.size() == 1);
    CHECK(summary[0].failed == 2);
  }
}

TEST_CASE("summaries") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(std::isnan(median({})));

  std::vector<ResultRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].trial = i;
    rows[i].sampling_ratio = 0.2;
    rows[i].m = 10;
    rows[i].trace_distance = 0.1 * (i + 1);
    rows[i].fidelity_raw = rows[i].fidelity_clamped = 1.0 - 0.1 * i;
    rows[i].final_cost = i;
    rows[i].iters = 10 * i;
  }
  const auto s = summarize(rows);
  REQUIRE(s.size() == 1);
  CHECK(s[0].trials == 3);
  CHECK(s[0].median_trace_distance == doctest::Approx(0.2));
  CHECK(s[0].median_fidelity_clamped == doctest::Approx(0.9));
  CHECK(s[0].median_iters == 10.0);

  std::stringstream out;
  write_results_csv(out, rows);
  std::string header;
  std::getline(out, header);
  CHECK(header ==
        "trial,algorithm,n_qubits,m,sampling_ratio,snr_db,fidelity_raw,fidelity_clamped,"
        "trace_distance,final_cost,iters,wall_time_s,seed,status,note");
}

TEST_CASE("timing benchmark") {
  TimingConfig t;
  t.n_min = 3;
  t.n_max = 4;
  t.reps = 2;
  t.seed = 3;
  const auto rows = run_timing_benchmark(t);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.median_s));
    CHECK_FALSE(r.budget_exceeded);
  }
  CHECK(rows[0].m == 4);
  t.dense_budget_s = 0.0;
  const auto over = run_timing_benchmark(t);
  CHECK(over[1].budget_exceeded);
  std::stringstream out;
  write_timing_csv(out, over);
  CHECK(out.str().find("3,4,dense,budget-exceeded") != std::string::npos);

  CHECK(loglog_slope({1, 10, 100}, {2, 20, 200}) == doctest::Approx(1.0));
  CHECK(loglog_slope({1, 2, 4}, {1, 8, 64}) == doctest::Approx(3.0));
}
