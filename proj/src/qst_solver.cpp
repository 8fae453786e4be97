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

#include "ttqst/qst_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>

#include "ttqst/errors.hpp"
#include "ttqst/kernels.hpp"

namespace ttqst {

namespace {

constexpr double kArmijoSlope = 1e-4;
// Backtracking gives up once the step has shrunk by this factor.
constexpr double kMinStepFraction = 1e-8;

std::vector<double> residuals(const BlockTT& a, std::span<const double> y, const PauliSet& set,
                              Execution exec) {
  std::vector<double> r = measure_all(a, set, exec);
  for (std::size_t m = 0; m < r.size(); ++m) r[m] = y[m] - r[m];
  return r;
}

double half_sq(std::span<const double> r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return 0.5 * s;
}

std::vector<double> gradient_weights(std::span<const double> r) {
  std::vector<double> w(r.size());
  for (std::size_t m = 0; m < r.size(); ++m) w[m] = -2.0 * r[m];
  return w;
}

void check_rank_cap(const BlockTT& g, Index rank_cap) {
  const auto ranks = g.ranks();
  const Index top = *std::max_element(ranks.begin(), ranks.end());
  if (top > rank_cap) {
    throw NumericalError("gradient bond dimension " + std::to_string(top) +
                         " exceeds the cap of " + std::to_string(rank_cap) +
                         "; raise the rounding tolerance or lower the batch size");
  }
}

// Gradient evaluator for one solve; the operator plan is built once.
class GradientEngine {
 public:
  GradientEngine(const PauliSet& set, const SolverConfig& cfg) : set_(set), cfg_(cfg) {
    if (cfg.gradient_method == GradientMethod::mpo) plan_.emplace(set.strings);
  }

  BlockTT operator()(const BlockTT& a, std::span<const double> r) const {
    const auto w = gradient_weights(r);
    const bool par = cfg_.exec == Execution::parallel;
    BlockTT g;
    if (plan_) {
      g = kernels::pauli_sum_apply_mpo(a, *plan_, w, cfg_.gradient_rounding_tol, par);
    } else if (par) {
      g = kernels::pauli_sum_apply_parallel(a, set_.strings, w, cfg_.gradient_batch,
                                            cfg_.gradient_rounding_tol);
    } else {
      g = kernels::pauli_sum_apply_serial(a, set_.strings, w, cfg_.gradient_batch,
                                          cfg_.gradient_rounding_tol);
    }
    check_rank_cap(g, cfg_.gradient_rank_cap);
    return g;
  }

 private:
  const PauliSet& set_;
  const SolverConfig& cfg_;
  std::optional<kernels::PauliSumPlan> plan_;
};

// ||x - y||^2 for unit-norm trains.
double unit_distance_sq(const BlockTT& x, const BlockTT& y) {
  return std::max(0.0, 2.0 - 2.0 * inner(x, y).real());
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (!(cfg.step_size > 0.0) || !std::isfinite(cfg.step_size)) {
    throw ConfigError("step size must be positive");
  }
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) throw ConfigError("momentum must be in [0, 1)");
  if (cfg.max_iters < 1) throw ConfigError("max_iters must be positive");
  if (!(cfg.rel_cost_tol >= 0.0)) throw ConfigError("rel_cost_tol must be nonnegative");
  if (!(cfg.gradient_rounding_tol >= 0.0)) {
    throw ConfigError("gradient rounding tolerance must be nonnegative");
  }
  if (cfg.gradient_batch < 1) throw ConfigError("gradient batch must be positive");
  if (cfg.gradient_rank_cap < 1) throw ConfigError("gradient rank cap must be positive");
  for (Index r : cfg.target_ranks) {
    if (r < 1) throw ConfigError("target ranks must be positive");
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::step_underflow: return "step_underflow";
    case SolveStatus::diverged: return "diverged";
  }
  return "unknown";
}

std::vector<double> observed_values(std::span<const MeasurementRecord> records,
                                    const PauliSet& set) {
  if (records.size() != set.size()) {
    throw ShapeError("measurement records and Pauli set differ in length");
  }
  std::vector<double> y(records.size());
  for (std::size_t m = 0; m < records.size(); ++m) {
    if (records[m].pauli != set.strings[m]) {
      throw ShapeError("record " + std::to_string(m) + " does not match the Pauli set");
    }
    y[m] = records[m].y;
  }
  return y;
}

double objective(const BlockTT& a, std::span<const MeasurementRecord> records, const PauliSet& set,
                 Execution exec) {
  const auto y = observed_values(records, set);
  return half_sq(residuals(a, y, set, exec));
}

BlockTT gradient(const BlockTT& a, std::span<const MeasurementRecord> records,
                 const PauliSet& set, double rounding_tol, std::size_t batch, Index rank_cap,
                 Execution exec) {
  const auto y = observed_values(records, set);
  const auto r = residuals(a, y, set, exec);
  SolverConfig cfg;
  cfg.gradient_method = GradientMethod::batched;
  cfg.gradient_rounding_tol = rounding_tol;
  cfg.gradient_batch = batch;
  cfg.gradient_rank_cap = rank_cap;
  cfg.exec = exec;
  return GradientEngine(set, cfg)(a, r);
}

BlockTT gradient_mpo(const BlockTT& a, std::span<const MeasurementRecord> records,
                     const PauliSet& set, double rounding_tol, Index rank_cap, Execution exec) {
  const auto y = observed_values(records, set);
  const auto r = residuals(a, y, set, exec);
  SolverConfig cfg;
  cfg.gradient_method = GradientMethod::mpo;
  cfg.gradient_rounding_tol = rounding_tol;
  cfg.gradient_rank_cap = rank_cap;
  cfg.exec = exec;
  return GradientEngine(set, cfg)(a, r);
}

BlockTT project_normalize(const BlockTT& a, const RankVector& target_ranks) {
  BlockTT t = tt_svd(a, target_ranks, 0.0).tt;
  const double nrm = frob_norm(t);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    throw NumericalError("cannot normalize a factor of norm " + std::to_string(nrm));
  }
  return tt_scale(t, 1.0 / nrm);
}

BlockTT random_factor(std::size_t n_sites, Index k, const RankVector& ranks,
                      std::size_t block_site, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BlockTT a = left_orthogonalize(random_block_tt(n_sites, k, ranks, block_site, rng));
  return tt_scale(a, 1.0 / frob_norm(a));
}

SolveResult solve(const BlockTT& init, std::span<const MeasurementRecord> records,
                  const PauliSet& set, const SolverConfig& cfg) {
  validate(cfg);
  const auto y = observed_values(records, set);
  const RankVector target = cfg.target_ranks.empty() ? init.ranks() : cfg.target_ranks;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  SolveResult out;
  BlockTT a = project_normalize(init, target);
  auto r = residuals(a, y, set, cfg.exec);
  double f = half_sq(r);
  double eta = cfg.step_size;
  if (!std::isfinite(f)) {
    out.factor = a;
    out.status = SolveStatus::diverged;
    out.final_step = eta;
    return out;
  }

  const GradientEngine grad(set, cfg);
  std::optional<BlockTT> d_prev;
  bool a_moved = false;
  out.status = SolveStatus::max_iters;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const BlockTT g = grad(a, r);
    const double gnorm = frob_norm(g);
    out.trace.rows.push_back({it, f, gnorm, frob_norm(a), elapsed()});
    a_moved = false;
    if (gnorm == 0.0) {
      out.status = SolveStatus::converged;
      break;
    }

    BlockTT d = g;
    if (d_prev && cfg.momentum > 0.0) {
      d = tt_svd(tt_add(g, tt_scale(*d_prev, cfg.momentum)),
                 RankVector(a.num_sites() + 1, std::numeric_limits<Index>::max()),
                 cfg.gradient_rounding_tol)
              .tt;
    }

    BlockTT next;
    std::vector<double> r_next;
    double f_next = 0.0;
    bool accepted = false;
    while (true) {
      next = project_normalize(tt_add(a, tt_scale(d, -eta)), target);
      r_next = residuals(next, y, set, cfg.exec);
      f_next = half_sq(r_next);
      if (!cfg.backtracking) {
        accepted = true;
        break;
      }
      if (std::isfinite(f_next) &&
          f_next <= f - kArmijoSlope * unit_distance_sq(next, a) / eta) {
        accepted = true;
        break;
      }
      eta *= 0.5;
      d = g;  // stale momentum is dropped once the step shrinks
      if (eta < cfg.step_size * kMinStepFraction) break;
    }
    if (!accepted) {
      out.status = SolveStatus::step_underflow;
      break;
    }
    if (!std::isfinite(f_next)) {
      out.status = SolveStatus::diverged;
      break;
    }

    const double rel = std::abs(f_next - f) / std::max(f, 1e-30);
    a = std::move(next);
    a_moved = true;
    r = std::move(r_next);
    f = f_next;
    d_prev = std::move(d);
    if (rel < cfg.rel_cost_tol) {
      out.status = SolveStatus::converged;
      break;
    }
  }
  // Closing row for the returned iterate when it moved after the last row;
  // its gradient is never formed.
  if (a_moved) {
    out.trace.rows.push_back({out.trace.rows.back().iter + 1, f,
                              std::numeric_limits<double>::quiet_NaN(), frob_norm(a), elapsed()});
  }
  out.factor = std::move(a);
  out.final_step = eta;
  return out;
}

SolveResult solve(Index k, std::span<const MeasurementRecord> records, const PauliSet& set,
                  const SolverConfig& cfg) {
  validate(cfg);
  if (cfg.target_ranks.empty()) throw ConfigError("random initialisation needs target ranks");
  return solve(random_factor(set.n_qubits, k, cfg.target_ranks, cfg.block_site, cfg.seed), records,
               set, cfg);
}

void write_trace_csv(std::ostream& out, const SolverTrace& trace) {
  out << "iter,cost,grad_norm,factor_norm,elapsed_s\n";
  char buf[160];
  for (const auto& row : trace.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.6f\n", row.iter, row.cost,
                  row.grad_norm, row.factor_norm, row.elapsed_s);
    out << buf;
  }
}

void save_trace_csv(const std::filesystem::path& path, const SolverTrace& trace) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_trace_csv(out, trace);
}

}  // namespace ttqst
