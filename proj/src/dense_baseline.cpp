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

#include "ttqst/dense_baseline.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>

#include "ttqst/errors.hpp"
#include "ttqst/kernels.hpp"
#include "ttqst/tt_io.hpp"

namespace ttqst {

namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr double kMinStepFraction = 1e-8;
constexpr char kDenseMagic[4] = {'D', 'Q', 'S', 'F'};

void check_dense_register(const PauliSet& set) {
  if (set.n_qubits == 0 || set.n_qubits > kMaxDenseQubits) {
    throw SizeLimitError("dense paths support 1.." + std::to_string(kMaxDenseQubits) + " qubits");
  }
}

void check_factor(const DenseFactor& f, const PauliSet& set) {
  check_dense_register(set);
  if (f.a.rows() != (Index{1} << set.n_qubits)) throw ShapeError("factor rows must equal 2^N");
}

std::vector<double> lr_residuals(const Matrix& a, std::span<const double> y, const PauliSet& set,
                                 Execution exec) {
  std::vector<double> r(set.size());
  if (exec == Execution::parallel) {
    kernels::dense_factor_measure_parallel(a, set.strings, r);
  } else {
    kernels::dense_factor_measure_serial(a, set.strings, r);
  }
  for (std::size_t m = 0; m < r.size(); ++m) r[m] = y[m] - r[m];
  return r;
}

Matrix lr_gradient_from(const Matrix& a, std::span<const double> r, const PauliSet& set,
                        Execution exec) {
  std::vector<double> w(r.size());
  for (std::size_t m = 0; m < r.size(); ++m) w[m] = -2.0 * r[m];
  return exec == Execution::parallel ? kernels::dense_pauli_sum_apply_parallel(a, set.strings, w)
                                     : kernels::dense_pauli_sum_apply_serial(a, set.strings, w);
}

double half_sq(std::span<const double> r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return 0.5 * s;
}

void project_ball(Matrix& a) {
  const double nrm = a.norm();
  if (nrm > 1.0) a /= nrm;
}

}  // namespace

DenseFactor random_dense_factor(std::size_t n_qubits, Index r, std::uint64_t seed) {
  if (n_qubits == 0 || n_qubits > kMaxDenseQubits) throw SizeLimitError("register too large");
  if (r < 1) throw ConfigError("rank must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  const Index d = Index{1} << n_qubits;
  // Row-major fill so the draw order does not depend on the storage order.
  Matrix a(d, r);
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < r; ++k) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      a(i, k) = {re, im};
    }
  a /= a.norm();
  return {std::move(a)};
}

double lr_objective(const DenseFactor& f, std::span<const MeasurementRecord> records,
                    const PauliSet& set, Execution exec) {
  check_factor(f, set);
  const auto y = observed_values(records, set);
  return half_sq(lr_residuals(f.a, y, set, exec));
}

Matrix lr_gradient(const DenseFactor& f, std::span<const MeasurementRecord> records,
                   const PauliSet& set, Execution exec) {
  check_factor(f, set);
  const auto y = observed_values(records, set);
  return lr_gradient_from(f.a, lr_residuals(f.a, y, set, exec), set, exec);
}

LrResult lr_solve(std::span<const MeasurementRecord> records, const PauliSet& set, Index r,
                  const LrConfig& cfg, const std::optional<DenseFactor>& init) {
  check_dense_register(set);
  if (!(cfg.step_size > 0.0) || !std::isfinite(cfg.step_size)) {
    throw ConfigError("step size must be positive");
  }
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) throw ConfigError("momentum must be in [0, 1)");
  if (cfg.max_iters < 1) throw ConfigError("max_iters must be positive");
  if (!(cfg.rel_cost_tol >= 0.0)) throw ConfigError("rel_cost_tol must be nonnegative");
  const auto y = observed_values(records, set);

  Matrix a = init ? init->a : random_dense_factor(set.n_qubits, r, cfg.seed).a;
  check_factor({a}, set);
  project_ball(a);

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  LrResult out;
  double eta = cfg.step_size;
  auto res = lr_residuals(a, y, set, cfg.exec);
  double f = half_sq(res);
  if (!std::isfinite(f)) {
    out.factor = {a};
    out.status = SolveStatus::diverged;
    out.final_step = eta;
    return out;
  }

  Matrix d_prev;
  bool a_moved = false;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Matrix g = lr_gradient_from(a, res, set, cfg.exec);
    const double gnorm = g.norm();
    out.trace.rows.push_back({it, f, gnorm, a.norm(), elapsed()});
    a_moved = false;
    if (gnorm == 0.0) {
      out.status = SolveStatus::converged;
      break;
    }
    Matrix d = g;
    if (d_prev.size() != 0 && cfg.momentum > 0.0) d += cfg.momentum * d_prev;

    Matrix next;
    std::vector<double> res_next;
    double f_next = 0.0;
    bool accepted = false;
    while (true) {
      next = a - eta * d;
      project_ball(next);
      res_next = lr_residuals(next, y, set, cfg.exec);
      f_next = half_sq(res_next);
      if (!cfg.backtracking) {
        accepted = true;
        break;
      }
      if (std::isfinite(f_next) &&
          f_next <= f - kArmijoSlope * (next - a).squaredNorm() / eta) {
        accepted = true;
        break;
      }
      eta *= 0.5;
      d = g;
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
    res = std::move(res_next);
    f = f_next;
    d_prev = std::move(d);
    if (rel < cfg.rel_cost_tol) {
      out.status = SolveStatus::converged;
      break;
    }
  }
  if (a_moved) {
    out.trace.rows.push_back({out.trace.rows.back().iter + 1, f,
                              std::numeric_limits<double>::quiet_NaN(), a.norm(), elapsed()});
  }
  out.factor = {std::move(a)};
  out.final_step = eta;
  return out;
}

DenseObjective dense_objective_oracle(const DenseFactor& f,
                                      std::span<const MeasurementRecord> records,
                                      const PauliSet& set) {
  check_factor(f, set);
  const auto y = observed_values(records, set);
  const Matrix rho = f.a * f.a.adjoint();
  DenseObjective out{0.0, Matrix::Zero(f.a.rows(), f.a.cols())};
  for (std::size_t m = 0; m < y.size(); ++m) {
    const Matrix e = pauli_dense(set.strings[m]);
    const double r = y[m] - (rho * e).trace().real();
    out.value += 0.5 * r * r;
    out.gradient -= 2.0 * r * (e * f.a);
  }
  return out;
}

void write_dense_factor(std::ostream& out, const DenseFactor& f) {
  out.write(kDenseMagic, 4);
  io_detail::put_u64(out, static_cast<std::uint64_t>(f.a.rows()));
  io_detail::put_u64(out, static_cast<std::uint64_t>(f.a.cols()));
  for (Index i = 0; i < f.a.rows(); ++i)
    for (Index k = 0; k < f.a.cols(); ++k) {
      io_detail::put_f64(out, f.a(i, k).real());
      io_detail::put_f64(out, f.a(i, k).imag());
    }
  if (!out) throw FormatError("write failed");
}

DenseFactor read_dense_factor(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kDenseMagic, 4) != 0) {
    throw FormatError("not a dense factor file");
  }
  const std::uint64_t d = io_detail::get_u64(in);
  const std::uint64_t r = io_detail::get_u64(in);
  if (d == 0 || r == 0 || d > (std::uint64_t{1} << kMaxDenseQubits) || r > d) {
    throw FormatError("implausible dense factor shape");
  }
  Matrix a(static_cast<Index>(d), static_cast<Index>(r));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) {
      const double re = io_detail::get_f64(in);
      const double im = io_detail::get_f64(in);
      a(i, k) = {re, im};
    }
  return {std::move(a)};
}

void save_dense_factor(const std::filesystem::path& path, const DenseFactor& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_dense_factor(out, f);
}

DenseFactor load_dense_factor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_dense_factor(in);
}

}  // namespace ttqst
