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

#include "ttqst/kernels.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ttqst/errors.hpp"
#include "ttqst/parallel.hpp"

namespace ttqst {

int available_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace kernels {

namespace {

// Row-major Pauli action: (sigma v)[i'] = phase[i'] * v[i' ^ flip].
struct SiteAction {
  int flip;
  Complex phase[2];
};

SiteAction site_action(Pauli p) {
  switch (p) {
    case Pauli::I: return {0, {{1, 0}, {1, 0}}};
    case Pauli::X: return {1, {{1, 0}, {1, 0}}};
    case Pauli::Y: return {1, {{0, -1}, {0, 1}}};
    case Pauli::Z: return {0, {{1, 0}, {-1, 0}}};
  }
  return {0, {{1, 0}, {1, 0}}};
}

void check_pauli_layout(const BlockTT& a, const PauliString& p) {
  if (p.size() != a.num_sites()) throw ShapeError("Pauli string length differs from site count");
  for (const auto& c : a.cores()) {
    if (c.phys() != 2) throw ShapeError("Pauli observables need qubit sites");
  }
}

template <bool Count>
Complex contract(const BlockTT& a, const PauliString& p, ContractionWorkspace& ws,
                 std::uint64_t* fma) {
  check_pauli_layout(a, p);
  ws.env.assign(1, Complex{1.0, 0.0});
  for (std::size_t n = a.num_sites(); n-- > 0;) {
    const Core& g = a.core(n);
    const Index l = g.left(), kd = g.block(), r = g.right();
    const Complex* G = g.data().data();
    const Complex* X = ws.env.data();

    // T[(a, i, k), b'] = sum_b G[(a, i, k), b] X[b', b]
    const Index rows = l * 2 * kd;
    ws.tmp.resize(static_cast<std::size_t>(rows * r));
    Complex* T = ws.tmp.data();
    for (Index row = 0; row < rows; ++row) {
      const Complex* grow = G + row * r;
      for (Index bp = 0; bp < r; ++bp) {
        const Complex* xrow = X + bp * r;
        Complex s{};
        for (Index b = 0; b < r; ++b) s += grow[b] * xrow[b];
        T[row * r + bp] = s;
      }
    }

    // X'[a', a] = sum_{i', k, b'} conj(G[a', i', k, b']) phase(i') T[a, i' ^ flip, k, b']
    const SiteAction act = site_action(p[n]);
    ws.next.assign(static_cast<std::size_t>(l * l), Complex{});
    Complex* Xn = ws.next.data();
    for (Index ap = 0; ap < l; ++ap)
      for (Index aa = 0; aa < l; ++aa) {
        Complex s{};
        for (Index ip = 0; ip < 2; ++ip) {
          Complex part{};
          for (Index k = 0; k < kd; ++k) {
            const Complex* gp = G + ((ap * 2 + ip) * kd + k) * r;
            const Complex* tp = T + ((aa * 2 + (ip ^ act.flip)) * kd + k) * r;
            for (Index bp = 0; bp < r; ++bp) part += std::conj(gp[bp]) * tp[bp];
          }
          s += act.phase[ip] * part;
        }
        Xn[ap * l + aa] = s;
      }
    if constexpr (Count) {
      *fma += static_cast<std::uint64_t>(rows * r * r + l * l * 2 * kd * r);
    }
    std::swap(ws.env, ws.next);
  }
  return ws.env[0];
}

constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

RankVector unbounded_caps(std::size_t n_sites) {
  return RankVector(n_sites + 1, std::numeric_limits<Index>::max());
}

std::vector<std::pair<std::size_t, std::size_t>> batch_ranges(std::size_t m, std::size_t batch) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t lo = 0; lo < m; lo += batch) ranges.emplace_back(lo, std::min(m, lo + batch));
  return ranges;
}

BlockTT round_sum(const BlockTT& x, const BlockTT& y, double tol) {
  return tt_svd(tt_add(x, y), unbounded_caps(x.num_sites()), tol).tt;
}

void check_sum_inputs(const BlockTT& a, std::span<const PauliString> strings,
                      std::span<const double> weights, std::size_t batch) {
  if (strings.size() != weights.size()) throw ShapeError("strings and weights differ in length");
  if (strings.empty()) throw ShapeError("empty Pauli sum");
  if (batch == 0) throw ShapeError("batch must be positive");
  for (const auto& p : strings) check_pauli_layout(a, p);
}

}  // namespace

Complex pauli_expectation(const BlockTT& a, const PauliString& p, ContractionWorkspace& ws) {
  return contract<false>(a, p, ws, nullptr);
}

Complex pauli_expectation_counted(const BlockTT& a, const PauliString& p,
                                  ContractionWorkspace& ws, std::uint64_t& fma) {
  return contract<true>(a, p, ws, &fma);
}

void measure_all_serial(const BlockTT& a, std::span<const PauliString> strings,
                        std::span<Complex> out) {
  ContractionWorkspace ws;
  for (std::size_t m = 0; m < strings.size(); ++m) out[m] = contract<false>(a, strings[m], ws, nullptr);
}

void measure_all_parallel(const BlockTT& a, std::span<const PauliString> strings,
                          std::span<Complex> out) {
  for (const auto& p : strings) check_pauli_layout(a, p);
  const auto m_count = static_cast<std::int64_t>(strings.size());
#pragma omp parallel
  {
    ContractionWorkspace ws;
#pragma omp for schedule(static)
    for (std::int64_t m = 0; m < m_count; ++m) {
      out[static_cast<std::size_t>(m)] =
          contract<false>(a, strings[static_cast<std::size_t>(m)], ws, nullptr);
    }
  }
}

void measure_all_dense_serial(const Matrix& rho, std::span<const PauliString> strings,
                              std::span<double> out) {
  for (std::size_t m = 0; m < strings.size(); ++m) {
    const Matrix e = pauli_dense(strings[m]);
    out[m] = rho.cwiseProduct(e.transpose()).sum().real();
  }
}

void measure_all_dense_parallel(const Matrix& rho, std::span<const PauliString> strings,
                                std::span<double> out) {
  const auto m_count = static_cast<std::int64_t>(strings.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t m = 0; m < m_count; ++m) {
    const Matrix e = pauli_dense(strings[static_cast<std::size_t>(m)]);
    out[static_cast<std::size_t>(m)] = rho.cwiseProduct(e.transpose()).sum().real();
  }
}

BlockTT apply_pauli(const BlockTT& a, const PauliString& p, Complex weight) {
  check_pauli_layout(a, p);
  std::vector<Core> cores;
  cores.reserve(a.num_sites());
  for (std::size_t n = 0; n < a.num_sites(); ++n) {
    const Core& g = a.core(n);
    const SiteAction act = site_action(p[n]);
    Core out(g.left(), 2, g.block(), g.right());
    const Index slab = g.block() * g.right();
    for (Index aa = 0; aa < g.left(); ++aa)
      for (Index ip = 0; ip < 2; ++ip) {
        const Complex ph = n + 1 == a.num_sites() ? act.phase[ip] * weight : act.phase[ip];
        const Complex* src = g.data().data() + (aa * 2 + (ip ^ act.flip)) * slab;
        Complex* dst = out.data().data() + (aa * 2 + ip) * slab;
        for (Index t = 0; t < slab; ++t) dst[t] = ph * src[t];
      }
    cores.push_back(std::move(out));
  }
  return BlockTT(std::move(cores), a.block_site());
}

BlockTT weighted_pauli_sum(const BlockTT& a, std::span<const PauliString> strings,
                           std::span<const double> weights, double tol) {
  std::vector<BlockTT> terms;
  terms.reserve(strings.size());
  for (std::size_t m = 0; m < strings.size(); ++m) {
    terms.push_back(apply_pauli(a, strings[m], weights[m]));
  }
  return tt_svd(tt_add(terms), unbounded_caps(a.num_sites()), tol).tt;
}

BlockTT pauli_sum_apply_serial(const BlockTT& a, std::span<const PauliString> strings,
                               std::span<const double> weights, std::size_t batch, double tol) {
  check_sum_inputs(a, strings, weights, batch);
  const auto ranges = batch_ranges(strings.size(), batch);
  std::vector<BlockTT> level;
  level.reserve(ranges.size());
  for (const auto& [lo, hi] : ranges) {
    level.push_back(weighted_pauli_sum(a, strings.subspan(lo, hi - lo),
                                       weights.subspan(lo, hi - lo), tol));
  }
  while (level.size() > 1) {
    std::vector<BlockTT> up((level.size() + 1) / 2);
    for (std::size_t i = 0; i < up.size(); ++i) {
      up[i] = 2 * i + 1 < level.size() ? round_sum(level[2 * i], level[2 * i + 1], tol)
                                       : std::move(level[2 * i]);
    }
    level = std::move(up);
  }
  return std::move(level.front());
}

BlockTT pauli_sum_apply_parallel(const BlockTT& a, std::span<const PauliString> strings,
                                 std::span<const double> weights, std::size_t batch, double tol) {
  check_sum_inputs(a, strings, weights, batch);
  const auto ranges = batch_ranges(strings.size(), batch);
  std::vector<BlockTT> level(ranges.size());
  const auto n_batches = static_cast<std::int64_t>(ranges.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < n_batches; ++b) {
    const auto [lo, hi] = ranges[static_cast<std::size_t>(b)];
    level[static_cast<std::size_t>(b)] = weighted_pauli_sum(
        a, strings.subspan(lo, hi - lo), weights.subspan(lo, hi - lo), tol);
  }
  while (level.size() > 1) {
    std::vector<BlockTT> up((level.size() + 1) / 2);
    const auto n_up = static_cast<std::int64_t>(up.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n_up; ++i) {
      const auto u = static_cast<std::size_t>(i);
      up[u] = 2 * u + 1 < level.size() ? round_sum(level[2 * u], level[2 * u + 1], tol)
                                       : level[2 * u];
    }
    level = std::move(up);
  }
  return std::move(level.front());
}

PauliSumPlan::PauliSumPlan(std::span<const PauliString> strings) {
  if (strings.empty()) throw ShapeError("empty Pauli sum");
  n_sites_ = strings.front().size();
  if (n_sites_ == 0) throw ShapeError("empty Pauli string");
  for (const auto& p : strings) {
    if (p.size() != n_sites_) throw ShapeError("Pauli strings differ in length");
  }
  const std::size_t n = n_sites_;
  const std::size_t m_count = strings.size();

  // Distinct prefixes ending at bond b and suffixes starting at bond b, keyed
  // by their base-4 code (the length is implied by b).
  std::vector<std::vector<Index>> pre(n + 1, std::vector<Index>(m_count));
  std::vector<std::vector<Index>> suf(n + 1, std::vector<Index>(m_count));
  prefix_count_.assign(n + 1, 0);
  suffix_count_.assign(n + 1, 0);
  for (std::size_t b = 0; b <= n; ++b) {
    std::map<std::uint64_t, Index> pids, sids;
    for (std::size_t m = 0; m < m_count; ++m) {
      std::uint64_t pc = 0, sc = 0;
      for (std::size_t j = 0; j < b; ++j) pc = pc * 4 + static_cast<std::uint64_t>(strings[m][j]);
      for (std::size_t j = b; j < n; ++j) sc = sc * 4 + static_cast<std::uint64_t>(strings[m][j]);
      pre[b][m] = pids.try_emplace(pc, static_cast<Index>(pids.size())).first->second;
      suf[b][m] = sids.try_emplace(sc, static_cast<Index>(sids.size())).first->second;
    }
    prefix_count_[b] = static_cast<Index>(pids.size());
    suffix_count_[b] = static_cast<Index>(sids.size());
  }

  // Junction bond with the smallest widest bond.
  if (n == 1) {
    cut_ = 1;
  } else {
    Index best = std::numeric_limits<Index>::max();
    for (std::size_t c = 1; c < n; ++c) {
      Index widest = std::min(prefix_count_[c], suffix_count_[c]);
      for (std::size_t b = 1; b < c; ++b) widest = std::max(widest, prefix_count_[b]);
      for (std::size_t b = c + 1; b < n; ++b) widest = std::max(widest, suffix_count_[b]);
      if (widest < best) {
        best = widest;
        cut_ = c;
      }
    }
  }

  edges_.assign(n, {});
  for (std::size_t j = 0; j < n; ++j) {
    std::set<std::tuple<Index, Index, int>> seen;
    for (std::size_t m = 0; m < m_count; ++m) {
      const bool left = j < cut_;
      const Index from = left ? pre[j][m] : suf[j][m];
      const Index to = left ? pre[j + 1][m] : suf[j + 1][m];
      if (seen.emplace(from, to, static_cast<int>(strings[m][j])).second) {
        edges_[j].push_back({from, to, strings[m][j]});
      }
    }
  }
  junction_row_ = pre[cut_];
  junction_col_ = suf[cut_];
}

TTMatrix PauliSumPlan::mpo(std::span<const double> weights) const {
  if (weights.size() != num_terms()) throw ShapeError("one weight per Pauli string expected");
  const std::size_t n = n_sites_;
  RowMatrix c = RowMatrix::Zero(prefix_count_[cut_], suffix_count_[cut_]);
  for (std::size_t m = 0; m < weights.size(); ++m) c(junction_row_[m], junction_col_[m]) += weights[m];

  std::vector<Core> cores;
  cores.reserve(n);
  if (n == 1) {
    Core w(1, 2, 2, 1);
    for (const auto& e : edges_[0]) {
      const auto s = pauli_entries(e.letter);
      for (Index i = 0; i < 2; ++i)
        for (Index k = 0; k < 2; ++k) w(0, i, k, 0) += c(e.to, 0) * s[static_cast<std::size_t>(2 * i + k)];
    }
    cores.push_back(std::move(w));
    return TTMatrix(std::move(cores));
  }

  const TruncatedSvd svd = truncated_svd(c, std::numeric_limits<Index>::max(), 0.0);
  const Index rho = svd.s.size();
  RowMatrix lft = svd.u * svd.s.asDiagonal();
  const RowMatrix& rgt = svd.vh;

  for (std::size_t j = 0; j < n; ++j) {
    const Index lb = j < cut_ ? prefix_count_[j] : (j == cut_ ? rho : suffix_count_[j]);
    const Index rb = j + 1 < cut_ ? prefix_count_[j + 1]
                                  : (j + 1 == cut_ ? rho : suffix_count_[j + 1]);
    Core w(lb, 2, 2, rb);
    for (const auto& e : edges_[j]) {
      const auto s = pauli_entries(e.letter);
      for (Index i = 0; i < 2; ++i)
        for (Index k = 0; k < 2; ++k) {
          const Complex v = s[static_cast<std::size_t>(2 * i + k)];
          if (v == Complex{}) continue;
          if (j + 1 == cut_) {
            for (Index t = 0; t < rho; ++t) w(e.from, i, k, t) += v * lft(e.to, t);
          } else if (j == cut_) {
            for (Index t = 0; t < rho; ++t) w(t, i, k, e.to) += rgt(t, e.from) * v;
          } else {
            w(e.from, i, k, e.to) += v;
          }
        }
    }
    cores.push_back(std::move(w));
  }
  return TTMatrix(std::move(cores));
}

namespace {

Core operator_core(const Core& ce, const Core& ca) {
  if (ce.block() != ca.phys()) throw ShapeError("operator column extent != physical extent");
  const Index la = ca.left(), ra = ca.right(), kd = ca.block();
  Core out(ce.left() * la, ce.phys(), kd, ce.right() * ra);
  const Index slab = kd * ra;
  for (Index ae = 0; ae < ce.left(); ++ae)
    for (Index i = 0; i < ce.phys(); ++i)
      for (Index j = 0; j < ce.block(); ++j)
        for (Index be = 0; be < ce.right(); ++be) {
          const Complex w = ce(ae, i, j, be);
          if (w == Complex{}) continue;
          for (Index aa = 0; aa < la; ++aa) {
            const Complex* src = ca.data().data() + (aa * ca.phys() + j) * slab;
            for (Index k = 0; k < kd; ++k) {
              Complex* dst = &out(ae * la + aa, i, k, be * ra);
              for (Index ba = 0; ba < ra; ++ba) dst[ba] += w * src[k * ra + ba];
            }
          }
        }
  return out;
}

void check_mpo(const TTMatrix& e, const BlockTT& a) {
  if (e.num_sites() != a.num_sites()) throw ShapeError("site count mismatch");
  for (std::size_t n = 0; n < a.num_sites(); ++n) {
    if (e.core(n).block() != a.core(n).phys()) {
      throw ShapeError("operator column extent != physical extent");
    }
  }
}

}  // namespace

BlockTT apply_mpo_serial(const TTMatrix& e, const BlockTT& a) {
  check_mpo(e, a);
  std::vector<Core> cores;
  cores.reserve(a.num_sites());
  for (std::size_t n = 0; n < a.num_sites(); ++n) cores.push_back(operator_core(e.core(n), a.core(n)));
  return BlockTT(std::move(cores), a.block_site());
}

BlockTT apply_mpo_parallel(const TTMatrix& e, const BlockTT& a) {
  check_mpo(e, a);
  std::vector<Core> cores(a.num_sites());
  const auto n_sites = static_cast<std::int64_t>(a.num_sites());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t n = 0; n < n_sites; ++n) {
    const auto u = static_cast<std::size_t>(n);
    cores[u] = operator_core(e.core(u), a.core(u));
  }
  return BlockTT(std::move(cores), a.block_site());
}

BlockTT pauli_sum_apply_mpo(const BlockTT& a, const PauliSumPlan& plan,
                            std::span<const double> weights, double tol, bool parallel) {
  if (plan.num_sites() != a.num_sites()) throw ShapeError("site count mismatch");
  const TTMatrix w = plan.mpo(weights);
  const BlockTT g = parallel ? apply_mpo_parallel(w, a) : apply_mpo_serial(w, a);
  return tt_svd(g, unbounded_caps(a.num_sites()), tol).tt;
}

namespace {

void check_dense_factor(const Matrix& a, std::span<const PauliString> strings) {
  for (const auto& p : strings) {
    if (a.rows() != (Index{1} << p.size())) throw ShapeError("factor rows must equal 2^N");
  }
}

// W[b ^ x, b] += w * phase(b) for every row c = b ^ x in [lo, hi). Entries
// receive their terms in list order whatever the row split.
void accumulate_operator_rows(std::span<const PauliString> strings, std::span<const double> weights,
                              RowMatrix& w, std::uint64_t lo, std::uint64_t hi) {
  for (std::size_t m = 0; m < strings.size(); ++m) {
    const auto& p = strings[m];
    const std::uint64_t x = p.x_mask(), z = p.z_mask();
    const Complex base = kIPow[p.y_count() & 3] * weights[m];
    for (std::uint64_t c = lo; c < hi; ++c) {
      const std::uint64_t b = c ^ x;
      Complex& dst = w(static_cast<Index>(c), static_cast<Index>(b));
      if (std::popcount(b & z) & 1) {
        dst -= base;
      } else {
        dst += base;
      }
    }
  }
}

// Tr(E_p rho) = i^#Y sum_b (-1)^popcount(b & z) rho[b, b ^ x]; only the real
// part is accumulated.
double operator_trace(const RowMatrix& rho, const PauliString& p) {
  const std::uint64_t d = static_cast<std::uint64_t>(rho.rows());
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  const int ny = p.y_count() & 3;
  const bool use_imag = ny & 1;
  double s = 0.0;
  for (std::uint64_t b = 0; b < d; ++b) {
    const Complex& v = rho(static_cast<Index>(b), static_cast<Index>(b ^ x));
    const double part = use_imag ? v.imag() : v.real();
    s += (std::popcount(b & z) & 1) ? -part : part;
  }
  // i^1 * (u + iv) has real part -v, i^2 gives -u, i^3 gives v.
  return (ny == 1 || ny == 2) ? -s : s;
}

constexpr std::uint64_t kRowBlock = 64;

}  // namespace

Matrix dense_pauli_sum_apply_serial(const Matrix& a, std::span<const PauliString> strings,
                                    std::span<const double> weights) {
  check_dense_factor(a, strings);
  if (strings.size() != weights.size()) throw ShapeError("strings and weights differ in length");
  RowMatrix w = RowMatrix::Zero(a.rows(), a.rows());
  accumulate_operator_rows(strings, weights, w, 0, static_cast<std::uint64_t>(a.rows()));
  return w * a;
}

Matrix dense_pauli_sum_apply_parallel(const Matrix& a, std::span<const PauliString> strings,
                                      std::span<const double> weights) {
  check_dense_factor(a, strings);
  if (strings.size() != weights.size()) throw ShapeError("strings and weights differ in length");
  RowMatrix w = RowMatrix::Zero(a.rows(), a.rows());
  const auto d = static_cast<std::uint64_t>(a.rows());
  const auto n_blocks = static_cast<std::int64_t>((d + kRowBlock - 1) / kRowBlock);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < n_blocks; ++blk) {
    const std::uint64_t lo = static_cast<std::uint64_t>(blk) * kRowBlock;
    accumulate_operator_rows(strings, weights, w, lo, std::min(d, lo + kRowBlock));
  }
  return w * a;
}

void dense_factor_measure_serial(const Matrix& a, std::span<const PauliString> strings,
                                 std::span<double> out) {
  check_dense_factor(a, strings);
  const RowMatrix rho = a * a.adjoint();
  for (std::size_t m = 0; m < strings.size(); ++m) out[m] = operator_trace(rho, strings[m]);
}

void dense_factor_measure_parallel(const Matrix& a, std::span<const PauliString> strings,
                                   std::span<double> out) {
  check_dense_factor(a, strings);
  const RowMatrix rho = a * a.adjoint();
  const auto m_count = static_cast<std::int64_t>(strings.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t m = 0; m < m_count; ++m) {
    out[static_cast<std::size_t>(m)] = operator_trace(rho, strings[static_cast<std::size_t>(m)]);
  }
}

}  // namespace kernels
}  // namespace ttqst
