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

#include "ttqst/tt_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ttqst/errors.hpp"

namespace ttqst {

namespace {

void check_chain(std::span<const Core> cores) {
  if (cores.empty()) throw ShapeError("a train needs at least one core");
  if (cores.front().left() != 1) throw ShapeError("first core must have left bond 1");
  if (cores.back().right() != 1) throw ShapeError("last core must have right bond 1");
  for (std::size_t n = 0; n + 1 < cores.size(); ++n) {
    if (cores[n].right() != cores[n + 1].left()) {
      throw ShapeError("bond mismatch between sites " + std::to_string(n) + " and " +
                       std::to_string(n + 1));
    }
  }
}

// Q R of the left unfolding of `cur`; Q stays, R is pushed into `next`.
void push_right(Core& cur, Core& next) {
  RowMatrix q, r;
  thin_qr(cur.left_unfolding(), q, r);
  RowMatrix moved = r * next.right_unfolding();
  cur = Core::from_left_unfolding(q, cur.left(), cur.phys(), cur.block());
  next = Core::from_right_unfolding(moved, next.phys(), next.block(), next.right());
}

// L Q of the right unfolding of `cur`; Q stays, L is pushed into `prev`.
void push_left(Core& prev, Core& cur) {
  RowMatrix q, r;
  thin_qr(cur.right_unfolding().adjoint(), q, r);
  RowMatrix moved = prev.left_unfolding() * r.adjoint();
  cur = Core::from_right_unfolding(q.adjoint(), cur.phys(), cur.block(), cur.right());
  prev = Core::from_left_unfolding(moved, prev.left(), prev.phys(), prev.block());
}

void check_caps(const RankVector& caps, std::size_t n_sites) {
  if (caps.size() != n_sites + 1) {
    throw ShapeError("rank vector must have N+1 entries");
  }
  for (Index r : caps) {
    if (r < 1) throw ShapeError("target ranks must be positive");
  }
}

void check_same_layout(const BlockTT& a, const BlockTT& b) {
  if (a.num_sites() != b.num_sites()) throw ShapeError("site count mismatch");
  if (a.block_site() != b.block_site()) throw ShapeError("block position mismatch");
  if (a.block_dim() != b.block_dim()) throw ShapeError("block dimension mismatch");
  for (std::size_t n = 0; n < a.num_sites(); ++n) {
    if (a.core(n).phys() != b.core(n).phys()) throw ShapeError("physical extent mismatch");
  }
}

// Sequential chain product: rows enumerate the processed modes in C order.
RowMatrix chain_product(std::span<const Core> cores, std::size_t limit) {
  std::vector<Index> shape;
  for (const auto& c : cores) shape.push_back(c.mode());
  check_dense_size(shape, limit);
  RowMatrix acc = RowMatrix::Ones(1, 1);
  for (const auto& c : cores) {
    RowMatrix next = acc * c.right_unfolding();
    acc = Eigen::Map<RowMatrix>(next.data(), acc.rows() * c.mode(), c.right());
  }
  return acc;
}

}  // namespace

RankVector uniform_ranks(std::size_t n_sites, Index r) {
  RankVector ranks(n_sites + 1, r);
  ranks.front() = 1;
  ranks.back() = 1;
  return ranks;
}

BlockTT::BlockTT(std::vector<Core> cores, std::size_t block_site, Orthogonality orth)
    : cores_(std::move(cores)), block_site_(block_site), orth_(orth) {
  check_chain(cores_);
  if (block_site_ >= cores_.size()) throw ShapeError("block position outside the chain");
  for (std::size_t n = 0; n < cores_.size(); ++n) {
    if (n != block_site_ && cores_[n].block() != 1) {
      throw ShapeError("only the block core may carry a block index");
    }
  }
}

Index BlockTT::dim() const {
  Index d = 1;
  for (const auto& c : cores_) d *= c.phys();
  return d;
}

RankVector BlockTT::ranks() const {
  RankVector r;
  r.reserve(cores_.size() + 1);
  for (const auto& c : cores_) r.push_back(c.left());
  r.push_back(cores_.back().right());
  return r;
}

TTMatrix::TTMatrix(std::vector<Core> cores) : cores_(std::move(cores)) { check_chain(cores_); }

RankVector TTMatrix::ranks() const {
  RankVector r;
  for (const auto& c : cores_) r.push_back(c.left());
  r.push_back(cores_.back().right());
  return r;
}

Index TTMatrix::row_dim() const {
  Index d = 1;
  for (const auto& c : cores_) d *= c.phys();
  return d;
}

Index TTMatrix::col_dim() const {
  Index d = 1;
  for (const auto& c : cores_) d *= c.block();
  return d;
}

BlockTT left_orthogonalize(const BlockTT& a) {
  std::vector<Core> cores(a.cores().begin(), a.cores().end());
  for (std::size_t n = 0; n + 1 < cores.size(); ++n) push_right(cores[n], cores[n + 1]);
  return BlockTT(std::move(cores), a.block_site(), Orthogonality::left);
}

double left_orthogonality_error(const BlockTT& a) {
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < a.num_sites(); ++n) {
    const auto u = a.core(n).left_unfolding();
    const RowMatrix gram = u.adjoint() * u;
    worst = std::max(worst, (gram - RowMatrix::Identity(gram.rows(), gram.cols())).norm());
  }
  return worst;
}

TTSvdResult tt_svd(const BlockTT& a, const RankVector& max_ranks, double tol) {
  if (tol < 0.0) throw ShapeError("tolerance must be nonnegative");
  const std::size_t n_sites = a.num_sites();
  check_caps(max_ranks, n_sites);

  std::vector<Core> cores(a.cores().begin(), a.cores().end());
  for (std::size_t n = n_sites - 1; n > 0; --n) push_left(cores[n - 1], cores[n]);

  const double norm = cores.front().norm();
  const double step_tol =
      n_sites > 1 ? tol * norm / std::sqrt(static_cast<double>(n_sites - 1)) : 0.0;

  double discarded = 0.0;
  for (std::size_t n = 0; n + 1 < n_sites; ++n) {
    Core& cur = cores[n];
    Core& next = cores[n + 1];
    TruncatedSvd svd = truncated_svd(cur.left_unfolding(), max_ranks[n + 1], step_tol);
    discarded += svd.discarded_sq;
    RowMatrix carry = svd.s.asDiagonal() * svd.vh;
    RowMatrix moved = carry * next.right_unfolding();
    cur = Core::from_left_unfolding(svd.u, cur.left(), cur.phys(), cur.block());
    next = Core::from_right_unfolding(moved, next.phys(), next.block(), next.right());
  }
  return {BlockTT(std::move(cores), a.block_site(), Orthogonality::left), std::sqrt(discarded)};
}

TTSvdResult tt_svd(const DenseTensor& x, std::size_t block_site, const RankVector& max_ranks,
                   double tol, std::size_t limit) {
  if (tol < 0.0) throw ShapeError("tolerance must be nonnegative");
  check_dense_size(x.shape(), limit);
  if (x.order() < 2) throw ShapeError("dense block tensor needs order >= 2");
  const std::size_t n_sites = x.order() - 1;
  if (block_site >= n_sites) throw ShapeError("block position outside the chain");
  check_caps(max_ranks, n_sites);

  std::vector<Index> phys(n_sites), block(n_sites, 1);
  for (std::size_t n = 0, d = 0; n < n_sites; ++n) {
    phys[n] = x.shape()[d++];
    if (n == block_site) block[n] = x.shape()[d++];
  }

  const double step_tol =
      n_sites > 1 ? tol * x.norm() / std::sqrt(static_cast<double>(n_sites - 1)) : 0.0;

  std::vector<Core> cores;
  double discarded = 0.0;
  Index rank = 1;
  RowMatrix rest = Eigen::Map<const RowMatrix>(x.data().data(), 1, x.size());
  for (std::size_t n = 0; n + 1 < n_sites; ++n) {
    const Index mode = phys[n] * block[n];
    RowMatrix unfold = Eigen::Map<const RowMatrix>(rest.data(), rank * mode, rest.size() / (rank * mode));
    TruncatedSvd svd = truncated_svd(unfold, max_ranks[n + 1], step_tol);
    discarded += svd.discarded_sq;
    cores.push_back(Core::from_left_unfolding(svd.u, rank, phys[n], block[n]));
    rest = svd.s.asDiagonal() * svd.vh;
    rank = svd.s.size();
  }
  RowMatrix last = Eigen::Map<const RowMatrix>(rest.data(), rank, rest.size() / rank);
  cores.push_back(Core::from_right_unfolding(last, phys.back(), block.back(), 1));
  return {BlockTT(std::move(cores), block_site, Orthogonality::left), std::sqrt(discarded)};
}

BlockTT tt_add(const BlockTT& a, const BlockTT& b) {
  const BlockTT terms[] = {a, b};
  return tt_add(std::span<const BlockTT>(terms));
}

BlockTT tt_add(std::span<const BlockTT> terms) {
  if (terms.empty()) throw ShapeError("tt_add needs at least one term");
  for (const auto& t : terms.subspan(1)) check_same_layout(terms.front(), t);
  if (terms.size() == 1) return terms.front();

  const std::size_t n_sites = terms.front().num_sites();
  std::vector<Core> cores;
  cores.reserve(n_sites);
  for (std::size_t n = 0; n < n_sites; ++n) {
    const bool first = n == 0;
    const bool last = n + 1 == n_sites;
    Index left = 0, right = 0;
    for (const auto& t : terms) {
      left += t.core(n).left();
      right += t.core(n).right();
    }
    if (first) left = 1;
    if (last) right = 1;

    const Core& proto = terms.front().core(n);
    Core sum(left, proto.phys(), proto.block(), right);
    Index off_l = 0, off_r = 0;
    for (const auto& t : terms) {
      const Core& c = t.core(n);
      for (Index aa = 0; aa < c.left(); ++aa)
        for (Index i = 0; i < c.phys(); ++i)
          for (Index k = 0; k < c.block(); ++k)
            for (Index bb = 0; bb < c.right(); ++bb) {
              sum(first ? 0 : off_l + aa, i, k, last ? 0 : off_r + bb) += c(aa, i, k, bb);
            }
      off_l += c.left();
      off_r += c.right();
    }
    cores.push_back(std::move(sum));
  }
  return BlockTT(std::move(cores), terms.front().block_site());
}

BlockTT tt_scale(const BlockTT& a, Complex c) {
  std::vector<Core> cores(a.cores().begin(), a.cores().end());
  cores.back().scale(c);
  return BlockTT(std::move(cores), a.block_site(), a.orthogonality());
}

Complex inner(const BlockTT& a, const BlockTT& b) {
  check_same_layout(a, b);
  // env(a', b) accumulates sum conj(A) B over processed sites.
  RowMatrix env = RowMatrix::Ones(1, 1);
  for (std::size_t n = 0; n < a.num_sites(); ++n) {
    const Core& ca = a.core(n);
    const Core& cb = b.core(n);
    RowMatrix next = RowMatrix::Zero(ca.right(), cb.right());
    using Strided = Eigen::Map<const RowMatrix, 0, Eigen::OuterStride<>>;
    for (Index m = 0; m < ca.mode(); ++m) {
      Strided sa(ca.data().data() + m * ca.right(), ca.left(), ca.right(),
                 Eigen::OuterStride<>(ca.mode() * ca.right()));
      Strided sb(cb.data().data() + m * cb.right(), cb.left(), cb.right(),
                 Eigen::OuterStride<>(cb.mode() * cb.right()));
      next.noalias() += sa.adjoint() * env * sb;
    }
    env = std::move(next);
  }
  return env(0, 0);
}

double frob_norm(const BlockTT& a) {
  if (a.orthogonality() == Orthogonality::left) return a.core(a.num_sites() - 1).norm();
  return std::sqrt(std::max(0.0, inner(a, a).real()));
}

DenseTensor densify(const BlockTT& a, std::size_t limit) {
  std::vector<Index> shape;
  for (std::size_t n = 0; n < a.num_sites(); ++n) {
    shape.push_back(a.core(n).phys());
    if (n == a.block_site()) shape.push_back(a.core(n).block());
  }
  DenseTensor out(shape, limit);
  RowMatrix flat = chain_product(a.cores(), limit);
  std::copy(flat.data(), flat.data() + flat.size(), out.data().begin());
  return out;
}

DenseTensor densify(const TTMatrix& e, std::size_t limit) {
  std::vector<Index> shape;
  for (const auto& c : e.cores()) {
    shape.push_back(c.phys());
    shape.push_back(c.block());
  }
  DenseTensor out(shape, limit);
  RowMatrix flat = chain_product(e.cores(), limit);
  std::copy(flat.data(), flat.data() + flat.size(), out.data().begin());
  return out;
}

Matrix to_matrix(const BlockTT& a, std::size_t limit) {
  const DenseTensor t = densify(a, limit);
  Index prefix = 1;
  for (std::size_t n = 0; n <= a.block_site(); ++n) prefix *= a.core(n).phys();
  const Index k_dim = a.block_dim();
  const Index suffix = a.dim() / prefix;
  Matrix m(a.dim(), k_dim);
  for (Index p = 0; p < prefix; ++p)
    for (Index k = 0; k < k_dim; ++k)
      for (Index s = 0; s < suffix; ++s) m(p * suffix + s, k) = t[(p * k_dim + k) * suffix + s];
  return m;
}

Matrix to_matrix(const TTMatrix& e, std::size_t limit) {
  const DenseTensor t = densify(e, limit);
  const std::size_t n_sites = e.num_sites();
  Matrix m(e.row_dim(), e.col_dim());
  std::vector<Index> digits(2 * n_sites);
  for (Index flat = 0; flat < t.size(); ++flat) {
    Index rem = flat;
    for (std::size_t d = 2 * n_sites; d-- > 0;) {
      digits[d] = rem % t.shape()[d];
      rem /= t.shape()[d];
    }
    Index row = 0, col = 0;
    for (std::size_t n = 0; n < n_sites; ++n) {
      row = row * e.core(n).phys() + digits[2 * n];
      col = col * e.core(n).block() + digits[2 * n + 1];
    }
    m(row, col) = t[flat];
  }
  return m;
}

std::vector<Index> block_tensor_shape(std::size_t n_sites, std::size_t block_site, Index k) {
  if (block_site >= n_sites) throw ShapeError("block position outside the chain");
  std::vector<Index> shape;
  for (std::size_t n = 0; n < n_sites; ++n) {
    shape.push_back(2);
    if (n == block_site) shape.push_back(k);
  }
  return shape;
}

DenseTensor block_tensor_from_matrix(const Matrix& a, std::size_t n_sites, std::size_t block_site,
                                     std::size_t limit) {
  if (a.rows() != (Index{1} << n_sites)) throw ShapeError("matrix rows must equal 2^N");
  DenseTensor t(block_tensor_shape(n_sites, block_site, a.cols()), limit);
  const Index prefix = Index{1} << (block_site + 1);
  const Index suffix = a.rows() / prefix;
  const Index k_dim = a.cols();
  for (Index p = 0; p < prefix; ++p)
    for (Index k = 0; k < k_dim; ++k)
      for (Index s = 0; s < suffix; ++s) t[(p * k_dim + k) * suffix + s] = a(p * suffix + s, k);
  return t;
}

BlockTT apply_operator(const TTMatrix& e, const BlockTT& a) {
  if (e.num_sites() != a.num_sites()) throw ShapeError("site count mismatch");
  std::vector<Core> cores;
  cores.reserve(a.num_sites());
  for (std::size_t n = 0; n < a.num_sites(); ++n) {
    const Core& ce = e.core(n);
    const Core& ca = a.core(n);
    if (ce.block() != ca.phys()) throw ShapeError("operator column extent != physical extent");
    Core out(ce.left() * ca.left(), ce.phys(), ca.block(), ce.right() * ca.right());
    for (Index ae = 0; ae < ce.left(); ++ae)
      for (Index aa = 0; aa < ca.left(); ++aa)
        for (Index i = 0; i < ce.phys(); ++i)
          for (Index j = 0; j < ce.block(); ++j)
            for (Index be = 0; be < ce.right(); ++be) {
              const Complex w = ce(ae, i, j, be);
              if (w == Complex{}) continue;
              for (Index k = 0; k < ca.block(); ++k)
                for (Index ba = 0; ba < ca.right(); ++ba) {
                  out(ae * ca.left() + aa, i, k, be * ca.right() + ba) += w * ca(aa, j, k, ba);
                }
            }
    cores.push_back(std::move(out));
  }
  return BlockTT(std::move(cores), a.block_site());
}

TTSvdResult shift_block(const BlockTT& a, Direction direction, Index new_rank) {
  if (new_rank < 1) throw ShapeError("new rank must be positive");
  const std::size_t b = a.block_site();
  const std::size_t n_sites = a.num_sites();
  if (direction == Direction::right && b + 1 >= n_sites) {
    throw ShapeError("cannot shift the block past the right end");
  }
  if (direction == Direction::left && b == 0) {
    throw ShapeError("cannot shift the block past the left end");
  }
  const std::size_t lo = direction == Direction::right ? b : b - 1;
  const std::size_t hi = lo + 1;

  std::vector<Core> cores(a.cores().begin(), a.cores().end());
  for (std::size_t n = 0; n < lo; ++n) push_right(cores[n], cores[n + 1]);
  for (std::size_t n = n_sites - 1; n > hi; --n) push_left(cores[n - 1], cores[n]);

  const Core& cl = cores[lo];
  const Core& cr = cores[hi];
  const Index k_dim = a.block_dim();
  const Index pl = cl.phys(), pr = cr.phys();
  const Index left = cl.left(), right = cr.right();

  // merged(a, il, ir, k, c) contracted over the shared bond, then laid out
  // with k on the side of the new block core.
  RowMatrix pair = cl.left_unfolding() * cr.right_unfolding();
  const bool to_right = direction == Direction::right;
  const Index rows = to_right ? left * pl : left * pl * k_dim;
  const Index cols = to_right ? pr * k_dim * right : pr * right;
  RowMatrix unfold(rows, cols);
  for (Index aa = 0; aa < left; ++aa)
    for (Index il = 0; il < pl; ++il)
      for (Index ir = 0; ir < pr; ++ir)
        for (Index k = 0; k < k_dim; ++k)
          for (Index c = 0; c < right; ++c) {
            // source layout: row (aa, il, kl) x col (ir, kr, c), block on one side only
            const Complex v = to_right ? pair((aa * pl + il) * k_dim + k, ir * right + c)
                                       : pair(aa * pl + il, (ir * k_dim + k) * right + c);
            if (to_right) {
              unfold(aa * pl + il, (ir * k_dim + k) * right + c) = v;
            } else {
              unfold((aa * pl + il) * k_dim + k, ir * right + c) = v;
            }
          }

  TruncatedSvd svd = truncated_svd(unfold, new_rank, 0.0);
  if (to_right) {
    cores[lo] = Core::from_left_unfolding(svd.u, left, pl, 1);
    cores[hi] = Core::from_right_unfolding(svd.s.asDiagonal() * svd.vh, pr, k_dim, right);
  } else {
    RowMatrix us = svd.u * svd.s.asDiagonal();
    cores[lo] = Core::from_left_unfolding(us, left, pl, k_dim);
    cores[hi] = Core::from_right_unfolding(svd.vh, pr, 1, right);
  }
  return {BlockTT(std::move(cores), to_right ? hi : lo), std::sqrt(svd.discarded_sq)};
}

BlockTT random_block_tt(std::size_t n_sites, Index k, const RankVector& ranks,
                        std::size_t block_site, std::mt19937_64& rng) {
  check_caps(ranks, n_sites);
  if (ranks.front() != 1 || ranks.back() != 1) throw ShapeError("boundary ranks must be 1");
  if (k < 1) throw ShapeError("block dimension must be positive");
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  std::vector<Core> cores;
  for (std::size_t n = 0; n < n_sites; ++n) {
    Core c(ranks[n], 2, n == block_site ? k : 1, ranks[n + 1]);
    for (auto& z : c.data()) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z = {re, im};
    }
    cores.push_back(std::move(c));
  }
  return BlockTT(std::move(cores), block_site);
}

}  // namespace ttqst
