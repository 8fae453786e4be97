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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ttqst/linalg.hpp"

namespace ttqst {

/// Default cap on the element count of any dense materialization.
inline constexpr std::size_t kDefaultDensifyLimit = std::size_t{1} << 24;

/**
 * A 4-way core with extents (left, phys, block, right).
 *
 * Storage is C-ordered: element (a, i, k, b) lives at
 * ((a * phys + i) * block + k) * right + b. Consequently the left unfolding
 * (left*phys*block) x right and the right unfolding left x (phys*block*right)
 * are both plain row-major views of the same buffer.
 *
 * An order-3 train core is a Core with block == 1. The same type holds
 * TT-matrix cores, where (phys, block) are the (row, column) operator indices.
 */
class Core {
 public:
  Core() = default;
  Core(Index left, Index phys, Index block, Index right);

  Index left() const { return left_; }
  Index phys() const { return phys_; }
  Index block() const { return block_; }
  Index right() const { return right_; }
  /// Combined extent of the physical and block indices.
  Index mode() const { return phys_ * block_; }
  Index size() const { return static_cast<Index>(data_.size()); }

  Complex& operator()(Index a, Index i, Index k, Index b) {
    return data_[static_cast<std::size_t>(((a * phys_ + i) * block_ + k) * right_ + b)];
  }
  const Complex& operator()(Index a, Index i, Index k, Index b) const {
    return data_[static_cast<std::size_t>(((a * phys_ + i) * block_ + k) * right_ + b)];
  }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  RowMatrixMap left_unfolding() { return {data_.data(), left_ * mode(), right_}; }
  ConstRowMatrixMap left_unfolding() const { return {data_.data(), left_ * mode(), right_}; }
  RowMatrixMap right_unfolding() { return {data_.data(), left_, mode() * right_}; }
  ConstRowMatrixMap right_unfolding() const { return {data_.data(), left_, mode() * right_}; }

  static Core from_left_unfolding(const RowMatrix& m, Index left, Index phys, Index block);
  static Core from_right_unfolding(const RowMatrix& m, Index phys, Index block, Index right);

  double norm() const;
  void scale(Complex c);

  friend bool operator==(const Core&, const Core&) = default;

 private:
  Index left_ = 0;
  Index phys_ = 0;
  Index block_ = 0;
  Index right_ = 0;
  std::vector<Complex> data_;
};

/// Dense complex tensor in C order (first index slowest).
class DenseTensor {
 public:
  DenseTensor() = default;
  /// Zero tensor. Throws SizeLimitError when the element count exceeds `limit`.
  explicit DenseTensor(std::vector<Index> shape, std::size_t limit = kDefaultDensifyLimit);

  const std::vector<Index>& shape() const { return shape_; }
  std::size_t order() const { return shape_.size(); }
  Index size() const { return static_cast<Index>(data_.size()); }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  Complex& operator[](Index flat) { return data_[static_cast<std::size_t>(flat)]; }
  const Complex& operator[](Index flat) const { return data_[static_cast<std::size_t>(flat)]; }
  Complex& at(std::span<const Index> idx);
  const Complex& at(std::span<const Index> idx) const;

  double norm() const;

 private:
  Index flat_index(std::span<const Index> idx) const;

  std::vector<Index> shape_;
  std::vector<Complex> data_;
};

/// Throws SizeLimitError if a product of extents exceeds `limit`.
void check_dense_size(std::span<const Index> shape, std::size_t limit);

}  // namespace ttqst
