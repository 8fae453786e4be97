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

#include "ttqst/core.hpp"

#include <cmath>
#include <string>

#include "ttqst/errors.hpp"

namespace ttqst {

Core::Core(Index left, Index phys, Index block, Index right)
    : left_(left), phys_(phys), block_(block), right_(right) {
  if (left < 1 || phys < 1 || block < 1 || right < 1) {
    throw ShapeError("core extents must be positive");
  }
  data_.assign(static_cast<std::size_t>(left * phys * block * right), Complex{0.0, 0.0});
}

Core Core::from_left_unfolding(const RowMatrix& m, Index left, Index phys, Index block) {
  if (m.rows() != left * phys * block) throw ShapeError("left unfolding row count mismatch");
  Core c(left, phys, block, m.cols());
  c.left_unfolding() = m;
  return c;
}

Core Core::from_right_unfolding(const RowMatrix& m, Index phys, Index block, Index right) {
  if (m.cols() != phys * block * right) throw ShapeError("right unfolding column count mismatch");
  Core c(m.rows(), phys, block, right);
  c.right_unfolding() = m;
  return c;
}

double Core::norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

void Core::scale(Complex c) {
  for (auto& z : data_) z *= c;
}

void check_dense_size(std::span<const Index> shape, std::size_t limit) {
  std::size_t count = 1;
  for (Index e : shape) {
    if (e < 1) throw ShapeError("dense extents must be positive");
    if (count > limit / static_cast<std::size_t>(e)) {
      throw SizeLimitError("dense tensor exceeds densify limit of " + std::to_string(limit) +
                           " elements");
    }
    count *= static_cast<std::size_t>(e);
  }
}

DenseTensor::DenseTensor(std::vector<Index> shape, std::size_t limit) : shape_(std::move(shape)) {
  check_dense_size(shape_, limit);
  std::size_t count = 1;
  for (Index e : shape_) count *= static_cast<std::size_t>(e);
  data_.assign(count, Complex{0.0, 0.0});
}

Index DenseTensor::flat_index(std::span<const Index> idx) const {
  if (idx.size() != shape_.size()) throw ShapeError("index order mismatch");
  Index flat = 0;
  for (std::size_t d = 0; d < shape_.size(); ++d) {
    if (idx[d] < 0 || idx[d] >= shape_[d]) throw ShapeError("index out of range");
    flat = flat * shape_[d] + idx[d];
  }
  return flat;
}

Complex& DenseTensor::at(std::span<const Index> idx) { return data_[flat_index(idx)]; }
const Complex& DenseTensor::at(std::span<const Index> idx) const {
  return data_[flat_index(idx)];
}

double DenseTensor::norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace ttqst
