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

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "ttqst/tt_core.hpp"

namespace ttqst {

/**
 * Binary container shared by block trains and TT-matrices.
 *
 *   "TTQS"            4 bytes magic
 *   version           u32 (currently 1)
 *   N                 u32 site count
 *   n_block           u32 1-based block site; 0 marks a TT-matrix
 *   K                 u32 block extent (column extent for a TT-matrix)
 *   ranks             (N+1) x u32
 *   cores             site order, each in (left, phys, block, right) C order,
 *                     every entry as two float64 (re, im)
 *
 * All integers and floats are little-endian. Physical extents are 2.
 */
inline constexpr std::uint32_t kTTFormatVersion = 1;

void write_block_tt(std::ostream& out, const BlockTT& a);
BlockTT read_block_tt(std::istream& in);
void write_tt_matrix(std::ostream& out, const TTMatrix& e);
TTMatrix read_tt_matrix(std::istream& in);

void save_block_tt(const std::filesystem::path& path, const BlockTT& a);
BlockTT load_block_tt(const std::filesystem::path& path);

namespace io_detail {
void put_u32(std::ostream& out, std::uint32_t v);
void put_u64(std::ostream& out, std::uint64_t v);
void put_f64(std::ostream& out, double v);
std::uint32_t get_u32(std::istream& in);
std::uint64_t get_u64(std::istream& in);
double get_f64(std::istream& in);
}  // namespace io_detail

}  // namespace ttqst
