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

#include "ttqst/tt_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "ttqst/errors.hpp"

namespace ttqst {

namespace io_detail {

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), b.size());
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw FormatError("truncated file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw FormatError("truncated file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace io_detail

namespace {

using namespace io_detail;

constexpr std::array<char, 4> kMagic = {'T', 'T', 'Q', 'S'};

void write_cores(std::ostream& out, std::span<const Core> cores, std::uint32_t n_block,
                 std::uint32_t k) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kTTFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(cores.size()));
  put_u32(out, n_block);
  put_u32(out, k);
  for (const auto& c : cores) put_u32(out, static_cast<std::uint32_t>(c.left()));
  put_u32(out, static_cast<std::uint32_t>(cores.back().right()));
  for (const auto& c : cores) {
    if (c.phys() != 2) throw FormatError("the container stores qubit (extent 2) sites only");
    for (const auto& z : c.data()) {
      put_f64(out, z.real());
      put_f64(out, z.imag());
    }
  }
  if (!out) throw FormatError("write failed");
}

struct Header {
  std::uint32_t n_sites;
  std::uint32_t n_block;
  std::uint32_t k;
  std::vector<Index> ranks;
};

Header read_header(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError("bad magic, expected TTQS");
  }
  if (get_u32(in) != kTTFormatVersion) throw FormatError("unsupported format version");
  Header h{};
  h.n_sites = get_u32(in);
  h.n_block = get_u32(in);
  h.k = get_u32(in);
  if (h.n_sites == 0 || h.k == 0) throw FormatError("empty chain or block extent");
  for (std::uint32_t i = 0; i <= h.n_sites; ++i) {
    const auto r = get_u32(in);
    if (r == 0) throw FormatError("zero bond dimension");
    h.ranks.push_back(r);
  }
  return h;
}

Core read_core(std::istream& in, Index left, Index block, Index right) {
  Core c(left, 2, block, right);
  for (auto& z : c.data()) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    z = {re, im};
  }
  return c;
}

}  // namespace

void write_block_tt(std::ostream& out, const BlockTT& a) {
  write_cores(out, a.cores(), static_cast<std::uint32_t>(a.block_site() + 1),
              static_cast<std::uint32_t>(a.block_dim()));
}

BlockTT read_block_tt(std::istream& in) {
  const Header h = read_header(in);
  if (h.n_block == 0 || h.n_block > h.n_sites) {
    throw FormatError("file does not hold a block train");
  }
  std::vector<Core> cores;
  for (std::uint32_t n = 0; n < h.n_sites; ++n) {
    cores.push_back(read_core(in, h.ranks[n], n + 1 == h.n_block ? h.k : 1, h.ranks[n + 1]));
  }
  try {
    return BlockTT(std::move(cores), h.n_block - 1);
  } catch (const ShapeError& e) {
    throw FormatError(e.what());
  }
}

void write_tt_matrix(std::ostream& out, const TTMatrix& e) {
  write_cores(out, e.cores(), 0, static_cast<std::uint32_t>(e.core(0).block()));
}

TTMatrix read_tt_matrix(std::istream& in) {
  const Header h = read_header(in);
  if (h.n_block != 0) throw FormatError("file does not hold a TT-matrix");
  std::vector<Core> cores;
  for (std::uint32_t n = 0; n < h.n_sites; ++n) {
    cores.push_back(read_core(in, h.ranks[n], h.k, h.ranks[n + 1]));
  }
  try {
    return TTMatrix(std::move(cores));
  } catch (const ShapeError& e) {
    throw FormatError(e.what());
  }
}

void save_block_tt(const std::filesystem::path& path, const BlockTT& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_block_tt(out, a);
}

BlockTT load_block_tt(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_block_tt(in);
}

}  // namespace ttqst
