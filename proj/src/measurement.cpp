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

#include "ttqst/measurement.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "ttqst/errors.hpp"
#include "ttqst/kernels.hpp"

namespace ttqst {

namespace {

void check_real(Complex z) {
  if (std::abs(z.imag()) > kImaginaryTolerance * std::max(1.0, std::abs(z.real()))) {
    throw NumericalError("expectation has imaginary part " + std::to_string(z.imag()) +
                         "; observable is not Hermitian or the contraction is wrong");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double expectation_tt(const BlockTT& a, const TTMatrix& e) {
  const std::size_t n_sites = a.num_sites();
  if (e.num_sites() != n_sites) throw ShapeError("site count mismatch");

  // env[(bra, op, ket)] for the bonds right of the current site.
  std::vector<Complex> env{Complex{1.0, 0.0}};
  Index ra = 1, re = 1;
  for (std::size_t n = n_sites; n-- > 0;) {
    const Core& g = a.core(n);
    const Core& w = e.core(n);
    if (w.phys() != g.phys() || w.block() != g.phys()) {
      throw ShapeError("operator extents differ from the physical extent at a site");
    }
    const Index la = g.left(), le = w.left(), p = g.phys(), kd = g.block();
    // tmp[(a, i, k), be, b'] = sum_b G[a,i,k,b] env[b', be, b]
    std::vector<Complex> tmp(static_cast<std::size_t>(la * p * kd * re * ra));
    for (Index row = 0; row < la * p * kd; ++row)
      for (Index bp = 0; bp < ra; ++bp)
        for (Index be = 0; be < re; ++be) {
          Complex s{};
          for (Index b = 0; b < ra; ++b) s += g.data()[row * ra + b] * env[(bp * re + be) * ra + b];
          tmp[(row * re + be) * ra + bp] = s;
        }
    std::vector<Complex> next(static_cast<std::size_t>(la * le * la));
    for (Index ap = 0; ap < la; ++ap)
      for (Index ae = 0; ae < le; ++ae)
        for (Index aa = 0; aa < la; ++aa) {
          Complex s{};
          for (Index ip = 0; ip < p; ++ip)
            for (Index i = 0; i < p; ++i)
              for (Index be = 0; be < re; ++be) {
                const Complex op = w(ae, ip, i, be);
                if (op == Complex{}) continue;
                for (Index k = 0; k < kd; ++k)
                  for (Index bp = 0; bp < ra; ++bp) {
                    s += std::conj(g(ap, ip, k, bp)) * op *
                         tmp[((((aa * p + i) * kd + k) * re) + be) * ra + bp];
                  }
              }
          next[(ap * le + ae) * la + aa] = s;
        }
    env = std::move(next);
    ra = la;
    re = le;
  }
  check_real(env[0]);
  return env[0].real();
}

double expectation_tt(const BlockTT& a, const PauliString& p) {
  kernels::ContractionWorkspace ws;
  const Complex z = kernels::pauli_expectation(a, p, ws);
  check_real(z);
  return z.real();
}

std::uint64_t expectation_fma_count(const BlockTT& a, const PauliString& p) {
  kernels::ContractionWorkspace ws;
  std::uint64_t count = 0;
  kernels::pauli_expectation_counted(a, p, ws, count);
  return count;
}

std::vector<double> measure_all(const BlockTT& a, std::span<const PauliString> strings,
                                Execution exec) {
  std::vector<double> out(strings.size());
  std::vector<Complex> raw(strings.size());
  if (exec == Execution::parallel) {
    kernels::measure_all_parallel(a, strings, raw);
  } else {
    kernels::measure_all_serial(a, strings, raw);
  }
  for (std::size_t m = 0; m < raw.size(); ++m) {
    check_real(raw[m]);
    out[m] = raw[m].real();
  }
  return out;
}

double dense_expectation(const Matrix& rho, const Matrix& e) {
  if (rho.rows() != e.cols() || rho.cols() != e.rows()) throw ShapeError("dimension mismatch");
  const Complex z = rho.cwiseProduct(e.transpose()).sum();
  check_real(z);
  return z.real();
}

std::vector<double> measure_all_dense(const Matrix& rho, std::span<const PauliString> strings,
                                      Execution exec) {
  std::vector<double> out(strings.size());
  if (exec == Execution::parallel) {
    kernels::measure_all_dense_parallel(rho, strings, out);
  } else {
    kernels::measure_all_dense_serial(rho, strings, out);
  }
  return out;
}

double pauli_trace(const Matrix& rho, const PauliString& p) {
  const Index d = rho.rows();
  if (rho.cols() != d || d != (Index{1} << p.size())) throw ShapeError("dimension mismatch");
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex base = kIPow[p.y_count() & 3];
  Complex s{};
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(d); ++b) {
    const Complex v = rho(static_cast<Index>(b), static_cast<Index>(b ^ x));
    s += (std::popcount(b & z) & 1) ? -v : v;
  }
  s *= base;
  check_real(s);
  return s.real();
}

std::vector<MeasurementRecord> noiseless_records(std::span<const PauliString> strings,
                                                 std::span<const double> clean) {
  if (strings.size() != clean.size()) throw ConfigError("strings and values differ in length");
  std::vector<MeasurementRecord> out;
  out.reserve(clean.size());
  for (std::size_t m = 0; m < clean.size(); ++m) out.push_back({strings[m], clean[m], clean[m]});
  return out;
}

std::vector<MeasurementRecord> add_noise(std::span<const PauliString> strings,
                                         std::span<const double> clean, const NoiseSpec& spec) {
  if (clean.empty()) throw ConfigError("no measurements to perturb");
  if (std::isnan(spec.snr_db) || spec.snr_db == -std::numeric_limits<double>::infinity()) {
    throw ConfigError("SNR must be finite or +inf");
  }
  auto records = noiseless_records(strings, clean);
  if (std::isinf(spec.snr_db)) return records;

  double power = 0.0;
  for (double v : clean) power += v * v;
  power /= static_cast<double>(clean.size());
  if (power == 0.0) throw ConfigError("signal power is zero; SNR is undefined");
  const double sigma = std::sqrt(power * std::pow(10.0, -spec.snr_db / 10.0));

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (auto& r : records) r.y = *r.clean + gauss(rng);
  return records;
}

void write_measurements_csv(std::ostream& out, std::span<const MeasurementRecord> records) {
  out << "index,pauli,clean,y\n";
  for (std::size_t m = 0; m < records.size(); ++m) {
    const auto& r = records[m];
    out << m << ',' << r.pauli.str() << ',' << (r.clean ? format_double(*r.clean) : "") << ','
        << format_double(r.y) << '\n';
  }
}

std::vector<MeasurementRecord> read_measurements_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty measurement file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "index,pauli,clean,y") throw FormatError("bad measurement header: " + line);
  std::vector<MeasurementRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() == 3 && line.back() == ',') fields.emplace_back();
    if (fields.size() != 4) throw FormatError("expected 4 fields: " + line);
    MeasurementRecord r;
    try {
      if (std::stoull(fields[0]) != out.size()) throw FormatError("indices must be 0..M-1 in order");
      r.pauli = PauliString::parse(fields[1]);
      if (!fields[2].empty()) r.clean = std::stod(fields[2]);
      r.y = std::stod(fields[3]);
    } catch (const std::invalid_argument&) {
      throw FormatError("malformed measurement row: " + line);
    } catch (const std::out_of_range&) {
      throw FormatError("malformed measurement row: " + line);
    }
    if (!std::isfinite(r.y)) throw FormatError("non-finite measurement: " + line);
    if (!out.empty() && out.front().pauli.size() != r.pauli.size()) {
      throw FormatError("inconsistent Pauli word lengths");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void save_measurements_csv(const std::filesystem::path& path,
                           std::span<const MeasurementRecord> records) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_measurements_csv(out, records);
}

std::vector<MeasurementRecord> load_measurements_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_measurements_csv(in);
}

}  // namespace ttqst
