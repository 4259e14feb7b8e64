// Copyright 2026 The actnoise Authors
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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace actnoise {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr Complex kImag{0.0, 1.0};

// ---------------------------------------------------------------------------
// Error taxonomy.
//
// StructuralError  -- a value violates a type invariant (non-Hermitian state,
//                     bad dimensions, negative rate, malformed grid).
// DomainError      -- an operation was asked outside its mathematical domain
//                     (degenerate gap in mu, target M outside achievable range).
// IntegrationError -- the adaptive stepper could not meet the tolerance; the
//                     failure time is carried so callers can report it.
// ProtocolError    -- a control-protocol construction failed (singular control,
//                     failed self-test).
// ConfigError      -- malformed sweep-plan text; carries line and field.
// ---------------------------------------------------------------------------

class StructuralError : public std::runtime_error {
 public:
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t)
      : std::runtime_error(what + " (t=" + std::to_string(t) + ")"), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line, std::string field = {})
      : std::runtime_error("config line " + std::to_string(line) +
                           (field.empty() ? "" : " [" + field + "]") + ": " + what),
        line_(line),
        field_(std::move(field)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

// ---------------------------------------------------------------------------
// Small linear-algebra helpers.
// ---------------------------------------------------------------------------

inline bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline Matrix sigma_x() {
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

inline Matrix sigma_y() {
  Matrix s(2, 2);
  s << 0, -kImag, kImag, 0;
  return s;
}

inline Matrix sigma_z() {
  Matrix s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

/// Projector |k><k| in a dim-dimensional space.
inline Matrix basis_projector(Eigen::Index dim, Eigen::Index k) {
  Matrix p = Matrix::Zero(dim, dim);
  p(k, k) = 1.0;
  return p;
}

// ---------------------------------------------------------------------------
// Deterministic random numbers.
//
// The Gaussian sampler is pinned down to the bit: a 53-bit uniform from
// mt19937_64 fed through Box-Muller.  std::normal_distribution is not used
// because its output sequence is implementation-defined; CSV reproducibility
// across toolchains depends on this sampler.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  /// Standard normal draw.
  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1]: guard the log; u2 in [0,1).
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// ---------------------------------------------------------------------------
// Deterministic parallel map: tasks are partitioned into contiguous index
// blocks, results land in index order, so reductions done block-by-block do
// not depend on the thread count.
// ---------------------------------------------------------------------------

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (threads > n) threads = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = n * t / threads;
    const std::size_t end = n * (t + 1) / threads;
    pool.emplace_back([&, t, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Formatting / hashing used by the CSV and manifest writers.
// ---------------------------------------------------------------------------

/// Locale-independent full-precision double, round-trip safe.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace actnoise
