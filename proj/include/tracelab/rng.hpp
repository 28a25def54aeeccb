// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "tracelab/types.hpp"

namespace tracelab {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// SplitMix64 engine. Streams are derived by hashing (seed, index) with
/// fold(), so sample i sees the same variates whether runs are serial or
/// partitioned into batches.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    return mix64(z);
  }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1), safe under log().
  double next_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream key from a parent seed and an index.
inline std::uint64_t fold(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ (0x9e3779b97f4a7c15ull + v * 0xd1342543de82ef95ull));
}

/// Stream key from a parent seed and a name (FNV-1a over the bytes).
inline std::uint64_t fold(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return fold(seed, h);
}

/// Standard normal variate via the Kinderman-Monahan ratio of uniforms.
inline double standard_normal(SplitMix64& g) {
  constexpr double bound = 0.8577638849607068;  // sqrt(2/e)
  for (;;) {
    const double u = g.next_open();
    const double v = (2.0 * g.next_double() - 1.0) * bound;
    const double x = v / u;
    if (x * x <= -4.0 * std::log(u)) return x;
  }
}

/// Fair sign in {-1, +1}.
inline double rademacher_sign(SplitMix64& g) {
  return (g.next() >> 63) ? 1.0 : -1.0;
}

/// Uniform unimodular complex variate e^{i theta}.
inline complexd steinhaus_unit(SplitMix64& g) {
  const double theta = 2.0 * M_PI * g.next_double();
  return complexd(std::cos(theta), std::sin(theta));
}

/// Standard complex normal, variance 1 split evenly over both parts.
inline complexd complex_normal(SplitMix64& g) {
  const double re = standard_normal(g);
  const double im = standard_normal(g);
  return complexd(re, im) * M_SQRT1_2;
}

/// rows x cols matrix of i.i.d. standard complex normal entries, filled row
/// by row for a reproducible draw order.
inline cmat complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, SplitMix64& g) {
  cmat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_normal(g);
  return m;
}

inline cvec complex_gaussian_vector(Eigen::Index size, SplitMix64& g) {
  cvec v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = complex_normal(g);
  return v;
}

}  // namespace tracelab
