// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "tracelab/schatten.hpp"
#include "tracelab/types.hpp"

namespace tracelab {

enum class NormKind { euclidean, l1, linf, schatten };

/// Norm placed on coefficient vectors: euclidean, sum (ell_1), max (ell_inf),
/// or a Schatten norm of the vector reshaped (row-major) into a square matrix.
struct CoefficientNorm {
  NormKind kind = NormKind::euclidean;
  double p = 1.0;       // Schatten exponent, schatten kind only
  int reshape_dim = 0;  // matrix side, schatten kind only

  double operator()(const cvec& c) const;

  std::string to_string() const;
  /// Accepts euclidean | sum | l1 | max | linf | schatten(p) | schatten(p,d).
  static CoefficientNorm parse(const std::string& text);
};

/// A finite-dimensional normed space of coefficient vectors.
struct SpaceSpec {
  CoefficientNorm norm;
  int coeff_dim = 1;

  double operator()(const cvec& c) const { return norm(c); }

  std::string to_string() const;
  /// Accepts euclidean(k) | l1(k) | linf(k) | schatten(p,d), where the
  /// schatten space has dimension d*d.
  static SpaceSpec parse(const std::string& text);
};

}  // namespace tracelab
