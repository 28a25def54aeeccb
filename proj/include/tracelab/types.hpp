// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace tracelab {

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using complexd = std::complex<double>;
using cmat = DenseMatrix<complexd>;
using rmat = DenseMatrix<double>;
using cvec = DenseVector<complexd>;
using rvec = DenseVector<double>;

/// Exponent of a Schatten class, p in [1, inf]. p = inf selects the operator
/// norm; the classes shrink as p grows, so the norms are nonincreasing in p.
class SchattenExponent {
 public:
  SchattenExponent(double p) : p_(p) {
    if (!(p >= 1.0))  // also rejects NaN
      throw std::invalid_argument("Schatten exponent must satisfy p >= 1, got " +
                                  std::to_string(p));
  }

  static SchattenExponent infinity() {
    return SchattenExponent(std::numeric_limits<double>::infinity());
  }

  double value() const { return p_; }
  bool is_inf() const { return std::isinf(p_); }

  /// Conjugate exponent q with 1/p + 1/q = 1.
  SchattenExponent dual() const {
    if (is_inf()) return SchattenExponent(1.0);
    if (p_ == 1.0) return infinity();
    return SchattenExponent(p_ / (p_ - 1.0));
  }

  friend bool operator==(const SchattenExponent& a, const SchattenExponent& b) {
    return a.p_ == b.p_;
  }

 private:
  double p_;
};

/// Singular values sorted nonincreasing, all nonnegative; length is
/// min(rows, cols) of the source matrix.
struct SingularSpectrum {
  rvec values;
};

/// The SVD iteration failed; carries the offending dimensions.
class SvdError : public std::runtime_error {
 public:
  SvdError(Eigen::Index rows, Eigen::Index cols)
      : std::runtime_error("SVD did not converge on a " + std::to_string(rows) +
                           "x" + std::to_string(cols) + " matrix"),
        rows(rows),
        cols(cols) {}

  Eigen::Index rows;
  Eigen::Index cols;
};

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& x, const char* what) {
  if (!x.allFinite())
    throw std::invalid_argument(std::string(what) + ": entries must be finite");
}

}  // namespace tracelab
