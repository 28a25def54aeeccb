// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "tracelab/types.hpp"

namespace tracelab {

template <class Scalar>
struct SvdFactors {
  DenseMatrix<Scalar> u;      // orthonormal columns, rows x k
  SingularSpectrum spectrum;  // k = min(rows, cols)
  DenseMatrix<Scalar> vh;     // orthonormal rows, k x cols
};

/// Thin singular value decomposition, x = u * diag(s) * vh.
template <class Derived>
SvdFactors<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  require_finite(x, "svd");
  if (x.rows() < 1 || x.cols() < 1)
    throw std::invalid_argument("svd: matrix must be nonempty");
  Eigen::JacobiSVD<DenseMatrix<Scalar>> dec(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) throw SvdError(x.rows(), x.cols());
  SvdFactors<Scalar> out;
  out.u = dec.matrixU();
  out.spectrum.values = dec.singularValues();
  out.vh = dec.matrixV().adjoint();
  return out;
}

template <class Derived>
rvec singular_values(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  require_finite(x, "singular_values");
  if (x.rows() < 1 || x.cols() < 1)
    throw std::invalid_argument("singular_values: matrix must be nonempty");
  Eigen::JacobiSVD<DenseMatrix<Scalar>> dec(x);
  if (dec.info() != Eigen::Success) throw SvdError(x.rows(), x.cols());
  return dec.singularValues();
}

/// Operator absolute value |x| = (x^* x)^{1/2}, a cols x cols Hermitian PSD matrix.
template <class Derived>
DenseMatrix<typename Derived::Scalar> abs_op(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  auto f = svd(x);
  DenseMatrix<Scalar> v = f.vh.adjoint();
  return v * f.spectrum.values.template cast<Scalar>().asDiagonal() * v.adjoint();
}

/// ell_p norm of the absolute values of a real vector; p = inf gives the max.
/// Power sums are evaluated against the largest entry to avoid overflow.
inline double lp_norm(const rvec& v, SchattenExponent p) {
  if (v.size() == 0) return 0.0;
  const double top = v.cwiseAbs().maxCoeff();
  if (top <= 0.0) return 0.0;
  if (p.is_inf()) return top;
  const double pp = p.value();
  if (pp == 1.0) return v.cwiseAbs().sum();
  if (pp == 2.0) return v.norm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    acc += std::pow(std::abs(v[i]) / top, pp);
  return top * std::pow(acc, 1.0 / pp);
}

inline double schatten_norm(const SingularSpectrum& s, SchattenExponent p) {
  return lp_norm(s.values, p);
}

/// Schatten norm ||x||_{C_p} = (sum of s_i^p)^{1/p} over the singular values;
/// p = inf is the operator norm, p = 2 the Frobenius norm (computed directly).
template <class Derived>
double schatten_norm(const Eigen::MatrixBase<Derived>& x, SchattenExponent p) {
  if (!p.is_inf() && p.value() == 2.0) {
    require_finite(x, "schatten_norm");
    return x.norm();
  }
  return lp_norm(singular_values(x), p);
}

/// Eigenvalues of a Hermitian PSD matrix, sorted nonincreasing. Eigenvalues
/// within 1e-12 * trace of zero are clamped to zero on either side: roundoff
/// noise there sits at eps * lambda_max and would otherwise pollute the
/// square roots of rank-deficient grams. Anything below -1e-12 * trace means
/// the input is not PSD and is rejected.
template <class Derived>
rvec psd_eigenvalues(const Eigen::MatrixBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  if (h.rows() != h.cols())
    throw std::invalid_argument("psd_eigenvalues: matrix must be square");
  require_finite(h, "psd_eigenvalues");
  DenseMatrix<Scalar> sym = (h.derived() + h.derived().adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_eigenvalues: eigensolver did not converge");
  rvec ev = es.eigenvalues().reverse();
  const double tol = 1e-12 * std::max(0.0, ev.sum());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol)
      throw std::invalid_argument("psd_eigenvalues: matrix is not positive semidefinite");
    ev[i] = ev[i] <= tol ? 0.0 : ev[i];
  }
  return ev;
}

/// Hermitian PSD square root via eigendecomposition, same clamping rule as
/// psd_eigenvalues.
template <class Derived>
DenseMatrix<typename Derived::Scalar> psd_sqrt(const Eigen::MatrixBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  if (h.rows() != h.cols())
    throw std::invalid_argument("psd_sqrt: matrix must be square");
  require_finite(h, "psd_sqrt");
  DenseMatrix<Scalar> sym = (h.derived() + h.derived().adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_sqrt: eigensolver did not converge");
  rvec ev = es.eigenvalues();
  const double tol = 1e-12 * std::max(0.0, ev.sum());
  rvec roots(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol)
      throw std::invalid_argument("psd_sqrt: matrix is not positive semidefinite");
    roots[i] = ev[i] <= tol ? 0.0 : std::sqrt(ev[i]);
  }
  return es.eigenvectors() * roots.template cast<Scalar>().asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace tracelab
