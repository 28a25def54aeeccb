// SPDX-License-Identifier: Apache-2.0
//
// Seeded instance generators and independent oracle routes shared by the
// test suites. Oracles deliberately avoid the code paths they check: norm
// cross-checks go through Eigen's Hermitian eigensolver directly, and the
// Gaussian extreme-value mean comes from quadrature.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tracelab/rng.hpp"
#include "tracelab/sequences.hpp"
#include "tracelab/types.hpp"

namespace tracelab::testing {

inline cmat random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  SplitMix64 g(seed);
  return complex_gaussian_matrix(rows, cols, g);
}

inline OperatorSequence random_sequence(Eigen::Index d1, Eigen::Index d2, int n_terms,
                                        std::uint64_t seed) {
  SplitMix64 g(seed);
  std::vector<cmat> terms;
  terms.reserve(static_cast<std::size_t>(n_terms));
  for (int n = 0; n < n_terms; ++n) terms.push_back(complex_gaussian_matrix(d1, d2, g));
  return OperatorSequence(std::move(terms));
}

/// Haar-like unitary: QR of a Gaussian matrix with the R diagonal phases
/// absorbed into Q.
inline cmat random_unitary(Eigen::Index n, std::uint64_t seed) {
  SplitMix64 g(seed);
  const cmat a = complex_gaussian_matrix(n, n, g);
  Eigen::HouseholderQR<cmat> qr(a);
  cmat q = qr.householderQ() * cmat::Identity(n, n);
  const cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const complexd d = r(i, i);
    q.col(i) *= std::abs(d) > 0.0 ? d / std::abs(d) : complexd(1.0, 0.0);
  }
  return q;
}

/// Schatten norm through the Hermitian spectrum of x^*x (or xx^*), computed
/// directly with Eigen's self-adjoint eigensolver. Eigenvalues below the
/// noise floor of a rank-deficient gram are zeros and are clamped, otherwise
/// their square roots would leak O(sqrt(eps)) mass into the sums.
inline double schatten_via_gram(const cmat& x, SchattenExponent p, bool row_side) {
  const cmat gram = row_side ? cmat(x * x.adjoint()) : cmat(x.adjoint() * x);
  Eigen::SelfAdjointEigenSolver<cmat> es(gram, Eigen::EigenvaluesOnly);
  rvec lam = es.eigenvalues().cwiseMax(0.0);
  const double floor = 1e-12 * lam.sum();
  lam = (lam.array() <= floor).select(0.0, lam);
  if (p.is_inf()) return std::sqrt(lam.maxCoeff());
  const double pp = p.value();
  const double top = lam.maxCoeff();
  if (top <= 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    acc += std::pow(lam[i] / top, pp / 2.0);
  return std::sqrt(top) * std::pow(acc, 1.0 / pp);
}

/// E max_i |g_i| for n i.i.d. standard normals, by Simpson quadrature of the
/// survival function 1 - erf(t/sqrt(2))^n.
inline double expected_max_abs_gaussian(int n) {
  const double hi = 12.0;
  const int steps = 48000;  // even
  const double h = hi / steps;
  auto f = [&](double t) {
    return 1.0 - std::pow(std::erf(t / std::sqrt(2.0)), n);
  };
  double acc = f(0.0) + f(hi);
  for (int i = 1; i < steps; ++i) acc += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace tracelab::testing
