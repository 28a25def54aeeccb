// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tracelab/estimate.hpp"
#include "tracelab/rng.hpp"
#include "tracelab/spaces.hpp"
#include "tracelab/types.hpp"

namespace tracelab {

/// Fourier frequency per torus coordinate. Canonical form has no trailing
/// zeros, so the constant frequency is the empty vector.
using MultiIndex = std::vector<int>;

MultiIndex canonical_index(MultiIndex nu);

/// Largest coordinate with a nonzero frequency; -1 for the constant index.
inline int top_active(const MultiIndex& nu) {
  return static_cast<int>(nu.size()) - 1;
}

/// Signs for martingale levels n >= 1; level n reads entry n - 1 and levels
/// beyond the stored length default to +1.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::vector<int> signs);

  int at(int level) const {
    const auto i = static_cast<std::size_t>(level - 1);
    return i < signs_.size() ? signs_[i] : 1;
  }
  const std::vector<int>& values() const { return signs_; }

 private:
  std::vector<int> signs_;
};

/// Vector-coefficient trigonometric polynomial on the truncated torus T^M.
/// Terms live in a sorted map keyed by canonical multi-index, so iteration
/// order and all derived computations are deterministic.
class TorusPolynomial {
 public:
  TorusPolynomial() : dims_(1), coeff_dim_(1) {}
  TorusPolynomial(int dims, int coeff_dim, CoefficientNorm norm = {});

  int dims() const { return dims_; }
  int coeff_dim() const { return coeff_dim_; }
  const CoefficientNorm& coefficient_norm() const { return norm_; }
  const std::map<MultiIndex, cvec>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Accumulates a coefficient; exact-zero results are pruned so the support
  /// stays meaningful.
  void add_term(MultiIndex freq, const cvec& coeff);

  cvec evaluate(const rvec& angles) const;

  /// Parseval sum of squared euclidean coefficient norms.
  double coefficient_l2_squared() const;

  /// Largest active coordinate over the support, -1 if constant or zero.
  int max_level() const;

  TorusPolynomial& operator+=(const TorusPolynomial& other);
  TorusPolynomial scaled(complexd factor) const;

  /// Multiplication by e^{i delta t_k}: shifts coordinate k of every
  /// frequency by delta.
  TorusPolynomial phase_shifted(int coordinate, int delta) const;

 private:
  int dims_;
  int coeff_dim_;
  CoefficientNorm norm_;
  std::map<MultiIndex, cvec> terms_;
};

/// E_n: retains the terms supported on coordinates 0..n; n = -1 keeps only
/// the constant term.
TorusPolynomial conditional_expectation(const TorusPolynomial& f, int n);

inline TorusPolynomial constant_part(const TorusPolynomial& f) {
  return conditional_expectation(f, -1);
}

/// A polynomial is Hardy when every term is analytic in its last active
/// variable: the top active frequency of each multi-index is positive.
bool is_hardy(const TorusPolynomial& f);

/// Martingale differences d_n = E_n f - E_{n-1} f for n = 0..dims-1; the
/// constant part is excluded, so constant_part(f) + sum d_n == f exactly.
std::vector<TorusPolynomial> martingale_differences(const TorusPolynomial& f);

/// L^2(T^M, E) norm. Euclidean coefficient norms evaluate exactly by
/// Parseval; other norms are sampled uniformly on the torus.
EstimateReport l2_norm(const TorusPolynomial& f, std::int64_t quadrature_samples,
                       std::uint64_t seed);

/// Monte-Carlo evaluation regardless of the coefficient norm, for checking
/// the Parseval path against sampling.
EstimateReport l2_norm_mc(const TorusPolynomial& f, std::int64_t quadrature_samples,
                          std::uint64_t seed);

/// Tensor-grid quadrature with equispaced angles per coordinate; exact for
/// polynomial integrands when points_per_dim exceeds twice the degree.
double l2_norm_grid(const TorusPolynomial& f, int points_per_dim);

/// The sign-twisted difference sum over levels n >= 1 (optionally also the
/// level-0 difference); rotated = true multiplies the level-n difference by
/// e^{-i t_n} first.
TorusPolynomial umd_transform(const TorusPolynomial& f, const SignVector& signs,
                              bool rotated, bool include_level_zero = false);

/// L^2 norm of the transform; rejects non-Hardy inputs.
EstimateReport umd_transform_norm(const TorusPolynomial& f, const SignVector& signs,
                                  bool rotated, std::int64_t quadrature_samples,
                                  std::uint64_t seed, bool include_level_zero = false);

/// Random polynomial with terms_per_level terms at each requested level.
/// hardy_only restricts top frequencies to be positive. degree bounds every
/// frequency entry; degree < 1 yields a constant polynomial.
TorusPolynomial random_torus_polynomial(int dims, int degree, const SpaceSpec& space,
                                        SplitMix64& g, int terms_per_level = 2,
                                        bool hardy_only = true,
                                        bool include_level_zero = true);

struct UmdConstantEstimate {
  double lower_bound = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  TorusPolynomial witness;
  std::vector<int> witness_signs;
  int trials = 0;
  std::uint64_t seed = 0;
  bool exact = false;  // closed-form norm evaluations (euclidean coefficients)
};

/// Lower bound on the analytic unconditionality constant K(E): the largest
/// transform-to-function norm ratio over random Hardy polynomials and
/// searched sign vectors. Exhaustive sign search when it fits the budget,
/// greedy flips with random restarts otherwise.
UmdConstantEstimate estimate_analytic_umd_constant(const SpaceSpec& space, int degree,
                                                   int trials, int sign_search_budget,
                                                   std::uint64_t seed, int levels = 0,
                                                   std::int64_t quadrature_samples = 2048);

}  // namespace tracelab
