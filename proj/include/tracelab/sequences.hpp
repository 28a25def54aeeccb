// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "tracelab/schatten.hpp"
#include "tracelab/types.hpp"

namespace tracelab {

/// Finite ordered family of same-shape complex matrices, the coefficients of
/// a random series sum_n xi_n x_n.
class OperatorSequence {
 public:
  explicit OperatorSequence(std::vector<cmat> terms) : terms_(std::move(terms)) {
    if (terms_.empty())
      throw std::invalid_argument("OperatorSequence: at least one term required");
    const Eigen::Index r = terms_.front().rows();
    const Eigen::Index c = terms_.front().cols();
    if (r < 1 || c < 1)
      throw std::invalid_argument("OperatorSequence: terms must be nonempty matrices");
    for (const cmat& t : terms_) {
      if (t.rows() != r || t.cols() != c)
        throw std::invalid_argument("OperatorSequence: all terms must share one shape");
      require_finite(t, "OperatorSequence");
    }
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(terms_.size()); }
  Eigen::Index rows() const { return terms_.front().rows(); }
  Eigen::Index cols() const { return terms_.front().cols(); }

  const cmat& operator[](std::size_t n) const { return terms_[n]; }
  const std::vector<cmat>& terms() const { return terms_; }

  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

 private:
  std::vector<cmat> terms_;
};

inline OperatorSequence adjoint(const OperatorSequence& seq) {
  std::vector<cmat> out;
  out.reserve(seq.terms().size());
  for (const cmat& t : seq) out.push_back(t.adjoint());
  return OperatorSequence(std::move(out));
}

inline OperatorSequence scaled(const OperatorSequence& seq, complexd factor) {
  std::vector<cmat> out;
  out.reserve(seq.terms().size());
  for (const cmat& t : seq) out.push_back(factor * t);
  return OperatorSequence(std::move(out));
}

/// Column square function sum_n x_n^* x_n, a cols x cols Hermitian PSD matrix.
inline cmat column_gram(const OperatorSequence& seq) {
  cmat g = cmat::Zero(seq.cols(), seq.cols());
  for (const cmat& t : seq) g.noalias() += t.adjoint() * t;
  return g;
}

/// Row square function sum_n x_n x_n^*, a rows x rows Hermitian PSD matrix.
inline cmat row_gram(const OperatorSequence& seq) {
  cmat g = cmat::Zero(seq.rows(), seq.rows());
  for (const cmat& t : seq) g.noalias() += t * t.adjoint();
  return g;
}

/// Vertical concatenation, (N*rows) x cols. Its column gram equals the
/// sequence's column gram, so Schatten norms of the stack match norms of the
/// gram square root.
inline cmat vstack(const OperatorSequence& seq) {
  cmat out(seq.size() * seq.rows(), seq.cols());
  for (Eigen::Index n = 0; n < seq.size(); ++n)
    out.middleRows(n * seq.rows(), seq.rows()) = seq[static_cast<std::size_t>(n)];
  return out;
}

/// Horizontal concatenation, rows x (N*cols).
inline cmat hstack(const OperatorSequence& seq) {
  cmat out(seq.rows(), seq.size() * seq.cols());
  for (Eigen::Index n = 0; n < seq.size(); ++n)
    out.middleCols(n * seq.cols(), seq.cols()) = seq[static_cast<std::size_t>(n)];
  return out;
}

/// Square-function norm max{ ||(sum x^*x)^{1/2}||_{C_q}, ||(sum xx^*)^{1/2}||_{C_q} }.
/// Both grams go through the Hermitian eigensolver rather than a stacked SVD.
/// The random-series equivalence behind this expression holds for q >= 2;
/// smaller q still evaluates, callers flag it.
inline double chi_norm(const OperatorSequence& seq, SchattenExponent q) {
  const rvec ce = psd_eigenvalues(column_gram(seq));
  const rvec re = psd_eigenvalues(row_gram(seq));
  return std::max(lp_norm(ce.cwiseSqrt(), q), lp_norm(re.cwiseSqrt(), q));
}

/// Hilbert space criterion (sum_n ||x_n||_{C_2}^2)^{1/2}.
inline double hilbert_sum_norm(const OperatorSequence& seq) {
  double acc = 0.0;
  for (const cmat& t : seq) acc += t.squaredNorm();
  return std::sqrt(acc);
}

/// Finitely many real functions sampled on a weighted discrete measure.
/// values(n, s) is the n-th function at the s-th point, weights are the
/// point masses.
struct DiscreteFunctionFamily {
  rvec weights;
  rmat values;

  DiscreteFunctionFamily(rvec w, rmat v) : weights(std::move(w)), values(std::move(v)) {
    if (weights.size() < 1 || values.rows() < 1)
      throw std::invalid_argument("DiscreteFunctionFamily: family must be nonempty");
    if (values.cols() != weights.size())
      throw std::invalid_argument(
          "DiscreteFunctionFamily: one weight per sample point required");
    require_finite(values, "DiscreteFunctionFamily");
    for (Eigen::Index s = 0; s < weights.size(); ++s)
      if (!(weights[s] > 0.0))
        throw std::invalid_argument("DiscreteFunctionFamily: weights must be positive");
  }
};

/// Lattice square function ( sum_s mu(s) (sum_n x_n(s)^2)^{p/2} )^{1/p},
/// the L_p(mu; ell_2) norm of the family. Requires p < inf.
inline double lattice_square_norm(const DiscreteFunctionFamily& fam, SchattenExponent p) {
  if (p.is_inf())
    throw std::invalid_argument("lattice_square_norm: p = inf is not defined here");
  const double pp = p.value();
  double acc = 0.0;
  for (Eigen::Index s = 0; s < fam.weights.size(); ++s) {
    const double sq = fam.values.col(s).squaredNorm();
    acc += fam.weights[s] * std::pow(sq, pp / 2.0);
  }
  return std::pow(acc, 1.0 / pp);
}

}  // namespace tracelab
