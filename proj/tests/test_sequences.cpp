// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "tracelab/sequences.hpp"
#include "testing_util.hpp"

using namespace tracelab;
namespace tt = tracelab::testing;

namespace {

OperatorSequence matrix_units_row() {
  cmat e11 = cmat::Zero(2, 2), e12 = cmat::Zero(2, 2);
  e11(0, 0) = 1.0;
  e12(0, 1) = 1.0;
  return OperatorSequence({e11, e12});
}

}  // namespace

TEST_CASE("sequence validation") {
  CHECK_THROWS_AS(OperatorSequence({}), std::invalid_argument);
  CHECK_THROWS_AS(OperatorSequence({cmat::Zero(2, 2), cmat::Zero(2, 3)}),
                  std::invalid_argument);
  cmat bad = cmat::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(OperatorSequence({bad}), std::invalid_argument);
}

TEST_CASE("grams of simple families") {
  const OperatorSequence single({cmat::Identity(2, 2)});
  CHECK((column_gram(single) - cmat::Identity(2, 2)).norm() <= 1e-15);
  CHECK((row_gram(single) - cmat::Identity(2, 2)).norm() <= 1e-15);

  const OperatorSequence units = matrix_units_row();
  CHECK((column_gram(units) - cmat::Identity(2, 2)).norm() <= 1e-15);
  cmat expected_row = cmat::Zero(2, 2);
  expected_row(0, 0) = 2.0;
  CHECK((row_gram(units) - expected_row).norm() <= 1e-15);
}

TEST_CASE("grams are Hermitian PSD and adjoint-symmetric") {
  const OperatorSequence seq = tt::random_sequence(3, 4, 5, 71);
  const cmat cg = column_gram(seq);
  CHECK((cg - cg.adjoint()).norm() <= 1e-12 * std::max(1.0, cg.norm()));
  Eigen::SelfAdjointEigenSolver<cmat> es(cg, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  CHECK((row_gram(seq) - column_gram(adjoint(seq))).norm() <= 1e-12);
}

TEST_CASE("chi norm closed cases") {
  const cmat x = tt::random_matrix(3, 3, 73);
  const OperatorSequence single({x});
  for (double q : {1.0, 2.0, 4.0})
    CHECK(chi_norm(single, q) == doctest::Approx(schatten_norm(x, q)).epsilon(1e-10));

  // grams I and 2 E11: max(2^{1/4}, sqrt(2)) = sqrt(2) at q = 4
  CHECK(chi_norm(matrix_units_row(), 4.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("chi norm at q = 2 is the Hilbert sum") {
  const OperatorSequence seq = tt::random_sequence(4, 3, 6, 79);
  CHECK(std::abs(chi_norm(seq, 2.0) - hilbert_sum_norm(seq)) <= 1e-10);
}

TEST_CASE("stacking") {
  const cmat x = tt::random_matrix(2, 3, 83);
  const OperatorSequence single({x});
  CHECK((vstack(single) - x).norm() == 0.0);
  CHECK((hstack(single) - x).norm() == 0.0);

  const OperatorSequence scalars(
      {cmat::Constant(1, 1, 2.0), cmat::Constant(1, 1, -3.0)});
  cmat col(2, 1);
  col << 2.0, -3.0;
  CHECK((vstack(scalars) - col).norm() == 0.0);

  const OperatorSequence seq = tt::random_sequence(3, 2, 4, 89);
  const cmat v = vstack(seq);
  CHECK((cmat(v.adjoint() * v) - column_gram(seq)).norm() <= 1e-12 * column_gram(seq).norm());
}

TEST_CASE("stacking identities for the chi norm") {
  const OperatorSequence seq = tt::random_sequence(3, 4, 5, 97);
  const cmat v = vstack(seq), h = hstack(seq);
  const double qs[] = {1.0, 2.0, 3.0};
  for (double q : qs) {
    const double col = lp_norm(psd_eigenvalues(column_gram(seq)).cwiseSqrt(), q);
    const double row = lp_norm(psd_eigenvalues(row_gram(seq)).cwiseSqrt(), q);
    CHECK(col == doctest::Approx(schatten_norm(v, q)).epsilon(1e-9));
    CHECK(row == doctest::Approx(schatten_norm(h, q)).epsilon(1e-9));
    CHECK(chi_norm(seq, q) ==
          doctest::Approx(std::max(schatten_norm(v, q), schatten_norm(h, q))).epsilon(1e-9));
  }
  const auto inf = SchattenExponent::infinity();
  CHECK(chi_norm(seq, inf) ==
        doctest::Approx(std::max(schatten_norm(v, inf), schatten_norm(h, inf)))
            .epsilon(1e-9));
}

TEST_CASE("chi norm is exactly invariant under permutations and sign flips") {
  const OperatorSequence seq = tt::random_sequence(3, 3, 4, 101);
  std::vector<cmat> shuffled = {seq[2], -seq[0], seq[3], -seq[1]};
  const OperatorSequence twisted(std::move(shuffled));
  for (double q : {2.0, 3.0})
    CHECK(chi_norm(seq, q) == chi_norm(twisted, q));
}

TEST_CASE("appending zero terms changes nothing") {
  const OperatorSequence seq = tt::random_sequence(2, 3, 3, 103);
  std::vector<cmat> padded = seq.terms();
  padded.push_back(cmat::Zero(2, 3));
  padded.push_back(cmat::Zero(2, 3));
  const OperatorSequence ext(std::move(padded));
  for (double q : {1.0, 2.0, 4.0})
    CHECK(chi_norm(seq, q) == doctest::Approx(chi_norm(ext, q)).epsilon(1e-14));
  CHECK(hilbert_sum_norm(seq) == doctest::Approx(hilbert_sum_norm(ext)).epsilon(1e-14));
}

TEST_CASE("hilbert sum norm") {
  cmat unit = cmat::Zero(2, 2);
  unit(0, 0) = 1.0;
  CHECK(hilbert_sum_norm(OperatorSequence({unit})) == doctest::Approx(1.0));
  const OperatorSequence copies({unit, unit, unit, unit});
  CHECK(hilbert_sum_norm(copies) == doctest::Approx(2.0));

  const OperatorSequence seq = tt::random_sequence(3, 2, 5, 107);
  CHECK(std::abs(hilbert_sum_norm(seq) - schatten_norm(vstack(seq), 2.0)) <= 1e-12);
}

TEST_CASE("lattice square norm") {
  {
    DiscreteFunctionFamily fam(rvec::Constant(1, 1.0), rmat::Constant(1, 1, -1.5));
    for (double p : {1.0, 2.0, 3.5}) CHECK(lattice_square_norm(fam, p) == doctest::Approx(1.5));
  }
  {
    rmat values = rmat::Zero(2, 2);
    values(0, 0) = 1.0;
    values(1, 1) = 1.0;
    DiscreteFunctionFamily fam(rvec::Constant(2, 1.0), values);
    CHECK(lattice_square_norm(fam, 2.0) == doctest::Approx(std::sqrt(2.0)));
  }
  {
    SplitMix64 g(113);
    rmat values(4, 6);
    rvec weights(6);
    for (Eigen::Index s = 0; s < 6; ++s) {
      weights[s] = 0.1 + g.next_double();
      for (Eigen::Index n = 0; n < 4; ++n) values(n, s) = standard_normal(g);
    }
    DiscreteFunctionFamily fam(weights, values);
    // Fubini at p = 2: weighted column sums equal row-wise accumulation
    double direct = 0.0;
    for (Eigen::Index n = 0; n < 4; ++n)
      for (Eigen::Index s = 0; s < 6; ++s)
        direct += weights[s] * values(n, s) * values(n, s);
    CHECK(lattice_square_norm(fam, 2.0) == doctest::Approx(std::sqrt(direct)).epsilon(1e-12));
  }
  DiscreteFunctionFamily fam(rvec::Constant(1, 1.0), rmat::Constant(1, 1, 1.0));
  CHECK_THROWS_AS(lattice_square_norm(fam, SchattenExponent::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteFunctionFamily(rvec::Constant(1, 0.0), rmat::Constant(1, 1, 1.0)),
                  std::invalid_argument);
}
