// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "tracelab/decomposition.hpp"
#include "tracelab/random_series.hpp"
#include "testing_util.hpp"

using namespace tracelab;
namespace tt = tracelab::testing;

namespace {

rvec make_rvec(std::initializer_list<double> xs) {
  rvec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

double prox_objective(const rvec& x, const rvec& v, double p, double t) {
  return t * lp_norm(x, SchattenExponent(p)) + 0.5 * (x - v).squaredNorm();
}

}  // namespace

TEST_CASE("vector prox closed forms") {
  const rvec v = make_rvec({3.0, -1.0, 0.2});
  const rvec s1 = prox_lp_norm(v, 1.0, 0.5);
  CHECK(s1[0] == doctest::Approx(2.5));
  CHECK(s1[1] == doctest::Approx(-0.5));
  CHECK(s1[2] == 0.0);

  const rvec s2 = prox_lp_norm(v, 2.0, 1.0);
  const double shrink = 1.0 - 1.0 / v.norm();
  CHECK((s2 - shrink * v).norm() <= 1e-14);
  CHECK(prox_lp_norm(v, 2.0, 10.0).norm() == 0.0);
}

TEST_CASE("vector prox satisfies the variational inequality for general p") {
  SplitMix64 g(127);
  for (double p : {1.3, 1.5, 1.8, 3.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      rvec v(5);
      for (Eigen::Index i = 0; i < 5; ++i) v[i] = 2.0 * standard_normal(g);
      const double t = 0.3 + g.next_double();
      const rvec x = prox_lp_norm(v, p, t);
      const double fx = prox_objective(x, v, p, t);
      for (int k = 0; k < 40; ++k) {
        rvec y = x;
        for (Eigen::Index i = 0; i < 5; ++i) y[i] += 0.02 * standard_normal(g);
        CHECK(fx <= prox_objective(y, v, p, t) + 1e-10);
      }
    }
  }
}

TEST_CASE("vector prox at the operator-norm end") {
  SplitMix64 g(129);
  const auto inf = SchattenExponent::infinity();
  for (int trial = 0; trial < 4; ++trial) {
    rvec v(5);
    for (Eigen::Index i = 0; i < 5; ++i) v[i] = 2.0 * standard_normal(g);
    const double t = 0.4;
    const rvec x = prox_lp_norm(v, inf, t);
    const double fx = t * lp_norm(x, inf) + 0.5 * (x - v).squaredNorm();
    for (int k = 0; k < 30; ++k) {
      rvec y = x;
      for (Eigen::Index i = 0; i < 5; ++i) y[i] += 0.02 * standard_normal(g);
      CHECK(fx <= t * lp_norm(y, inf) + 0.5 * (y - v).squaredNorm() + 1e-10);
    }
  }
  // projection clamps componentwise at q = inf
  const rvec w = make_rvec({2.0, -0.5, -3.0});
  const rvec u = project_lq_ball(w, std::numeric_limits<double>::infinity());
  CHECK(u[0] == 1.0);
  CHECK(u[1] == -0.5);
  CHECK(u[2] == -1.0);
}

TEST_CASE("solver accepts the operator norm with the range flag off") {
  const OperatorSequence seq = tt::random_sequence(2, 2, 3, 229);
  const auto inf = SchattenExponent::infinity();
  const auto res = triple_norm(seq, inf);
  CHECK_FALSE(res.p_within_range);
  const double pure = std::min(schatten_norm(vstack(seq), inf), schatten_norm(hstack(seq), inf));
  CHECK(res.objective <= pure + 1e-9);
  CHECK(res.certificate_lower_bound <= res.objective + 1e-9);
  for (Eigen::Index n = 0; n < seq.size(); ++n) {
    const auto nu = static_cast<std::size_t>(n);
    CHECK((res.y_terms[nu] + res.z_terms[nu] - seq[nu]).norm() <= 1e-9);
  }
}

TEST_CASE("lq ball projection") {
  SplitMix64 g(131);
  for (double q : {1.0, 1.5, 3.0, 6.0}) {
    rvec w(6);
    for (Eigen::Index i = 0; i < 6; ++i) w[i] = 3.0 * standard_normal(g);
    const rvec u = project_lq_ball(w, q);
    CHECK(lp_norm(u, q) <= 1.0 + 1e-10);
    if (lp_norm(w, q) > 1.0) CHECK(lp_norm(u, q) == doctest::Approx(1.0).epsilon(1e-9));
    // no feasible point sits closer
    for (int k = 0; k < 30; ++k) {
      rvec c(6);
      for (Eigen::Index i = 0; i < 6; ++i) c[i] = standard_normal(g);
      const double nq = lp_norm(c, q);
      if (nq > 1.0) c /= nq * (1.0 + 1e-12);
      CHECK((w - u).norm() <= (w - c).norm() + 1e-9);
    }
    const rvec inside = rvec::Constant(6, 0.1);
    CHECK((project_lq_ball(inside, q) - inside).norm() <= 1e-14);
  }
}

TEST_CASE("schatten prox thresholds singular values") {
  const cmat m = tt::random_matrix(4, 3, 137);
  for (double p : {1.0, 1.5, 2.0}) {
    const double t = 0.3;
    const cmat out = schatten_prox(m, p, t);
    const rvec expected = prox_lp_norm(singular_values(m), p, t);
    const rvec got = singular_values(out);
    CHECK((got - expected).norm() <= 1e-10);
  }
}

TEST_CASE("decomposition norm on forced cases") {
  // a single term leaves no freedom beyond the triangle inequality
  for (double p : {1.0, 1.4, 2.0}) {
    const cmat x = tt::random_matrix(3, 2, 139);
    const OperatorSequence one({x});
    const auto res = triple_norm(one, p);
    CHECK(res.objective == doctest::Approx(schatten_norm(x, p)).epsilon(1e-6));
    CHECK(res.converged);
  }

  const OperatorSequence zeros({cmat::Zero(2, 2), cmat::Zero(2, 2)});
  const auto rz = triple_norm(zeros, 1.0);
  CHECK(rz.objective == 0.0);
  CHECK(rz.converged);

  // scalars reduce both stacked norms to the euclidean norm of the vector
  const OperatorSequence ones({cmat::Constant(1, 1, 1.0), cmat::Constant(1, 1, 1.0)});
  for (double p : {1.0, 1.5, 2.0}) {
    const auto rs = triple_norm(ones, p);
    CHECK(rs.objective == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  }

  cmat e11 = cmat::Zero(2, 2), e12 = cmat::Zero(2, 2);
  e11(0, 0) = 1.0;
  e12(0, 1) = 1.0;
  const OperatorSequence units({e11, e12});
  const auto ru = triple_norm(units, 1.0);
  CHECK(ru.objective <= std::sqrt(2.0) + 1e-6);
  CHECK(ru.objective == doctest::Approx(triple_norm_oracle(units, 1.0, 6)).epsilon(1e-2));
}

TEST_CASE("oracle closed cases") {
  const OperatorSequence eye({cmat(cmat::Identity(2, 2))});
  CHECK(triple_norm_oracle(eye, 1.0, 4) == doctest::Approx(2.0).epsilon(1e-3));

  const OperatorSequence s34({cmat::Constant(1, 1, 3.0), cmat::Constant(1, 1, 4.0)});
  CHECK(triple_norm_oracle(s34, 1.0, 4) == doctest::Approx(5.0).epsilon(1e-3));

  const OperatorSequence big = tt::random_sequence(3, 3, 2, 149);
  CHECK_THROWS_AS(triple_norm_oracle(big, 1.0, 4), std::invalid_argument);
}

TEST_CASE("solver agrees with the oracle on random 2x2 pairs") {
  for (std::uint64_t seed : {151u, 157u, 163u}) {
    const OperatorSequence seq = tt::random_sequence(2, 2, 2, seed);
    for (double p : {1.0, 1.5}) {
      const auto res = triple_norm(seq, p);
      const double oracle = triple_norm_oracle(seq, p, 8);
      CHECK(res.objective == doctest::Approx(oracle).epsilon(1e-2));
    }
  }
}

TEST_CASE("split feasibility is structural") {
  const OperatorSequence seq = tt::random_sequence(3, 2, 4, 167);
  const auto res = triple_norm(seq, 1.5);
  for (Eigen::Index n = 0; n < seq.size(); ++n) {
    const auto nu = static_cast<std::size_t>(n);
    CHECK((res.y_terms[nu] + res.z_terms[nu] - seq[nu]).norm() <= 1e-9);
  }
  CHECK(res.objective ==
        doctest::Approx(decomposition_objective(res.y_terms, res.z_terms, 1.5))
            .epsilon(1e-9));
}

TEST_CASE("pairing lower bound") {
  cmat x = cmat::Zero(2, 2);
  x(0, 0) = 1.0;
  const OperatorSequence seq({x});
  CHECK(pairing_lower_bound(seq, 1.0, seq) == doctest::Approx(1.0).epsilon(1e-12));

  const OperatorSequence zero_witness({cmat::Zero(2, 2)});
  CHECK_THROWS_AS(pairing_lower_bound(seq, 1.0, zero_witness), std::invalid_argument);

  // weak duality: no witness beats the solver objective
  const OperatorSequence inst = tt::random_sequence(2, 2, 3, 173);
  for (double p : {1.0, 1.5, 2.0}) {
    const auto res = triple_norm(inst, p);
    SplitMix64 g(179);
    for (int k = 0; k < 25; ++k) {
      const OperatorSequence witness = tt::random_sequence(2, 2, 3, fold(181, k));
      CHECK(pairing_lower_bound(inst, p, witness) <= res.objective + 1e-6);
    }
    CHECK(res.certificate_lower_bound <= res.objective + 1e-9);
  }
}

TEST_CASE("sandwich between certificates and pure splits") {
  const OperatorSequence seq = tt::random_sequence(3, 3, 4, 191);
  for (double p : {1.0, 1.3, 2.0}) {
    const auto res = triple_norm(seq, p);
    const double pure = std::min(schatten_norm(vstack(seq), p), schatten_norm(hstack(seq), p));
    CHECK(res.objective <= pure + 1e-9);
    CHECK(res.certificate_lower_bound <= res.objective + 1e-9);
    CHECK(res.converged);
    // certified gap
    CHECK(res.objective - res.certificate_lower_bound <= 2e-6 * res.objective + 1e-12);
  }
}

TEST_CASE("homogeneity and the triangle inequality") {
  const OperatorSequence a = tt::random_sequence(2, 3, 3, 193);
  const OperatorSequence b = tt::random_sequence(2, 3, 3, 197);
  std::vector<cmat> sum_terms;
  for (Eigen::Index n = 0; n < a.size(); ++n)
    sum_terms.push_back(a[static_cast<std::size_t>(n)] + b[static_cast<std::size_t>(n)]);
  const OperatorSequence sum(std::move(sum_terms));

  for (double p : {1.0, 1.5}) {
    const double na = triple_norm(a, p).objective;
    const double nb = triple_norm(b, p).objective;
    const double ns = triple_norm(sum, p).objective;
    CHECK(ns <= na + nb + 1e-6 * (na + nb));

    const double rescaled = triple_norm(scaled(a, 2.37), p).objective;
    CHECK(rescaled == doctest::Approx(2.37 * na).epsilon(1e-6));
  }
}

TEST_CASE("permutation invariance of the objective") {
  const OperatorSequence seq = tt::random_sequence(2, 2, 4, 199);
  const OperatorSequence permuted({seq[3], seq[1], seq[0], seq[2]});
  for (double p : {1.0, 1.5, 2.0}) {
    const double v1 = triple_norm(seq, p).objective;
    const double v2 = triple_norm(permuted, p).objective;
    CHECK(v1 == doctest::Approx(v2).epsilon(5e-6));
  }
}

TEST_CASE("p = 2 collapses to the Hilbert sum") {
  const OperatorSequence seq = tt::random_sequence(4, 2, 5, 211);
  const auto res = triple_norm(seq, 2.0);
  CHECK(res.objective == doctest::Approx(hilbert_sum_norm(seq)).epsilon(1e-6));
}

TEST_CASE("determinism and the non-convergence flag") {
  const OperatorSequence seq = tt::random_sequence(3, 3, 3, 223);
  SolverConfig cfg;
  cfg.seed = 777;
  const auto r1 = triple_norm(seq, 1.5, cfg);
  const auto r2 = triple_norm(seq, 1.5, cfg);
  CHECK(r1.objective == r2.objective);
  CHECK(r1.certificate_lower_bound == r2.certificate_lower_bound);
  CHECK(r1.iterations == r2.iterations);

  SolverConfig tight;
  tight.max_iterations = 1;
  tight.restart_count = 0;
  tight.tolerance = 1e-14;
  const auto rt = triple_norm(seq, 1.5, tight);
  CHECK_FALSE(rt.converged);
  CHECK(rt.objective >= rt.certificate_lower_bound - 1e-12);
  CHECK(rt.objective <=
        std::min(schatten_norm(vstack(seq), 1.5), schatten_norm(hstack(seq), 1.5)) + 1e-9);

  CHECK_FALSE(triple_norm(seq, 3.0).p_within_range);
  CHECK(triple_norm(seq, 1.0).p_within_range);
}

TEST_CASE("solver config validation") {
  const OperatorSequence seq({cmat::Identity(2, 2)});
  SolverConfig bad;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(triple_norm(seq, 1.0, bad), std::invalid_argument);
  bad = SolverConfig{};
  bad.max_iterations = 0;
  CHECK_THROWS_AS(triple_norm(seq, 1.0, bad), std::invalid_argument);
}
