// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "tracelab/sequences.hpp"
#include "tracelab/types.hpp"

namespace tracelab {

struct SolverConfig {
  int max_iterations = 2000;
  double tolerance = 1e-6;  // relative duality-gap target
  double step_size = 1.0;   // proximal step scale on the unit-normalized problem
  int restart_count = 2;    // perturbed restarts beyond the deterministic start
  std::uint64_t seed = 0x7472616365ull;
};

/// Optimal split x_n = y_n + z_n for the decomposition norm
///   inf ||(sum y^*y)^{1/2}||_{C_p} + ||(sum zz^*)^{1/2}||_{C_p},
/// reported with the best weak-duality certificate found. z_n is always
/// exactly x_n - y_n, so feasibility is structural.
struct DecompositionResult {
  OperatorSequence y_terms;
  OperatorSequence z_terms;
  double objective = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double certificate_lower_bound = 0.0;
  bool converged = false;
  bool p_within_range = true;  // the characterization is stated for p in [1, 2]
};

/// Minimizes ||vstack(y)||_{C_p} + ||hstack(x - y)||_{C_p} over the free
/// terms y by Douglas-Rachford splitting; both proximal maps act on singular
/// values. Deterministic given cfg.seed.
DecompositionResult triple_norm(const OperatorSequence& x, SchattenExponent p,
                                const SolverConfig& cfg = {});

/// Derivative-free multistart minimization of the same objective, usable as
/// an independent cross-check on tiny instances (N <= 2, dims <= 2). Returns
/// an upper bound on the infimum.
double triple_norm_oracle(const OperatorSequence& x, SchattenExponent p,
                          int resolution = 8);

/// Weak-duality bound |sum_n Re tr(a_n^* x_n)| / chi_norm(a, q) with q the
/// conjugate exponent; valid lower bound on the decomposition norm for any
/// nonzero witness a.
double pairing_lower_bound(const OperatorSequence& x, SchattenExponent p,
                           const OperatorSequence& witness);

/// Objective value of an explicit split.
double decomposition_objective(const OperatorSequence& y, const OperatorSequence& z,
                               SchattenExponent p);

// Proximal kernels, exposed for direct verification.

/// prox of t * ||.||_p on vectors: soft thresholding at p = 1, scaling at
/// p = 2, and the Moreau route (dual-ball projection) otherwise, with
/// per-component Newton solves.
rvec prox_lp_norm(const rvec& v, SchattenExponent p, double t);

/// prox of t * ||.||_{C_p}: prox_lp_norm applied to the singular values.
cmat schatten_prox(const cmat& m, SchattenExponent p, double t);

/// Euclidean projection onto the unit ell_q ball, 1 <= q <= inf.
rvec project_lq_ball(const rvec& w, double q);

}  // namespace tracelab
