// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tracelab/estimate.hpp"
#include "tracelab/sequences.hpp"
#include "tracelab/types.hpp"

namespace tracelab {

enum class RandomizerKind { rademacher, gaussian, steinhaus };

RandomizerKind parse_randomizer(const std::string& name);
std::string to_string(RandomizerKind kind);

/// How series norms are averaged: exhaustively over all Rademacher sign
/// patterns, by Monte Carlo, or whichever fits the instance (exhaustive for
/// Rademacher families of at most 12 terms).
enum class Enumeration { automatic, exhaustive, sampled };

/// Monte-Carlo estimate of the L_r norm (E ||sum_n xi_n x_n||_{C_p}^r)^{1/r}.
/// Sample i draws its variates from the stream fold(seed, i), so results are
/// identical however samples are batched.
EstimateReport sample_series_norm(const OperatorSequence& seq, RandomizerKind rnd,
                                  SchattenExponent p, double r, std::int64_t samples,
                                  std::uint64_t seed);

/// Exact L_r moment over all 2^N sign patterns (N <= 20). Only half the
/// patterns are visited; the norm is invariant under a global sign flip.
EstimateReport exact_rademacher_moment(const OperatorSequence& seq, SchattenExponent p,
                                       double r);

/// Norm samples ||sum_n xi_n x_n||_{C_p}, one per sign pattern (exhaustive)
/// or one per Monte-Carlo draw. Building block for the estimators above.
std::vector<double> series_norm_samples(const OperatorSequence& seq, RandomizerKind rnd,
                                        SchattenExponent p, std::int64_t samples,
                                        std::uint64_t seed, Enumeration mode);

/// Moment equivalence ratio L_{r2} / L_{r1} for 0 < r1 < r2, computed on one
/// shared set of draws (or exactly, when enumeration applies).
double kahane_ratio(const OperatorSequence& seq, RandomizerKind rnd, SchattenExponent p,
                    double r1, double r2, std::int64_t samples, std::uint64_t seed,
                    Enumeration mode = Enumeration::automatic);

struct TailPoint {
  double t = 0.0;
  double survival = 0.0;        // empirical P(||S|| > t)
  std::int64_t exceedances = 0;
  bool reliable = false;        // at least 10 exceedances
};

struct TailProfile {
  std::vector<TailPoint> points;
  double delta_hat = 0.0;  // slope of -log P against t^2 over the upper grid
  bool fit_ok = false;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Empirical survival function of ||sum xi_n x_n||_{C_p} on an increasing
/// t grid, with a subgaussian decay-rate fit.
TailProfile tail_profile(const OperatorSequence& seq, RandomizerKind rnd,
                         SchattenExponent p, std::int64_t samples, std::uint64_t seed,
                         const std::vector<double>& t_grid);

/// Monte-Carlo mean of ||(eps_ij a_ij)||_{C_q} under independent entry signs.
EstimateReport random_sign_matrix_norm(const cmat& a, SchattenExponent q,
                                       std::int64_t samples, std::uint64_t seed);

/// max( (sum_i ||row_i||_2^q)^{1/q}, (sum_j ||col_j||_2^q)^{1/q} ), the
/// deterministic row/column functional the sign matrix norm is compared to.
double row_column_functional(const cmat& a, SchattenExponent q);

}  // namespace tracelab
