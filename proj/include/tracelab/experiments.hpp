// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tracelab/decomposition.hpp"
#include "tracelab/estimate.hpp"
#include "tracelab/random_series.hpp"
#include "tracelab/sequences.hpp"
#include "tracelab/spaces.hpp"

namespace tracelab {

inline constexpr const char* kVersion = "0.1.0";

/// One batch experiment: a grid of matrix shapes, family sizes, and
/// exponents, with per-cell trial and sample budgets. Per-instance seeds
/// derive from (seed, experiment name, cell, instance index), so every
/// record is recomputable from its metadata alone.
struct ExperimentConfig {
  std::string name;
  std::vector<std::pair<int, int>> dims = {{2, 2}, {4, 4}, {8, 8}};
  std::vector<int> terms = {2, 4, 8};
  std::vector<double> exponents = {2.0};
  int trials = 20;
  std::int64_t samples = 20000;
  std::uint64_t seed = 1;
  std::string output_path;
  std::string format = "json";

  void validate() const;
};

/// Series norm over formula norm for one instance; the carrier of the
/// two-sided equivalence checks.
struct RatioRecord {
  std::string instance_id;
  int d1 = 0;
  int d2 = 0;
  int n_terms = 0;
  double exponent = 0.0;
  std::string randomizer = "rademacher";
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  bool exact = false;
  bool converged = true;
};

struct CellSummary {
  double exponent = 0.0;
  int d1 = 0;
  int d2 = 0;
  int n_terms = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

struct RatioReport {
  std::string experiment;
  std::vector<RatioRecord> records;
  std::vector<CellSummary> summary;
  // Working band for the equivalence ratios; recorded with the data, the
  // estimates themselves never depend on it.
  std::array<double, 2> acceptance_band{0.25, 4.0};
};

/// Random or structured test family for the equivalence experiments.
/// kind is one of gaussian | row_units | diagonal | rank_one.
OperatorSequence random_instance(int d1, int d2, int n_terms, std::uint64_t seed,
                                 const std::string& kind);

/// Square-function equivalence: exact (N <= 12) or sampled L_2 series norm
/// against chi_norm, over the configured grid. Exponents must be >= 2.
RatioReport verify_thm3(const ExperimentConfig& cfg);

/// Decomposition-norm equivalence: series norm against the solver objective,
/// exponents restricted to [1, 2]. Solver non-convergence lands in the
/// record's converged flag.
RatioReport verify_thm4(const ExperimentConfig& cfg);

struct CounterexampleRow {
  int n_terms = 0;
  double series_norm = 0.0;
  double column_functional = 0.0;
  double row_functional = 0.0;
  double ratio = 0.0;        // series norm over the column-only functional
  double closed_form = 0.0;  // N^{1/2 - 1/q}
  std::int64_t patterns_checked = 0;
  double max_pattern_spread = 0.0;  // deviation of the norm across sign patterns
};

struct CounterexampleReport {
  double exponent = 0.0;
  std::vector<CounterexampleRow> rows;
  std::uint64_t seed = 0;
};

/// Row-unit family x_n = E_{1n}: the series norm stays sqrt(N) for every
/// sign pattern while the column-only square function grows like N^{1/q},
/// so dropping one of the two gram conditions breaks the equivalence.
CounterexampleReport counterexample_row_column(double q, const std::vector<int>& n_list,
                                               std::uint64_t seed);

struct DichotomyRow {
  int n = 0;
  double rademacher_value = 0.0;  // sup norm of a sign vector, always 1
  bool rademacher_exact = true;
  EstimateReport gaussian;  // E max_i |g_i|
  double ratio = 0.0;
};

struct DichotomyReport {
  std::vector<DichotomyRow> rows;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Coordinate family in ell_inf^n: Rademacher series norms stay bounded
/// while Gaussian ones grow like sqrt(2 log n).
DichotomyReport dichotomy_demo(const std::vector<int>& n_list, std::int64_t samples,
                               std::uint64_t seed);

enum class TypeCotypeDirection { type, cotype };
enum class FamilyKind { random_family, coordinate };

struct TypeCotypeResult {
  double constant = 0.0;
  std::string space;
  std::string direction;
  int families = 0;
  int family_size = 0;
  int best_family = -1;
  std::uint64_t seed = 0;
};

/// Best empirical type/cotype constant over sampled vector families:
/// seriesNorm / (sum ||v||^p)^{1/p} for type, the reciprocal pairing for
/// cotype. Type needs exponent in [1, 2], cotype in [2, inf).
TypeCotypeResult estimate_type_cotype(const SpaceSpec& space, double exponent,
                                      TypeCotypeDirection direction, int families,
                                      int family_size, std::int64_t samples,
                                      std::uint64_t seed,
                                      FamilyKind kind = FamilyKind::random_family,
                                      Enumeration mode = Enumeration::automatic);

/// Moment-equivalence ratios L_{r2}/L_{r1} on scalar and matrix families.
RatioReport verify_kahane(const ExperimentConfig& cfg, double r1 = 2.0, double r2 = 4.0);

struct TailInstanceReport {
  std::string instance_id;
  int d1 = 0;
  int d2 = 0;
  int n_terms = 0;
  double exponent = 0.0;
  std::string randomizer;
  TailProfile profile;
  // Exact standard-normal survival per grid point for the normalized scalar
  // Gaussian instances; empty otherwise.
  std::vector<double> oracle_survival;
};

struct TailsReport {
  std::vector<TailInstanceReport> instances;
  std::uint64_t seed = 0;
};

/// Survival profiles and subgaussian decay fits for scalar and matrix series.
TailsReport verify_tails(const ExperimentConfig& cfg);

struct ExperimentStatus {
  std::string name;
  std::string status;  // "ok" or "error: ..."
  std::string output_path;
  double wall_ms = 0.0;
};

struct SuiteResult {
  int exit_code = 0;
  std::vector<ExperimentStatus> statuses;
  std::string manifest_path;
};

/// Runs every experiment in a JSON config file, writing outputs atomically
/// and a manifest with the config hash, seeds, and per-experiment status.
/// Wall-clock timings live only in the manifest, so data files are
/// byte-reproducible.
SuiteResult run_suite(const std::string& config_path);

}  // namespace tracelab
