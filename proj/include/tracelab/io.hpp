// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tracelab/decomposition.hpp"
#include "tracelab/estimate.hpp"
#include "tracelab/experiments.hpp"
#include "tracelab/hardy.hpp"
#include "tracelab/sequences.hpp"
#include "tracelab/types.hpp"

namespace tracelab {

using Json = nlohmann::json;

// Matrix literal: {"rows": r, "cols": c, "re": [...], "im": [...]}, row-major.
Json matrix_to_json(const cmat& m);
cmat matrix_from_json(const Json& j);

// Sequence literal: {"shape": [d1, d2], "terms": [matrix, ...]}.
Json sequence_to_json(const OperatorSequence& seq);
OperatorSequence sequence_from_json(const Json& j);

Json estimate_to_json(const EstimateReport& rep);

// Polynomial literal:
// {"M": m, "coeff_dim": k, "norm": "...", "terms": [{"freq": [...], "re": [...], "im": [...]}]}.
Json polynomial_to_json(const TorusPolynomial& f);
TorusPolynomial polynomial_from_json(const Json& j);

// Solver result: {"objective", "lower_bound", "iterations", "converged", "seed"}.
Json decomposition_to_json(const DecompositionResult& res, std::uint64_t seed);

// Infinite exponents serialize as the string "inf".
Json exponent_to_json(double p);
double exponent_from_json(const Json& j);

Json experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const Json& j,
                                             std::optional<std::uint64_t> default_seed = {});

Json ratio_report_to_json(const RatioReport& report);
Json counterexample_to_json(const CounterexampleReport& report);
Json dichotomy_to_json(const DichotomyReport& report);
Json tails_to_json(const TailsReport& report);
Json umd_estimate_to_json(const UmdConstantEstimate& est);
Json type_cotype_to_json(const TypeCotypeResult& res);

// CSV rows share one fixed column set:
// instance_id,d1,d2,N,exponent,randomizer,numerator,denominator,ratio,seed
std::string ratio_report_to_csv(const RatioReport& report);
std::string counterexample_to_csv(const CounterexampleReport& report);
std::string dichotomy_to_csv(const DichotomyReport& report);
std::string tails_to_csv(const TailsReport& report);

/// Shortest round-trip decimal form, reproducible across runs.
std::string format_double(double v);

std::string read_text_file(const std::string& path);

/// Writes through a sibling temp file and renames into place.
void write_text_atomic(const std::string& path, const std::string& content);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace tracelab
