// SPDX-License-Identifier: Apache-2.0
#include "tracelab/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <stdexcept>

#include "tracelab/io.hpp"
#include "tracelab/parallel.hpp"
#include "tracelab/rng.hpp"

namespace tracelab {

namespace {

std::uint64_t exponent_bits(double p) { return std::bit_cast<std::uint64_t>(p); }

std::uint64_t instance_seed(const ExperimentConfig& cfg, double exponent, int d1, int d2,
                            int n_terms, int index) {
  std::uint64_t s = fold(cfg.seed, cfg.name);
  s = fold(s, exponent_bits(exponent));
  s = fold(s, static_cast<std::uint64_t>(d1) << 32 | static_cast<std::uint64_t>(d2));
  s = fold(s, static_cast<std::uint64_t>(n_terms));
  return fold(s, static_cast<std::uint64_t>(index));
}

const char* kStructuredKinds[] = {"row_units", "diagonal", "rank_one"};

std::string instance_kind(int index) {
  if (index % 5 != 4) return "gaussian";
  return kStructuredKinds[(index / 5) % 3];
}

void add_summaries(RatioReport& report) {
  std::map<std::tuple<double, int, int, int>, CellSummary> cells;
  for (const RatioRecord& rec : report.records) {
    auto key = std::make_tuple(rec.exponent, rec.d1, rec.d2, rec.n_terms);
    auto [it, fresh] = cells.try_emplace(key);
    CellSummary& cell = it->second;
    if (fresh) {
      cell = CellSummary{rec.exponent, rec.d1, rec.d2, rec.n_terms, rec.ratio, rec.ratio};
    } else {
      cell.min_ratio = std::min(cell.min_ratio, rec.ratio);
      cell.max_ratio = std::max(cell.max_ratio, rec.ratio);
    }
  }
  report.summary.clear();
  for (const auto& [key, cell] : cells) report.summary.push_back(cell);
}

EstimateReport series_l2_norm(const OperatorSequence& seq, SchattenExponent p,
                              std::int64_t samples, std::uint64_t seed) {
  if (seq.size() <= 12) return exact_rademacher_moment(seq, p, 2.0);
  return sample_series_norm(seq, RandomizerKind::rademacher, p, 2.0, samples, seed);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (name.empty()) throw std::invalid_argument("experiment config: name required");
  if (dims.empty()) throw std::invalid_argument("experiment config: dims must be nonempty");
  if (terms.empty())
    throw std::invalid_argument("experiment config: terms must be nonempty");
  if (exponents.empty())
    throw std::invalid_argument("experiment config: exponents must be nonempty");
  for (auto [d1, d2] : dims)
    if (d1 < 1 || d2 < 1)
      throw std::invalid_argument("experiment config: dims must be positive");
  for (int n : terms)
    if (n < 1) throw std::invalid_argument("experiment config: terms must be positive");
  for (double p : exponents)
    if (!(p >= 1.0))
      throw std::invalid_argument("experiment config: exponents must be >= 1");
  if (trials < 1) throw std::invalid_argument("experiment config: trials >= 1 required");
  if (samples < 1)
    throw std::invalid_argument("experiment config: samples >= 1 required");
  if (format != "json" && format != "csv")
    throw std::invalid_argument("experiment config: format must be json or csv");
}

OperatorSequence random_instance(int d1, int d2, int n_terms, std::uint64_t seed,
                                 const std::string& kind) {
  if (d1 < 1 || d2 < 1 || n_terms < 1)
    throw std::invalid_argument("random_instance: positive dimensions required");
  SplitMix64 g(fold(seed, kind));
  std::vector<cmat> terms;
  terms.reserve(static_cast<std::size_t>(n_terms));
  if (kind == "gaussian") {
    for (int n = 0; n < n_terms; ++n)
      terms.push_back(complex_gaussian_matrix(d1, d2, g));
  } else if (kind == "row_units") {
    for (int n = 0; n < n_terms; ++n) {
      cmat t = cmat::Zero(d1, d2);
      t(0, n % d2) = 1.0;
      terms.push_back(std::move(t));
    }
  } else if (kind == "diagonal") {
    const int m = std::min(d1, d2);
    for (int n = 0; n < n_terms; ++n) {
      cmat t = cmat::Zero(d1, d2);
      t(n % m, n % m) = 1.0;
      terms.push_back(std::move(t));
    }
  } else if (kind == "rank_one") {
    cvec v = complex_gaussian_vector(d2, g);
    v.normalize();
    for (int n = 0; n < n_terms; ++n) {
      cvec u = complex_gaussian_vector(d1, g);
      u.normalize();
      terms.push_back(u * v.adjoint());
    }
  } else {
    throw std::invalid_argument("random_instance: unknown kind " + kind);
  }
  return OperatorSequence(std::move(terms));
}

RatioReport verify_thm3(const ExperimentConfig& cfg) {
  cfg.validate();
  for (double q : cfg.exponents)
    if (!(q >= 2.0))
      throw std::invalid_argument("verify_thm3: exponents must be >= 2");

  RatioReport report;
  report.experiment = "thm3";
  for (double q : cfg.exponents) {
    for (auto [d1, d2] : cfg.dims) {
      for (int n : cfg.terms) {
        for (int i = 0; i < cfg.trials; ++i) {
          const std::string kind = instance_kind(i);
          const std::uint64_t seed = instance_seed(cfg, q, d1, d2, n, i);
          const OperatorSequence seq = random_instance(d1, d2, n, seed, kind);
          const EstimateReport num = series_l2_norm(seq, q, cfg.samples, seed);
          const double den = chi_norm(seq, q);
          RatioRecord rec;
          rec.instance_id = kind + "-" + std::to_string(i);
          rec.d1 = d1;
          rec.d2 = d2;
          rec.n_terms = n;
          rec.exponent = q;
          rec.numerator = num.estimate;
          rec.denominator = den;
          rec.ratio = num.estimate / den;
          rec.seed = seed;
          rec.exact = num.exact;
          report.records.push_back(std::move(rec));
        }
      }
    }
  }
  add_summaries(report);
  return report;
}

RatioReport verify_thm4(const ExperimentConfig& cfg) {
  cfg.validate();
  for (double p : cfg.exponents)
    if (!(p >= 1.0 && p <= 2.0))
      throw std::invalid_argument("verify_thm4: exponents must lie in [1, 2]");

  RatioReport report;
  report.experiment = "thm4";
  for (double p : cfg.exponents) {
    for (auto [d1, d2] : cfg.dims) {
      for (int n : cfg.terms) {
        for (int i = 0; i < cfg.trials; ++i) {
          const std::string kind = instance_kind(i);
          const std::uint64_t seed = instance_seed(cfg, p, d1, d2, n, i);
          const OperatorSequence seq = random_instance(d1, d2, n, seed, kind);
          const EstimateReport num = series_l2_norm(seq, p, cfg.samples, seed);
          SolverConfig solver;
          solver.max_iterations = 3000;
          solver.seed = fold(seed, "solver");
          const DecompositionResult den = triple_norm(seq, p, solver);
          RatioRecord rec;
          rec.instance_id = kind + "-" + std::to_string(i);
          rec.d1 = d1;
          rec.d2 = d2;
          rec.n_terms = n;
          rec.exponent = p;
          rec.numerator = num.estimate;
          rec.denominator = den.objective;
          rec.ratio = num.estimate / den.objective;
          rec.seed = seed;
          rec.exact = num.exact;
          rec.converged = den.converged;
          report.records.push_back(std::move(rec));
        }
      }
    }
  }
  add_summaries(report);
  return report;
}

CounterexampleReport counterexample_row_column(double q, const std::vector<int>& n_list,
                                               std::uint64_t seed) {
  if (!(q > 2.0))
    throw std::invalid_argument("counterexample_row_column: q > 2 required");
  if (n_list.empty())
    throw std::invalid_argument("counterexample_row_column: empty size list");

  CounterexampleReport report;
  report.exponent = q;
  report.seed = seed;
  for (int n : n_list) {
    if (n < 1) throw std::invalid_argument("counterexample_row_column: sizes >= 1");
    std::vector<cmat> terms;
    terms.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      cmat t = cmat::Zero(1, n);
      t(0, k) = 1.0;
      terms.push_back(std::move(t));
    }
    const OperatorSequence seq(std::move(terms));

    // The norm should not depend on the signs at all; measure the spread
    // over the patterns actually visited.
    const Enumeration mode = n <= 12 ? Enumeration::exhaustive : Enumeration::sampled;
    const std::vector<double> values =
        series_norm_samples(seq, RandomizerKind::rademacher, q, 256, fold(seed, n), mode);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());

    CounterexampleRow row;
    row.n_terms = n;
    row.series_norm = values.front();
    row.patterns_checked = static_cast<std::int64_t>(values.size());
    row.max_pattern_spread = *hi - *lo;
    row.column_functional = lp_norm(psd_eigenvalues(column_gram(seq)).cwiseSqrt(), q);
    row.row_functional = lp_norm(psd_eigenvalues(row_gram(seq)).cwiseSqrt(), q);
    row.ratio = row.series_norm / row.column_functional;
    row.closed_form = std::pow(static_cast<double>(n), 0.5 - 1.0 / q);
    report.rows.push_back(row);
  }
  return report;
}

DichotomyReport dichotomy_demo(const std::vector<int>& n_list, std::int64_t samples,
                               std::uint64_t seed) {
  if (n_list.empty()) throw std::invalid_argument("dichotomy_demo: empty size list");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("dichotomy_demo: sizes must increase");
  if (samples < 1) throw std::invalid_argument("dichotomy_demo: samples >= 1 required");

  DichotomyReport report;
  report.samples = samples;
  report.seed = seed;
  for (int n : n_list) {
    if (n < 1) throw std::invalid_argument("dichotomy_demo: sizes >= 1");
    const std::uint64_t row_seed = fold(fold(seed, "dichotomy"), static_cast<std::uint64_t>(n));
    DichotomyRow row;
    row.n = n;

    // sup norm of a +-1 vector, checked over a handful of patterns
    double rad = 1.0;
    SplitMix64 pat(fold(row_seed, "signs"));
    for (int trial = 0; trial < 64; ++trial) {
      double m = 0.0;
      for (int k = 0; k < n; ++k) m = std::max(m, std::abs(rademacher_sign(pat)));
      rad = std::max(rad, m);
    }
    row.rademacher_value = rad;
    row.rademacher_exact = true;

    std::vector<double> values(static_cast<std::size_t>(samples));
    parallel_for(samples, [&](std::int64_t i) {
      SplitMix64 g(fold(row_seed, static_cast<std::uint64_t>(i)));
      double m = 0.0;
      for (int k = 0; k < n; ++k) m = std::max(m, std::abs(standard_normal(g)));
      values[static_cast<std::size_t>(i)] = m;
    });
    row.gaussian = moment_root_estimate(values, 1.0, row_seed);
    row.ratio = row.gaussian.estimate / row.rademacher_value;
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

std::vector<double> vector_series_norms(const std::vector<cvec>& family,
                                        const SpaceSpec& space, std::int64_t samples,
                                        std::uint64_t seed, Enumeration mode) {
  const int n = static_cast<int>(family.size());
  const bool exhaustive =
      mode == Enumeration::exhaustive || (mode == Enumeration::automatic && n <= 12);
  std::vector<double> values;
  if (exhaustive) {
    const std::uint64_t patterns = n == 1 ? 1 : (1ull << (n - 1));
    values.reserve(static_cast<std::size_t>(patterns));
    cvec s = cvec::Zero(family.front().size());
    for (const cvec& v : family) s += v;
    std::vector<double> signs(static_cast<std::size_t>(n), 1.0);
    values.push_back(space(s));
    for (std::uint64_t i = 1; i < patterns; ++i) {
      const auto j = static_cast<std::size_t>(std::countr_zero(i)) + 1;
      s -= 2.0 * signs[j] * family[j];
      signs[j] = -signs[j];
      values.push_back(space(s));
    }
  } else {
    values.resize(static_cast<std::size_t>(samples));
    for (std::int64_t i = 0; i < samples; ++i) {
      SplitMix64 g(fold(seed, static_cast<std::uint64_t>(i)));
      cvec s = cvec::Zero(family.front().size());
      for (const cvec& v : family) s += rademacher_sign(g) * v;
      values[static_cast<std::size_t>(i)] = space(s);
    }
  }
  return values;
}

}  // namespace

TypeCotypeResult estimate_type_cotype(const SpaceSpec& space, double exponent,
                                      TypeCotypeDirection direction, int families,
                                      int family_size, std::int64_t samples,
                                      std::uint64_t seed, FamilyKind kind,
                                      Enumeration mode) {
  if (direction == TypeCotypeDirection::type && !(exponent >= 1.0 && exponent <= 2.0))
    throw std::invalid_argument("type exponent must lie in [1, 2]");
  if (direction == TypeCotypeDirection::cotype &&
      !(exponent >= 2.0 && std::isfinite(exponent)))
    throw std::invalid_argument("cotype exponent must lie in [2, inf)");
  if (families < 1) throw std::invalid_argument("estimate_type_cotype: families >= 1");
  if (family_size < 1 && kind == FamilyKind::random_family)
    throw std::invalid_argument("estimate_type_cotype: family_size >= 1");

  TypeCotypeResult result;
  result.space = space.to_string();
  result.direction = direction == TypeCotypeDirection::type ? "type" : "cotype";
  result.families = families;
  result.seed = seed;

  for (int fam = 0; fam < families; ++fam) {
    const std::uint64_t fam_seed = fold(fold(seed, "typecotype"), static_cast<std::uint64_t>(fam));
    std::vector<cvec> vectors;
    if (kind == FamilyKind::coordinate) {
      vectors.reserve(static_cast<std::size_t>(space.coeff_dim));
      for (int i = 0; i < space.coeff_dim; ++i) {
        cvec e = cvec::Zero(space.coeff_dim);
        e[i] = 1.0;
        vectors.push_back(std::move(e));
      }
    } else {
      SplitMix64 g(fam_seed);
      vectors.reserve(static_cast<std::size_t>(family_size));
      for (int i = 0; i < family_size; ++i)
        vectors.push_back(complex_gaussian_vector(space.coeff_dim, g));
    }
    result.family_size = static_cast<int>(vectors.size());

    const std::vector<double> norms =
        vector_series_norms(vectors, space, samples, fam_seed, mode);
    const double series = moment_root_estimate(norms, 2.0, fam_seed).estimate;

    rvec sizes(static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i)
      sizes[static_cast<Eigen::Index>(i)] = space(vectors[i]);
    const double moment_sum = lp_norm(sizes, SchattenExponent(exponent));

    double ratio = 0.0;
    if (direction == TypeCotypeDirection::type && moment_sum > 0.0)
      ratio = series / moment_sum;
    else if (direction == TypeCotypeDirection::cotype && series > 0.0)
      ratio = moment_sum / series;
    if (ratio > result.constant) {
      result.constant = ratio;
      result.best_family = fam;
    }
  }
  return result;
}

RatioReport verify_kahane(const ExperimentConfig& cfg, double r1, double r2) {
  cfg.validate();
  if (!(0.0 < r1 && r1 < r2))
    throw std::invalid_argument("verify_kahane: need 0 < r1 < r2");

  RatioReport report;
  report.experiment = "kahane";
  const double p = cfg.exponents.front();

  auto push = [&](const OperatorSequence& seq, const std::string& id, std::uint64_t seed,
                  Enumeration mode) {
    const std::vector<double> values = series_norm_samples(
        seq, RandomizerKind::rademacher, p, cfg.samples, seed, mode);
    const bool exact = mode == Enumeration::exhaustive ||
                       (mode == Enumeration::automatic && seq.size() <= 12);
    RatioRecord rec;
    rec.instance_id = id;
    rec.d1 = static_cast<int>(seq.rows());
    rec.d2 = static_cast<int>(seq.cols());
    rec.n_terms = static_cast<int>(seq.size());
    rec.exponent = p;
    rec.numerator = moment_root_estimate(values, r2, seed).estimate;
    rec.denominator = moment_root_estimate(values, r1, seed).estimate;
    rec.ratio = rec.numerator / rec.denominator;
    rec.seed = seed;
    rec.exact = exact;
    report.records.push_back(std::move(rec));
  };

  for (int n : cfg.terms) {
    std::vector<cmat> scalars(static_cast<std::size_t>(n), cmat::Constant(1, 1, 1.0));
    const OperatorSequence seq(std::move(scalars));
    const std::uint64_t seed = instance_seed(cfg, p, 1, 1, n, -1);
    // scalar sums are cheap enough to enumerate a little further out
    const Enumeration mode = n <= 16 ? Enumeration::exhaustive : Enumeration::sampled;
    push(seq, "scalar-" + std::to_string(n), seed, mode);
  }
  for (auto [d1, d2] : cfg.dims) {
    for (int n : cfg.terms) {
      for (int i = 0; i < cfg.trials; ++i) {
        const std::uint64_t seed = instance_seed(cfg, p, d1, d2, n, i);
        const OperatorSequence seq = random_instance(d1, d2, n, seed, "gaussian");
        push(seq, "gaussian-" + std::to_string(i), seed, Enumeration::automatic);
      }
    }
  }
  add_summaries(report);
  return report;
}

TailsReport verify_tails(const ExperimentConfig& cfg) {
  cfg.validate();
  TailsReport report;
  report.seed = cfg.seed;
  const double p = cfg.exponents.front();

  for (int n : cfg.terms) {
    // sum of n scaled signs of weight 1/sqrt(n) is standard normal
    std::vector<cmat> scalars(static_cast<std::size_t>(n),
                              cmat::Constant(1, 1, 1.0 / std::sqrt(static_cast<double>(n))));
    const OperatorSequence seq(std::move(scalars));
    const std::uint64_t seed = instance_seed(cfg, p, 1, 1, n, -2);
    TailInstanceReport inst;
    inst.instance_id = "scalar-gaussian-" + std::to_string(n);
    inst.d1 = inst.d2 = 1;
    inst.n_terms = n;
    inst.exponent = p;
    inst.randomizer = "gaussian";
    const std::vector<double> grid = {0.5, 1.0, 1.5, 2.0, 2.5};
    inst.profile = tail_profile(seq, RandomizerKind::gaussian, p, cfg.samples, seed, grid);
    inst.oracle_survival.reserve(grid.size());
    for (double t : grid) inst.oracle_survival.push_back(std::erfc(t / std::sqrt(2.0)));
    report.instances.push_back(std::move(inst));
  }

  int cell = 0;
  for (auto [d1, d2] : cfg.dims) {
    for (int n : cfg.terms) {
      const RandomizerKind rnd =
          cell % 2 == 0 ? RandomizerKind::rademacher : RandomizerKind::gaussian;
      const std::uint64_t seed = instance_seed(cfg, p, d1, d2, n, cell);
      const OperatorSequence seq = random_instance(d1, d2, n, seed, "gaussian");
      const double scale = hilbert_sum_norm(seq);
      std::vector<double> grid;
      for (double f : {0.8, 1.0, 1.15, 1.3, 1.45, 1.6}) grid.push_back(f * scale);
      TailInstanceReport inst;
      inst.instance_id = "matrix-" + std::to_string(cell);
      inst.d1 = d1;
      inst.d2 = d2;
      inst.n_terms = n;
      inst.exponent = p;
      inst.randomizer = to_string(rnd);
      inst.profile = tail_profile(seq, rnd, p, cfg.samples, seed, grid);
      report.instances.push_back(std::move(inst));
      ++cell;
    }
  }
  return report;
}

namespace {

namespace fs = std::filesystem;

std::string resolve_against(const fs::path& base_dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return p.string();
  return (base_dir / p).string();
}

std::string render_report(const ExperimentConfig& cfg) {
  if (cfg.name == "thm3") {
    const RatioReport rep = verify_thm3(cfg);
    return cfg.format == "csv" ? ratio_report_to_csv(rep)
                               : ratio_report_to_json(rep).dump(2) + "\n";
  }
  if (cfg.name == "thm4") {
    const RatioReport rep = verify_thm4(cfg);
    return cfg.format == "csv" ? ratio_report_to_csv(rep)
                               : ratio_report_to_json(rep).dump(2) + "\n";
  }
  if (cfg.name == "kahane") {
    const RatioReport rep = verify_kahane(cfg);
    return cfg.format == "csv" ? ratio_report_to_csv(rep)
                               : ratio_report_to_json(rep).dump(2) + "\n";
  }
  if (cfg.name == "counterexample") {
    const CounterexampleReport rep =
        counterexample_row_column(cfg.exponents.front(), cfg.terms, cfg.seed);
    return cfg.format == "csv" ? counterexample_to_csv(rep)
                               : counterexample_to_json(rep).dump(2) + "\n";
  }
  if (cfg.name == "dichotomy") {
    const DichotomyReport rep = dichotomy_demo(cfg.terms, cfg.samples, cfg.seed);
    return cfg.format == "csv" ? dichotomy_to_csv(rep)
                               : dichotomy_to_json(rep).dump(2) + "\n";
  }
  if (cfg.name == "tails") {
    const TailsReport rep = verify_tails(cfg);
    return cfg.format == "csv" ? tails_to_csv(rep) : tails_to_json(rep).dump(2) + "\n";
  }
  throw std::invalid_argument("unknown experiment name: " + cfg.name);
}

}  // namespace

SuiteResult run_suite(const std::string& config_path) {
  SuiteResult result;
  std::string raw;
  Json root;
  try {
    raw = read_text_file(config_path);
    root = Json::parse(raw);
  } catch (const Json::parse_error& e) {
    // report the line of the offending byte
    std::size_t line = 1;
    for (std::size_t i = 0; i < raw.size() && i < e.byte; ++i)
      if (raw[i] == '\n') ++line;
    throw std::invalid_argument(config_path + ":" + std::to_string(line) +
                                ": parse error: " + e.what());
  }

  const fs::path base_dir = fs::absolute(fs::path(config_path)).parent_path();
  std::optional<std::uint64_t> default_seed;
  Json entries;
  std::string manifest_path = (base_dir / "manifest.json").string();
  if (root.is_array()) {
    entries = root;
  } else if (root.is_object()) {
    if (!root.contains("experiments") || !root["experiments"].is_array())
      throw std::invalid_argument(config_path + ":1: config must be an array or carry an \"experiments\" array");
    entries = root["experiments"];
    if (root.contains("seed")) default_seed = root["seed"].get<std::uint64_t>();
    if (root.contains("manifest_path"))
      manifest_path = resolve_against(base_dir, root["manifest_path"].get<std::string>());
  } else {
    throw std::invalid_argument(config_path + ":1: config must be an array or object");
  }
  if (entries.empty())
    throw std::invalid_argument(config_path + ":1: no experiments configured");

  Json manifest;
  manifest["config_hash"] = fnv1a64(raw);
  manifest["config_path"] = fs::absolute(fs::path(config_path)).string();
  manifest["version"] = kVersion;
  manifest["experiments"] = Json::array();

  bool any_failed = false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    ExperimentStatus status;
    const auto start = std::chrono::steady_clock::now();
    try {
      ExperimentConfig cfg = experiment_config_from_json(entries[i], default_seed);
      status.name = cfg.name;
      if (cfg.output_path.empty())
        throw std::invalid_argument("experiments[" + std::to_string(i) +
                                    "]: output_path required in suite mode");
      status.output_path = resolve_against(base_dir, cfg.output_path);
      const std::string content = render_report(cfg);
      write_text_atomic(status.output_path, content);
      status.status = "ok";
    } catch (const std::exception& e) {
      status.status = std::string("error: ") + e.what();
      any_failed = true;
    }
    const auto end = std::chrono::steady_clock::now();
    status.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();

    Json entry;
    entry["name"] = status.name;
    entry["status"] = status.status;
    entry["output"] = status.output_path;
    entry["wall_ms"] = status.wall_ms;
    entry["seed"] = entries[i].contains("seed")
                        ? entries[i]["seed"].get<std::uint64_t>()
                        : default_seed.value_or(1);
    manifest["experiments"].push_back(entry);
    result.statuses.push_back(std::move(status));
  }

  write_text_atomic(manifest_path, manifest.dump(2) + "\n");
  result.manifest_path = manifest_path;
  result.exit_code = any_failed ? 1 : 0;
  return result;
}

}  // namespace tracelab
