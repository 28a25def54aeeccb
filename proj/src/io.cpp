// SPDX-License-Identifier: Apache-2.0
#include "tracelab/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace tracelab {

namespace {

Json complex_parts_to_json(const cvec& v) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v[i].real());
    im.push_back(v[i].imag());
  }
  Json out;
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

void require_key(const Json& j, const char* key, const char* what) {
  if (!j.contains(key))
    throw std::invalid_argument(std::string(what) + ": missing field \"" + key + "\"");
}

}  // namespace

Json matrix_to_json(const cmat& m) {
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

cmat matrix_from_json(const Json& j) {
  require_key(j, "rows", "matrix");
  require_key(j, "cols", "matrix");
  require_key(j, "re", "matrix");
  const auto rows = j["rows"].get<Eigen::Index>();
  const auto cols = j["cols"].get<Eigen::Index>();
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("matrix: rows and cols must be positive");
  const Json& re = j["re"];
  const Json* im = j.contains("im") ? &j["im"] : nullptr;
  if (static_cast<Eigen::Index>(re.size()) != rows * cols)
    throw std::invalid_argument("matrix: re must hold rows*cols entries");
  if (im && im->size() != re.size())
    throw std::invalid_argument("matrix: im must match re in length");
  cmat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto idx = static_cast<std::size_t>(r * cols + c);
      m(r, c) = complexd(re[idx].get<double>(), im ? (*im)[idx].get<double>() : 0.0);
    }
  require_finite(m, "matrix");
  return m;
}

Json sequence_to_json(const OperatorSequence& seq) {
  Json out;
  out["shape"] = Json::array({seq.rows(), seq.cols()});
  Json terms = Json::array();
  for (const cmat& t : seq) terms.push_back(matrix_to_json(t));
  out["terms"] = std::move(terms);
  return out;
}

OperatorSequence sequence_from_json(const Json& j) {
  require_key(j, "terms", "sequence");
  const Json& jt = j["terms"];
  if (!jt.is_array() || jt.empty())
    throw std::invalid_argument("sequence: terms must be a nonempty array");
  std::vector<cmat> terms;
  terms.reserve(jt.size());
  for (const Json& m : jt) terms.push_back(matrix_from_json(m));
  OperatorSequence seq(std::move(terms));
  if (j.contains("shape")) {
    const Json& sh = j["shape"];
    if (!sh.is_array() || sh.size() != 2 ||
        sh[0].get<Eigen::Index>() != seq.rows() || sh[1].get<Eigen::Index>() != seq.cols())
      throw std::invalid_argument("sequence: shape does not match the terms");
  }
  return seq;
}

Json estimate_to_json(const EstimateReport& rep) {
  Json out;
  out["estimate"] = rep.estimate;
  out["std_error"] = rep.std_error;
  out["ci95_low"] = rep.ci95_low;
  out["ci95_high"] = rep.ci95_high;
  out["samples"] = rep.samples;
  out["seed"] = rep.seed;
  out["exact"] = rep.exact;
  return out;
}

Json polynomial_to_json(const TorusPolynomial& f) {
  Json out;
  out["M"] = f.dims();
  out["coeff_dim"] = f.coeff_dim();
  out["norm"] = f.coefficient_norm().to_string();
  Json terms = Json::array();
  for (const auto& [nu, coeff] : f.terms()) {
    Json term = complex_parts_to_json(coeff);
    term["freq"] = nu;
    terms.push_back(std::move(term));
  }
  out["terms"] = std::move(terms);
  return out;
}

TorusPolynomial polynomial_from_json(const Json& j) {
  require_key(j, "M", "polynomial");
  require_key(j, "coeff_dim", "polynomial");
  const int dims = j["M"].get<int>();
  const int coeff_dim = j["coeff_dim"].get<int>();
  CoefficientNorm norm;
  if (j.contains("norm")) norm = CoefficientNorm::parse(j["norm"].get<std::string>());
  TorusPolynomial f(dims, coeff_dim, norm);
  if (!j.contains("terms")) return f;
  for (const Json& jt : j["terms"]) {
    require_key(jt, "freq", "polynomial term");
    require_key(jt, "re", "polynomial term");
    MultiIndex nu = jt["freq"].get<MultiIndex>();
    const Json& re = jt["re"];
    const Json* im = jt.contains("im") ? &jt["im"] : nullptr;
    if (static_cast<int>(re.size()) != coeff_dim)
      throw std::invalid_argument("polynomial term: coefficient length mismatch");
    if (im && im->size() != re.size())
      throw std::invalid_argument("polynomial term: im must match re in length");
    cvec coeff(coeff_dim);
    for (int i = 0; i < coeff_dim; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      coeff[i] = complexd(re[idx].get<double>(), im ? (*im)[idx].get<double>() : 0.0);
    }
    f.add_term(std::move(nu), coeff);
  }
  return f;
}

Json decomposition_to_json(const DecompositionResult& res, std::uint64_t seed) {
  Json out;
  out["objective"] = res.objective;
  out["lower_bound"] = res.certificate_lower_bound;
  out["iterations"] = res.iterations;
  out["converged"] = res.converged;
  out["seed"] = seed;
  return out;
}

Json exponent_to_json(double p) {
  if (std::isinf(p)) return Json("inf");
  return Json(p);
}

double exponent_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity")
      return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("exponent: expected a number or \"inf\", got " + s);
  }
  return j.get<double>();
}

Json experiment_config_to_json(const ExperimentConfig& cfg) {
  Json out;
  out["name"] = cfg.name;
  Json dims = Json::array();
  for (auto [d1, d2] : cfg.dims) dims.push_back(Json::array({d1, d2}));
  out["dims"] = std::move(dims);
  out["terms"] = cfg.terms;
  Json exps = Json::array();
  for (double p : cfg.exponents) exps.push_back(exponent_to_json(p));
  out["exponents"] = std::move(exps);
  out["trials"] = cfg.trials;
  out["samples"] = cfg.samples;
  out["seed"] = cfg.seed;
  out["output_path"] = cfg.output_path;
  out["format"] = cfg.format;
  return out;
}

ExperimentConfig experiment_config_from_json(const Json& j,
                                             std::optional<std::uint64_t> default_seed) {
  if (!j.is_object()) throw std::invalid_argument("experiment config: expected an object");
  ExperimentConfig cfg;
  require_key(j, "name", "experiment config");
  cfg.name = j["name"].get<std::string>();
  if (j.contains("dims")) {
    cfg.dims.clear();
    for (const Json& d : j["dims"]) {
      if (!d.is_array() || d.size() != 2)
        throw std::invalid_argument("experiment config: dims entries must be [d1, d2]");
      cfg.dims.emplace_back(d[0].get<int>(), d[1].get<int>());
    }
  }
  if (j.contains("terms")) cfg.terms = j["terms"].get<std::vector<int>>();
  if (j.contains("exponents")) {
    cfg.exponents.clear();
    for (const Json& e : j["exponents"]) cfg.exponents.push_back(exponent_from_json(e));
  }
  if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
  if (j.contains("samples")) cfg.samples = j["samples"].get<std::int64_t>();
  if (j.contains("seed"))
    cfg.seed = j["seed"].get<std::uint64_t>();
  else if (default_seed)
    cfg.seed = *default_seed;
  if (j.contains("output_path")) cfg.output_path = j["output_path"].get<std::string>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  cfg.validate();
  return cfg;
}

namespace {

Json ratio_record_to_json(const RatioRecord& rec) {
  Json out;
  out["instance_id"] = rec.instance_id;
  out["d1"] = rec.d1;
  out["d2"] = rec.d2;
  out["N"] = rec.n_terms;
  out["exponent"] = exponent_to_json(rec.exponent);
  out["randomizer"] = rec.randomizer;
  out["numerator"] = rec.numerator;
  out["denominator"] = rec.denominator;
  out["ratio"] = rec.ratio;
  out["seed"] = rec.seed;
  out["exact"] = rec.exact;
  out["converged"] = rec.converged;
  return out;
}

constexpr const char* kCsvHeader =
    "instance_id,d1,d2,N,exponent,randomizer,numerator,denominator,ratio,seed\n";

void csv_row(std::string& out, const std::string& id, int d1, int d2, int n_terms,
             double exponent, const std::string& randomizer, double numerator,
             double denominator, double ratio, std::uint64_t seed) {
  out += id;
  out += ',';
  out += std::to_string(d1);
  out += ',';
  out += std::to_string(d2);
  out += ',';
  out += std::to_string(n_terms);
  out += ',';
  out += std::isinf(exponent) ? "inf" : format_double(exponent);
  out += ',';
  out += randomizer;
  out += ',';
  out += format_double(numerator);
  out += ',';
  out += format_double(denominator);
  out += ',';
  out += format_double(ratio);
  out += ',';
  out += std::to_string(seed);
  out += '\n';
}

}  // namespace

Json ratio_report_to_json(const RatioReport& report) {
  Json out;
  out["experiment"] = report.experiment;
  out["acceptance_band"] = report.acceptance_band;
  Json records = Json::array();
  for (const RatioRecord& rec : report.records) records.push_back(ratio_record_to_json(rec));
  out["records"] = std::move(records);
  Json summary = Json::array();
  for (const CellSummary& cell : report.summary) {
    Json c;
    c["exponent"] = exponent_to_json(cell.exponent);
    c["d1"] = cell.d1;
    c["d2"] = cell.d2;
    c["N"] = cell.n_terms;
    c["min_ratio"] = cell.min_ratio;
    c["max_ratio"] = cell.max_ratio;
    summary.push_back(std::move(c));
  }
  out["summary"] = std::move(summary);
  return out;
}

std::string ratio_report_to_csv(const RatioReport& report) {
  std::string out = kCsvHeader;
  for (const RatioRecord& rec : report.records)
    csv_row(out, rec.instance_id, rec.d1, rec.d2, rec.n_terms, rec.exponent,
            rec.randomizer, rec.numerator, rec.denominator, rec.ratio, rec.seed);
  return out;
}

Json counterexample_to_json(const CounterexampleReport& report) {
  Json out;
  out["experiment"] = "counterexample";
  out["exponent"] = exponent_to_json(report.exponent);
  out["seed"] = report.seed;
  Json rows = Json::array();
  for (const CounterexampleRow& row : report.rows) {
    Json r;
    r["N"] = row.n_terms;
    r["series_norm"] = row.series_norm;
    r["column_functional"] = row.column_functional;
    r["row_functional"] = row.row_functional;
    r["ratio"] = row.ratio;
    r["closed_form"] = row.closed_form;
    r["patterns_checked"] = row.patterns_checked;
    r["max_pattern_spread"] = row.max_pattern_spread;
    rows.push_back(std::move(r));
  }
  out["rows"] = std::move(rows);
  return out;
}

std::string counterexample_to_csv(const CounterexampleReport& report) {
  std::string out = kCsvHeader;
  for (const CounterexampleRow& row : report.rows)
    csv_row(out, "row_units-" + std::to_string(row.n_terms), 1, row.n_terms, row.n_terms,
            report.exponent, "rademacher", row.series_norm, row.column_functional,
            row.ratio, report.seed);
  return out;
}

Json dichotomy_to_json(const DichotomyReport& report) {
  Json out;
  out["experiment"] = "dichotomy";
  out["samples"] = report.samples;
  out["seed"] = report.seed;
  Json rows = Json::array();
  for (const DichotomyRow& row : report.rows) {
    Json r;
    r["n"] = row.n;
    r["rademacher_value"] = row.rademacher_value;
    r["rademacher_exact"] = row.rademacher_exact;
    r["gaussian"] = estimate_to_json(row.gaussian);
    r["ratio"] = row.ratio;
    rows.push_back(std::move(r));
  }
  out["rows"] = std::move(rows);
  return out;
}

std::string dichotomy_to_csv(const DichotomyReport& report) {
  std::string out = kCsvHeader;
  for (const DichotomyRow& row : report.rows)
    csv_row(out, "linf-" + std::to_string(row.n), 1, row.n, row.n,
            std::numeric_limits<double>::infinity(), "gaussian", row.gaussian.estimate,
            row.rademacher_value, row.ratio, report.seed);
  return out;
}

Json tails_to_json(const TailsReport& report) {
  Json out;
  out["experiment"] = "tails";
  out["seed"] = report.seed;
  Json instances = Json::array();
  for (const TailInstanceReport& inst : report.instances) {
    Json r;
    r["instance_id"] = inst.instance_id;
    r["d1"] = inst.d1;
    r["d2"] = inst.d2;
    r["N"] = inst.n_terms;
    r["exponent"] = exponent_to_json(inst.exponent);
    r["randomizer"] = inst.randomizer;
    Json points = Json::array();
    for (const TailPoint& pt : inst.profile.points) {
      Json p;
      p["t"] = pt.t;
      p["survival"] = pt.survival;
      p["exceedances"] = pt.exceedances;
      p["reliable"] = pt.reliable;
      points.push_back(std::move(p));
    }
    r["points"] = std::move(points);
    r["delta_hat"] = inst.profile.delta_hat;
    r["fit_ok"] = inst.profile.fit_ok;
    r["samples"] = inst.profile.samples;
    if (!inst.oracle_survival.empty()) r["oracle_survival"] = inst.oracle_survival;
    instances.push_back(std::move(r));
  }
  out["instances"] = std::move(instances);
  return out;
}

std::string tails_to_csv(const TailsReport& report) {
  std::string out = kCsvHeader;
  for (const TailInstanceReport& inst : report.instances)
    csv_row(out, inst.instance_id, inst.d1, inst.d2, inst.n_terms, inst.exponent,
            inst.randomizer, inst.profile.delta_hat, 1.0, inst.profile.delta_hat,
            report.seed);
  return out;
}

Json umd_estimate_to_json(const UmdConstantEstimate& est) {
  Json out;
  out["lower_bound"] = est.lower_bound;
  out["numerator"] = est.numerator;
  out["denominator"] = est.denominator;
  out["witness"] = polynomial_to_json(est.witness);
  out["witness_signs"] = est.witness_signs;
  out["trials"] = est.trials;
  out["seed"] = est.seed;
  out["exact"] = est.exact;
  return out;
}

Json type_cotype_to_json(const TypeCotypeResult& res) {
  Json out;
  out["constant"] = res.constant;
  out["space"] = res.space;
  out["direction"] = res.direction;
  out["families"] = res.families;
  out["family_size"] = res.family_size;
  out["best_family"] = res.best_family;
  out["seed"] = res.seed;
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace tracelab
