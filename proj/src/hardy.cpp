// SPDX-License-Identifier: Apache-2.0
#include "tracelab/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tracelab/parallel.hpp"

namespace tracelab {

// ---- coefficient spaces ----

double CoefficientNorm::operator()(const cvec& c) const {
  switch (kind) {
    case NormKind::euclidean:
      return c.norm();
    case NormKind::l1:
      return c.cwiseAbs().sum();
    case NormKind::linf:
      return c.size() > 0 ? c.cwiseAbs().maxCoeff() : 0.0;
    case NormKind::schatten: {
      const int d = reshape_dim;
      if (d < 1 || c.size() != static_cast<Eigen::Index>(d) * d)
        throw std::invalid_argument("schatten coefficient norm: size must be d*d");
      cmat m(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = c[i * d + j];
      return schatten_norm(m, SchattenExponent(p));
    }
  }
  return 0.0;
}

namespace {

std::string format_exponent(double p) {
  if (std::isinf(p)) return "inf";
  if (p == std::floor(p) && std::abs(p) < 1e9)
    return std::to_string(static_cast<long long>(p));
  std::string s = std::to_string(p);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

// splits "name(a,b)" into name and raw arguments
void split_call(const std::string& text, std::string& name, std::vector<std::string>& args) {
  args.clear();
  const auto open = text.find('(');
  if (open == std::string::npos) {
    name = text;
    return;
  }
  if (text.back() != ')') throw std::invalid_argument("malformed spec: " + text);
  name = text.substr(0, open);
  std::string inner = text.substr(open + 1, text.size() - open - 2);
  std::size_t pos = 0;
  while (pos <= inner.size() && !inner.empty()) {
    const auto comma = inner.find(',', pos);
    args.push_back(inner.substr(pos, comma == std::string::npos ? comma : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
}

double parse_exponent_text(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

}  // namespace

std::string CoefficientNorm::to_string() const {
  switch (kind) {
    case NormKind::euclidean: return "euclidean";
    case NormKind::l1: return "sum";
    case NormKind::linf: return "max";
    case NormKind::schatten:
      return "schatten(" + format_exponent(p) + "," + std::to_string(reshape_dim) + ")";
  }
  return "?";
}

CoefficientNorm CoefficientNorm::parse(const std::string& text) {
  std::string name;
  std::vector<std::string> args;
  split_call(text, name, args);
  CoefficientNorm out;
  if (name == "euclidean") {
    out.kind = NormKind::euclidean;
  } else if (name == "sum" || name == "l1") {
    out.kind = NormKind::l1;
  } else if (name == "max" || name == "linf") {
    out.kind = NormKind::linf;
  } else if (name == "schatten") {
    out.kind = NormKind::schatten;
    if (args.empty()) throw std::invalid_argument("schatten norm needs an exponent");
    out.p = parse_exponent_text(args[0]);
    if (!(out.p >= 1.0)) throw std::invalid_argument("schatten norm needs p >= 1");
    if (args.size() > 1) out.reshape_dim = std::stoi(args[1]);
  } else {
    throw std::invalid_argument("unknown coefficient norm: " + text);
  }
  return out;
}

std::string SpaceSpec::to_string() const {
  if (norm.kind == NormKind::schatten) return norm.to_string();
  const char* name = norm.kind == NormKind::euclidean ? "euclidean"
                     : norm.kind == NormKind::l1      ? "l1"
                                                      : "linf";
  return std::string(name) + "(" + std::to_string(coeff_dim) + ")";
}

SpaceSpec SpaceSpec::parse(const std::string& text) {
  std::string name;
  std::vector<std::string> args;
  split_call(text, name, args);
  SpaceSpec out;
  if (name == "schatten") {
    if (args.size() != 2)
      throw std::invalid_argument("schatten space needs (p, d): " + text);
    out.norm.kind = NormKind::schatten;
    out.norm.p = parse_exponent_text(args[0]);
    if (!(out.norm.p >= 1.0)) throw std::invalid_argument("schatten space needs p >= 1");
    out.norm.reshape_dim = std::stoi(args[1]);
    if (out.norm.reshape_dim < 1)
      throw std::invalid_argument("schatten space needs d >= 1");
    out.coeff_dim = out.norm.reshape_dim * out.norm.reshape_dim;
    return out;
  }
  if (args.size() != 1)
    throw std::invalid_argument("space spec needs a dimension: " + text);
  out.coeff_dim = std::stoi(args[0]);
  if (out.coeff_dim < 1) throw std::invalid_argument("space dimension must be positive");
  if (name == "euclidean")
    out.norm.kind = NormKind::euclidean;
  else if (name == "l1" || name == "sum")
    out.norm.kind = NormKind::l1;
  else if (name == "linf" || name == "max")
    out.norm.kind = NormKind::linf;
  else
    throw std::invalid_argument("unknown space spec: " + text);
  return out;
}

// ---- torus polynomials ----

MultiIndex canonical_index(MultiIndex nu) {
  while (!nu.empty() && nu.back() == 0) nu.pop_back();
  return nu;
}

SignVector::SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_)
    if (s != 1 && s != -1)
      throw std::invalid_argument("SignVector: entries must be +1 or -1");
}

TorusPolynomial::TorusPolynomial(int dims, int coeff_dim, CoefficientNorm norm)
    : dims_(dims), coeff_dim_(coeff_dim), norm_(norm) {
  if (dims < 1) throw std::invalid_argument("TorusPolynomial: dims >= 1 required");
  if (coeff_dim < 1)
    throw std::invalid_argument("TorusPolynomial: coeff_dim >= 1 required");
  if (norm_.kind == NormKind::schatten) {
    int d = norm_.reshape_dim;
    if (d < 1) d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(coeff_dim))));
    if (d * d != coeff_dim)
      throw std::invalid_argument(
          "TorusPolynomial: schatten coefficients need a square coeff_dim");
    if (!(norm_.p >= 1.0))
      throw std::invalid_argument("TorusPolynomial: schatten norm needs p >= 1");
    norm_.reshape_dim = d;
  }
}

void TorusPolynomial::add_term(MultiIndex freq, const cvec& coeff) {
  if (coeff.size() != coeff_dim_)
    throw std::invalid_argument("TorusPolynomial: coefficient dimension mismatch");
  require_finite(coeff, "TorusPolynomial");
  MultiIndex nu = canonical_index(std::move(freq));
  if (static_cast<int>(nu.size()) > dims_)
    throw std::invalid_argument("TorusPolynomial: frequency beyond torus truncation");
  auto it = terms_.find(nu);
  if (it == terms_.end()) {
    terms_.emplace(std::move(nu), coeff);
  } else {
    it->second += coeff;
    if (it->second.isZero(0.0)) terms_.erase(it);
  }
}

cvec TorusPolynomial::evaluate(const rvec& angles) const {
  if (angles.size() != dims_)
    throw std::invalid_argument("TorusPolynomial: one angle per coordinate required");
  cvec out = cvec::Zero(coeff_dim_);
  for (const auto& [nu, coeff] : terms_) {
    double phase = 0.0;
    for (std::size_t k = 0; k < nu.size(); ++k)
      phase += nu[k] * angles[static_cast<Eigen::Index>(k)];
    out += complexd(std::cos(phase), std::sin(phase)) * coeff;
  }
  return out;
}

double TorusPolynomial::coefficient_l2_squared() const {
  double acc = 0.0;
  for (const auto& [nu, coeff] : terms_) acc += coeff.squaredNorm();
  return acc;
}

int TorusPolynomial::max_level() const {
  int top = -1;
  for (const auto& [nu, coeff] : terms_) top = std::max(top, top_active(nu));
  return top;
}

TorusPolynomial& TorusPolynomial::operator+=(const TorusPolynomial& other) {
  if (other.dims_ > dims_ || other.coeff_dim_ != coeff_dim_)
    throw std::invalid_argument("TorusPolynomial: incompatible addition");
  for (const auto& [nu, coeff] : other.terms_) add_term(nu, coeff);
  return *this;
}

TorusPolynomial TorusPolynomial::scaled(complexd factor) const {
  TorusPolynomial out(dims_, coeff_dim_, norm_);
  if (factor == complexd(0.0, 0.0)) return out;
  for (const auto& [nu, coeff] : terms_) out.add_term(nu, factor * coeff);
  return out;
}

TorusPolynomial TorusPolynomial::phase_shifted(int coordinate, int delta) const {
  if (coordinate < 0 || coordinate >= dims_)
    throw std::invalid_argument("TorusPolynomial: coordinate out of range");
  TorusPolynomial out(dims_, coeff_dim_, norm_);
  for (const auto& [nu, coeff] : terms_) {
    MultiIndex shifted = nu;
    if (static_cast<int>(shifted.size()) <= coordinate)
      shifted.resize(static_cast<std::size_t>(coordinate) + 1, 0);
    shifted[static_cast<std::size_t>(coordinate)] += delta;
    out.add_term(std::move(shifted), coeff);
  }
  return out;
}

TorusPolynomial conditional_expectation(const TorusPolynomial& f, int n) {
  if (n < -1)
    throw std::invalid_argument("conditional_expectation: level must be >= -1");
  TorusPolynomial out(f.dims(), f.coeff_dim(), f.coefficient_norm());
  for (const auto& [nu, coeff] : f.terms())
    if (top_active(nu) <= n) out.add_term(nu, coeff);
  return out;
}

bool is_hardy(const TorusPolynomial& f) {
  for (const auto& [nu, coeff] : f.terms())
    if (!nu.empty() && nu.back() <= 0) return false;
  return true;
}

std::vector<TorusPolynomial> martingale_differences(const TorusPolynomial& f) {
  std::vector<TorusPolynomial> diffs(
      static_cast<std::size_t>(f.dims()),
      TorusPolynomial(f.dims(), f.coeff_dim(), f.coefficient_norm()));
  for (const auto& [nu, coeff] : f.terms()) {
    const int level = top_active(nu);
    if (level >= 0) diffs[static_cast<std::size_t>(level)].add_term(nu, coeff);
  }
  return diffs;
}

EstimateReport l2_norm(const TorusPolynomial& f, std::int64_t quadrature_samples,
                       std::uint64_t seed) {
  if (f.coefficient_norm().kind == NormKind::euclidean) {
    EstimateReport rep;
    rep.estimate = std::sqrt(f.coefficient_l2_squared());
    rep.ci95_low = rep.ci95_high = rep.estimate;
    rep.samples = 0;
    rep.seed = seed;
    rep.exact = true;
    return rep;
  }
  return l2_norm_mc(f, quadrature_samples, seed);
}

EstimateReport l2_norm_mc(const TorusPolynomial& f, std::int64_t quadrature_samples,
                          std::uint64_t seed) {
  if (quadrature_samples < 1)
    throw std::invalid_argument("l2_norm_mc: samples >= 1 required");
  const CoefficientNorm& norm = f.coefficient_norm();
  std::vector<double> values(static_cast<std::size_t>(quadrature_samples));
  parallel_for(quadrature_samples, [&](std::int64_t i) {
    SplitMix64 g(fold(seed, static_cast<std::uint64_t>(i)));
    rvec angles(f.dims());
    for (Eigen::Index k = 0; k < angles.size(); ++k)
      angles[k] = 2.0 * M_PI * g.next_double();
    values[static_cast<std::size_t>(i)] = norm(f.evaluate(angles));
  });
  return moment_root_estimate(values, 2.0, seed);
}

double l2_norm_grid(const TorusPolynomial& f, int points_per_dim) {
  if (points_per_dim < 1)
    throw std::invalid_argument("l2_norm_grid: points_per_dim >= 1 required");
  double total = 1.0;
  for (int k = 0; k < f.dims(); ++k) total *= points_per_dim;
  if (total > 5e7) throw std::invalid_argument("l2_norm_grid: grid too large");

  const CoefficientNorm& norm = f.coefficient_norm();
  std::vector<int> idx(static_cast<std::size_t>(f.dims()), 0);
  rvec angles(f.dims());
  double acc = 0.0;
  std::int64_t count = 0;
  for (;;) {
    for (Eigen::Index k = 0; k < angles.size(); ++k)
      angles[k] = 2.0 * M_PI * idx[static_cast<std::size_t>(k)] / points_per_dim;
    const double v = norm(f.evaluate(angles));
    acc += v * v;
    ++count;
    int k = 0;
    while (k < f.dims() && ++idx[static_cast<std::size_t>(k)] == points_per_dim) {
      idx[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == f.dims()) break;
  }
  return std::sqrt(acc / static_cast<double>(count));
}

TorusPolynomial umd_transform(const TorusPolynomial& f, const SignVector& signs,
                              bool rotated, bool include_level_zero) {
  const std::vector<TorusPolynomial> diffs = martingale_differences(f);
  TorusPolynomial out(f.dims(), f.coeff_dim(), f.coefficient_norm());
  const int start = include_level_zero ? 0 : 1;
  for (int n = start; n < f.dims(); ++n) {
    const TorusPolynomial& d = diffs[static_cast<std::size_t>(n)];
    if (d.is_zero()) continue;
    TorusPolynomial term = rotated ? d.phase_shifted(n, -1) : d;
    const int sign = n == 0 ? 1 : signs.at(n);
    out += term.scaled(complexd(static_cast<double>(sign), 0.0));
  }
  return out;
}

EstimateReport umd_transform_norm(const TorusPolynomial& f, const SignVector& signs,
                                  bool rotated, std::int64_t quadrature_samples,
                                  std::uint64_t seed, bool include_level_zero) {
  if (!is_hardy(f))
    throw std::invalid_argument("umd_transform_norm: input must be a Hardy polynomial");
  return l2_norm(umd_transform(f, signs, rotated, include_level_zero),
                 quadrature_samples, seed);
}

TorusPolynomial random_torus_polynomial(int dims, int degree, const SpaceSpec& space,
                                        SplitMix64& g, int terms_per_level,
                                        bool hardy_only, bool include_level_zero) {
  if (terms_per_level < 1)
    throw std::invalid_argument("random_torus_polynomial: terms_per_level >= 1");
  TorusPolynomial f(dims, space.coeff_dim, space.norm);
  if (degree < 1) {
    f.add_term({}, complex_gaussian_vector(space.coeff_dim, g));
    return f;
  }
  const int start = include_level_zero ? 0 : 1;
  const auto span = static_cast<std::uint64_t>(2 * degree + 1);
  for (int level = start; level < dims; ++level) {
    for (int j = 0; j < terms_per_level; ++j) {
      MultiIndex nu(static_cast<std::size_t>(level) + 1, 0);
      int top = 1 + static_cast<int>(g.next() % static_cast<std::uint64_t>(degree));
      if (!hardy_only && (g.next() & 1)) top = -top;
      nu[static_cast<std::size_t>(level)] = top;
      for (int k = 0; k < level; ++k)
        nu[static_cast<std::size_t>(k)] = static_cast<int>(g.next() % span) - degree;
      f.add_term(std::move(nu), complex_gaussian_vector(space.coeff_dim, g));
    }
  }
  return f;
}

namespace {

double sign_ratio(const TorusPolynomial& f, const std::vector<int>& signs, double den,
                  std::int64_t quadrature_samples, std::uint64_t eval_seed) {
  return umd_transform_norm(f, SignVector(signs), false, quadrature_samples, eval_seed)
             .estimate /
         den;
}

}  // namespace

UmdConstantEstimate estimate_analytic_umd_constant(const SpaceSpec& space, int degree,
                                                   int trials, int sign_search_budget,
                                                   std::uint64_t seed, int levels,
                                                   std::int64_t quadrature_samples) {
  if (trials < 1)
    throw std::invalid_argument("estimate_analytic_umd_constant: trials >= 1");
  if (sign_search_budget < 1)
    throw std::invalid_argument("estimate_analytic_umd_constant: budget >= 1");
  const int dims = levels > 0 ? levels : std::max(2, degree + 1);
  const int n_signs = dims - 1;

  UmdConstantEstimate best;
  best.trials = trials;
  best.seed = seed;
  best.exact = space.norm.kind == NormKind::euclidean;

  for (int trial = 0; trial < trials; ++trial) {
    SplitMix64 g(fold(fold(seed, "umd-trial"), static_cast<std::uint64_t>(trial)));
    const TorusPolynomial f = random_torus_polynomial(
        dims, degree, space, g, 2, /*hardy_only=*/true, /*include_level_zero=*/false);
    if (f.is_zero()) continue;
    const std::uint64_t den_seed = fold(fold(seed, "umd-den"), static_cast<std::uint64_t>(trial));
    const std::uint64_t num_seed = fold(fold(seed, "umd-num"), static_cast<std::uint64_t>(trial));
    const double den = l2_norm(f, quadrature_samples, den_seed).estimate;
    if (!(den > 0.0)) continue;

    auto eval = [&](const std::vector<int>& signs) {
      return sign_ratio(f, signs, den, quadrature_samples, num_seed);
    };

    std::vector<int> signs(static_cast<std::size_t>(n_signs), 1);
    double trial_best = eval(signs);
    std::vector<int> trial_signs = signs;

    // exhaustive only for small level counts, greedy flips beyond that
    const bool exhaustive =
        n_signs <= 1 || (n_signs <= 11 &&
                         (1ull << (n_signs - 1)) <= static_cast<std::uint64_t>(sign_search_budget));
    if (exhaustive) {
      // first sign pinned to +1; a global flip leaves the norm unchanged
      const std::uint64_t combos = n_signs <= 1 ? 1 : (1ull << (n_signs - 1));
      for (std::uint64_t mask = 1; mask < combos; ++mask) {
        for (int b = 0; b + 1 < n_signs; ++b)
          signs[static_cast<std::size_t>(b) + 1] = (mask >> b) & 1 ? -1 : 1;
        const double v = eval(signs);
        if (v > trial_best) {
          trial_best = v;
          trial_signs = signs;
        }
      }
    } else {
      int budget = sign_search_budget - 1;
      signs = trial_signs;
      bool fresh_start = false;
      while (budget > 0) {
        bool improved = false;
        for (int i = 0; i < n_signs && budget > 0; ++i) {
          signs[static_cast<std::size_t>(i)] *= -1;
          const double v = eval(signs);
          --budget;
          if (v > trial_best) {
            trial_best = v;
            trial_signs = signs;
            improved = true;
          } else {
            signs[static_cast<std::size_t>(i)] *= -1;
          }
        }
        if (!improved || fresh_start) {
          if (budget <= 0) break;
          for (int i = 0; i < n_signs; ++i)
            signs[static_cast<std::size_t>(i)] = (g.next() >> 63) ? 1 : -1;
          const double v = eval(signs);
          --budget;
          fresh_start = false;
          if (v > trial_best) {
            trial_best = v;
            trial_signs = signs;
          } else {
            signs = trial_signs;
          }
        }
      }
    }

    if (trial_best > best.lower_bound) {
      best.lower_bound = trial_best;
      best.numerator = trial_best * den;
      best.denominator = den;
      best.witness = f;
      best.witness_signs = trial_signs;
    }
  }
  return best;
}

}  // namespace tracelab
