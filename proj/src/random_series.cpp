// SPDX-License-Identifier: Apache-2.0
#include "tracelab/random_series.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "tracelab/parallel.hpp"
#include "tracelab/rng.hpp"

namespace tracelab {

RandomizerKind parse_randomizer(const std::string& name) {
  if (name == "rademacher") return RandomizerKind::rademacher;
  if (name == "gaussian") return RandomizerKind::gaussian;
  if (name == "steinhaus") return RandomizerKind::steinhaus;
  throw std::invalid_argument("unknown randomizer: " + name);
}

std::string to_string(RandomizerKind kind) {
  switch (kind) {
    case RandomizerKind::rademacher: return "rademacher";
    case RandomizerKind::gaussian: return "gaussian";
    case RandomizerKind::steinhaus: return "steinhaus";
  }
  return "?";
}

namespace {

complexd draw(RandomizerKind kind, SplitMix64& g) {
  switch (kind) {
    case RandomizerKind::rademacher: return complexd(rademacher_sign(g), 0.0);
    case RandomizerKind::gaussian: return complexd(standard_normal(g), 0.0);
    case RandomizerKind::steinhaus: return steinhaus_unit(g);
  }
  return complexd(0.0, 0.0);
}

std::vector<double> sampled_norms(const OperatorSequence& seq, RandomizerKind rnd,
                                  SchattenExponent p, std::int64_t samples,
                                  std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("series sampling: samples >= 1 required");
  const std::size_t n_terms = seq.terms().size();
  std::vector<double> values(static_cast<std::size_t>(samples));
  parallel_for(samples, [&](std::int64_t i) {
    SplitMix64 g(fold(seed, static_cast<std::uint64_t>(i)));
    cmat s = cmat::Zero(seq.rows(), seq.cols());
    for (std::size_t n = 0; n < n_terms; ++n) s += draw(rnd, g) * seq[n];
    values[static_cast<std::size_t>(i)] = schatten_norm(s, p);
  });
  return values;
}

// Puts the term family into a canonical form that is identical for inputs
// differing only by term order or per-term signs: each term is negated so
// its first nonzero entry has positive sign (negation is exact), then the
// family is sorted entrywise. Exhaustive averages over such families take
// identical floating-point paths, so they agree bit for bit.
std::vector<cmat> canonical_terms(const OperatorSequence& seq) {
  std::vector<cmat> terms = seq.terms();
  for (cmat& t : terms) {
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) {
        const complexd v = t(r, c);
        if (v.real() != 0.0 || v.imag() != 0.0) {
          if (v.real() < 0.0 || (v.real() == 0.0 && v.imag() < 0.0)) t = -t;
          r = t.rows();
          break;
        }
      }
    }
  }
  std::sort(terms.begin(), terms.end(), [](const cmat& a, const cmat& b) {
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c) {
        const complexd x = a(r, c), y = b(r, c);
        if (x.real() != y.real()) return x.real() < y.real();
        if (x.imag() != y.imag()) return x.imag() < y.imag();
      }
    return false;
  });
  return terms;
}

// Gray-code walk over half the sign hypercube; the skipped half mirrors it.
std::vector<double> exhaustive_norms(const OperatorSequence& seq, SchattenExponent p) {
  const int n = static_cast<int>(seq.size());
  if (n > 20)
    throw std::invalid_argument(
        "exhaustive enumeration limited to 20 terms, got " + std::to_string(n));
  const std::vector<cmat> terms = canonical_terms(seq);
  const std::uint64_t patterns = n == 1 ? 1 : (1ull << (n - 1));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(patterns));

  cmat s(seq.rows(), seq.cols());
  s.setZero();
  for (const cmat& t : terms) s += t;
  std::vector<double> signs(static_cast<std::size_t>(n), 1.0);
  values.push_back(schatten_norm(s, p));
  for (std::uint64_t i = 1; i < patterns; ++i) {
    // Term 0 stays +1; bit j of the Gray counter drives term j + 1.
    const int j = std::countr_zero(i) + 1;
    const auto ju = static_cast<std::size_t>(j);
    s -= 2.0 * signs[ju] * terms[ju];
    signs[ju] = -signs[ju];
    values.push_back(schatten_norm(s, p));
  }
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace

std::vector<double> series_norm_samples(const OperatorSequence& seq, RandomizerKind rnd,
                                        SchattenExponent p, std::int64_t samples,
                                        std::uint64_t seed, Enumeration mode) {
  const bool exhaustive =
      mode == Enumeration::exhaustive ||
      (mode == Enumeration::automatic && rnd == RandomizerKind::rademacher &&
       seq.size() <= 12);
  if (exhaustive) {
    if (rnd != RandomizerKind::rademacher)
      throw std::invalid_argument("exhaustive enumeration requires Rademacher signs");
    return exhaustive_norms(seq, p);
  }
  return sampled_norms(seq, rnd, p, samples, seed);
}

EstimateReport sample_series_norm(const OperatorSequence& seq, RandomizerKind rnd,
                                  SchattenExponent p, double r, std::int64_t samples,
                                  std::uint64_t seed) {
  const std::vector<double> values = sampled_norms(seq, rnd, p, samples, seed);
  return moment_root_estimate(values, r, seed);
}

EstimateReport exact_rademacher_moment(const OperatorSequence& seq, SchattenExponent p,
                                       double r) {
  const std::vector<double> values = exhaustive_norms(seq, p);
  EstimateReport rep = moment_root_estimate(values, r, 0, /*exact=*/true);
  rep.samples = static_cast<std::int64_t>(1ull << seq.size());
  return rep;
}

double kahane_ratio(const OperatorSequence& seq, RandomizerKind rnd, SchattenExponent p,
                    double r1, double r2, std::int64_t samples, std::uint64_t seed,
                    Enumeration mode) {
  if (!(0.0 < r1 && r1 < r2))
    throw std::invalid_argument("kahane_ratio: need 0 < r1 < r2");
  const std::vector<double> values = series_norm_samples(seq, rnd, p, samples, seed, mode);
  const double lo = moment_root_estimate(values, r1, seed).estimate;
  const double hi = moment_root_estimate(values, r2, seed).estimate;
  if (lo == 0.0) return hi == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return hi / lo;
}

TailProfile tail_profile(const OperatorSequence& seq, RandomizerKind rnd,
                         SchattenExponent p, std::int64_t samples, std::uint64_t seed,
                         const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("tail_profile: empty grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("tail_profile: grid must be strictly increasing");

  const std::vector<double> values = sampled_norms(seq, rnd, p, samples, seed);

  TailProfile prof;
  prof.samples = samples;
  prof.seed = seed;
  prof.points.reserve(t_grid.size());
  for (double t : t_grid) {
    TailPoint pt;
    pt.t = t;
    for (double v : values) pt.exceedances += v > t ? 1 : 0;
    pt.survival = static_cast<double>(pt.exceedances) / static_cast<double>(samples);
    pt.reliable = pt.exceedances >= 10;
    prof.points.push_back(pt);
  }

  // Least-squares slope of -log P over t^2, upper half of the usable points.
  std::vector<const TailPoint*> usable;
  for (const TailPoint& pt : prof.points)
    if (pt.reliable && pt.survival < 1.0) usable.push_back(&pt);
  std::vector<const TailPoint*> fit(usable.begin() + usable.size() / 2, usable.end());
  if (fit.size() < 2) fit = usable;
  if (fit.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (const TailPoint* pt : fit) {
      mx += pt->t * pt->t;
      my += -std::log(pt->survival);
    }
    mx /= static_cast<double>(fit.size());
    my /= static_cast<double>(fit.size());
    double sxx = 0.0, sxy = 0.0;
    for (const TailPoint* pt : fit) {
      const double dx = pt->t * pt->t - mx;
      sxx += dx * dx;
      sxy += dx * (-std::log(pt->survival) - my);
    }
    if (sxx > 0.0) {
      prof.delta_hat = sxy / sxx;
      prof.fit_ok = true;
    }
  }
  return prof;
}

EstimateReport random_sign_matrix_norm(const cmat& a, SchattenExponent q,
                                       std::int64_t samples, std::uint64_t seed) {
  require_finite(a, "random_sign_matrix_norm");
  if (samples < 1)
    throw std::invalid_argument("random_sign_matrix_norm: samples >= 1 required");
  std::vector<double> values(static_cast<std::size_t>(samples));
  parallel_for(samples, [&](std::int64_t i) {
    SplitMix64 g(fold(seed, static_cast<std::uint64_t>(i)));
    cmat s(a.rows(), a.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c) s(r, c) = rademacher_sign(g) * a(r, c);
    values[static_cast<std::size_t>(i)] = schatten_norm(s, q);
  });
  return moment_root_estimate(values, 1.0, seed);
}

double row_column_functional(const cmat& a, SchattenExponent q) {
  require_finite(a, "row_column_functional");
  rvec rows(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) rows[i] = a.row(i).norm();
  rvec cols(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) cols[j] = a.col(j).norm();
  return std::max(lp_norm(rows, q), lp_norm(cols, q));
}

}  // namespace tracelab
