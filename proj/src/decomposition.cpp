// SPDX-License-Identifier: Apache-2.0
#include "tracelab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tracelab/rng.hpp"

namespace tracelab {

namespace {

struct StackShape {
  Eigen::Index n, d1, d2;
};

// The two stackings are Frobenius-isometric rearrangements of the same
// variables; block k of the tall layout becomes block k of the wide one.
cmat vs_to_hs(const cmat& v, const StackShape& sh) {
  cmat h(sh.d1, sh.n * sh.d2);
  for (Eigen::Index k = 0; k < sh.n; ++k)
    h.middleCols(k * sh.d2, sh.d2) = v.middleRows(k * sh.d1, sh.d1);
  return h;
}

cmat hs_to_vs(const cmat& h, const StackShape& sh) {
  cmat v(sh.n * sh.d1, sh.d2);
  for (Eigen::Index k = 0; k < sh.n; ++k)
    v.middleRows(k * sh.d1, sh.d1) = h.middleCols(k * sh.d2, sh.d2);
  return v;
}

double stack_objective(const cmat& yv, const cmat& xv, const StackShape& sh,
                       SchattenExponent p) {
  return schatten_norm(yv, p) + schatten_norm(vs_to_hs(xv - yv, sh), p);
}

double stacked_chi(const cmat& av, const StackShape& sh, SchattenExponent q) {
  return std::max(schatten_norm(av, q), schatten_norm(vs_to_hs(av, sh), q));
}

// Weak duality: |Re<a, x>| <= chi_q(a) * objective(any split of x).
double stacked_pairing_bound(const cmat& av, const cmat& xv, const StackShape& sh,
                             SchattenExponent q) {
  const double chi = stacked_chi(av, sh, q);
  if (chi <= 0.0) return 0.0;
  const double pairing = std::abs(av.conjugate().cwiseProduct(xv).sum().real());
  return pairing / chi;
}

// A subgradient of ||.||_{C_p} at m, with dual norm at most 1. Near an
// optimal split the subgradients taken at the two stack norms nearly agree,
// so they certify the objective much faster than the splitting residue.
cmat schatten_subgradient(const cmat& m, SchattenExponent p) {
  auto f = svd(m);
  const rvec& s = f.spectrum.values;
  const double top = s.size() > 0 ? s.maxCoeff() : 0.0;
  rvec w = rvec::Zero(s.size());
  if (top <= 0.0) return cmat::Zero(m.rows(), m.cols());
  if (p.is_inf()) {
    w[0] = 1.0;
  } else if (p.value() == 1.0) {
    for (Eigen::Index i = 0; i < s.size(); ++i) w[i] = s[i] > 1e-12 * top ? 1.0 : 0.0;
  } else {
    const double np = lp_norm(s, p);
    for (Eigen::Index i = 0; i < s.size(); ++i)
      w[i] = std::pow(s[i] / np, p.value() - 1.0);
  }
  return f.u * w.cast<complexd>().asDiagonal() * f.vh;
}

rvec project_l1_ball(const rvec& w) {
  if (w.cwiseAbs().sum() <= 1.0) return w;
  std::vector<double> a(static_cast<std::size_t>(w.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i)
    a[static_cast<std::size_t>(i)] = std::abs(w[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cum += a[i];
    const double cand = (cum - 1.0) / static_cast<double>(i + 1);
    if (a[i] > cand)
      tau = cand;
    else
      break;
  }
  rvec out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double m = std::max(std::abs(w[i]) - tau, 0.0);
    out[i] = w[i] < 0.0 ? -m : m;
  }
  return out;
}

// Solves u + mu * u^{q-1} = target on [0, target], the stationarity condition
// of the per-component ball-projection subproblem. Bracketed Newton.
double projection_component(double target, double mu, double q) {
  if (target <= 0.0 || mu <= 0.0) return std::max(target, 0.0);
  double lo = 0.0, hi = target;
  double u = target / (1.0 + mu * std::pow(target, q - 2.0));
  if (!(u > lo && u < hi)) u = 0.5 * target;
  for (int it = 0; it < 100; ++it) {
    const double h = u + mu * std::pow(u, q - 1.0) - target;
    if (h > 0.0)
      hi = u;
    else
      lo = u;
    const double dh = 1.0 + mu * (q - 1.0) * std::pow(u, q - 2.0);
    double next = u - h / dh;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-15 * target) return next;
    u = next;
  }
  return u;
}

}  // namespace

rvec project_lq_ball(const rvec& w, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("project_lq_ball: q >= 1 required");
  if (q == 1.0) return project_l1_ball(w);
  if (std::isinf(q)) return w.cwiseMax(-1.0).cwiseMin(1.0);
  if (q == 2.0) {
    const double n = w.norm();
    return n <= 1.0 ? w : rvec(w / n);
  }
  const rvec a = w.cwiseAbs();
  if (lp_norm(a, q) <= 1.0) return w;

  auto power_sum = [&](double mu, double* dpsi) {
    double acc = 0.0, dacc = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double u = projection_component(a[i], mu, q);
      if (u > 0.0) {
        acc += std::pow(u, q);
        // du/dmu = -u^{q-1} / (1 + mu (q-1) u^{q-2})
        const double du = -std::pow(u, q - 1.0) /
                          (1.0 + mu * (q - 1.0) * std::pow(u, q - 2.0));
        dacc += q * std::pow(u, q - 1.0) * du;
      }
    }
    if (dpsi) *dpsi = dacc;
    return acc - 1.0;
  };

  double lo = 0.0, hi = 1.0;
  while (power_sum(hi, nullptr) > 0.0 && hi < 1e100) {
    lo = hi;
    hi *= 4.0;
  }
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double dpsi = 0.0;
    const double psi = power_sum(mu, &dpsi);
    if (psi > 0.0)
      lo = mu;
    else
      hi = mu;
    double next = dpsi < 0.0 ? mu - psi / dpsi : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - mu) <= 1e-15 * std::max(1.0, mu)) {
      mu = next;
      break;
    }
    mu = next;
  }

  rvec out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double u = projection_component(a[i], mu, q);
    out[i] = w[i] < 0.0 ? -u : u;
  }
  return out;
}

rvec prox_lp_norm(const rvec& v, SchattenExponent p, double t) {
  if (t <= 0.0) return v;
  if (p.is_inf()) return v - t * project_lq_ball(rvec(v / t), 1.0);
  const double pp = p.value();
  if (pp == 1.0) {
    rvec out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double m = std::max(std::abs(v[i]) - t, 0.0);
      out[i] = v[i] < 0.0 ? -m : m;
    }
    return out;
  }
  if (pp == 2.0) {
    const double n = v.norm();
    if (n <= t) return rvec::Zero(v.size());
    return v * (1.0 - t / n);
  }
  const double q = pp / (pp - 1.0);
  rvec w = v / t;
  if (lp_norm(w, q) <= 1.0) return rvec::Zero(v.size());
  return v - t * project_lq_ball(w, q);
}

cmat schatten_prox(const cmat& m, SchattenExponent p, double t) {
  if (t <= 0.0) return m;
  auto f = svd(m);
  const rvec s = prox_lp_norm(f.spectrum.values, p, t);
  return f.u * s.cast<complexd>().asDiagonal() * f.vh;
}

double decomposition_objective(const OperatorSequence& y, const OperatorSequence& z,
                               SchattenExponent p) {
  if (y.size() != z.size() || y.rows() != z.rows() || y.cols() != z.cols())
    throw std::invalid_argument("decomposition_objective: shape mismatch");
  return schatten_norm(vstack(y), p) + schatten_norm(hstack(z), p);
}

double pairing_lower_bound(const OperatorSequence& x, SchattenExponent p,
                           const OperatorSequence& witness) {
  if (witness.size() != x.size() || witness.rows() != x.rows() ||
      witness.cols() != x.cols())
    throw std::invalid_argument("pairing_lower_bound: witness shape mismatch");
  const double chi = chi_norm(witness, p.dual());
  if (chi <= 0.0)
    throw std::invalid_argument("pairing_lower_bound: witness must be nonzero");
  complexd acc(0.0, 0.0);
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const auto nu = static_cast<std::size_t>(n);
    acc += witness[nu].conjugate().cwiseProduct(x[nu]).sum();
  }
  return std::abs(acc.real()) / chi;
}

DecompositionResult triple_norm(const OperatorSequence& x, SchattenExponent p,
                                const SolverConfig& cfg) {
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("triple_norm: max_iterations >= 1 required");
  if (!(cfg.tolerance > 0.0))
    throw std::invalid_argument("triple_norm: tolerance must be positive");
  if (!(cfg.step_size > 0.0))
    throw std::invalid_argument("triple_norm: step_size must be positive");
  if (cfg.restart_count < 0)
    throw std::invalid_argument("triple_norm: restart_count must be nonnegative");

  const StackShape sh{x.size(), x.rows(), x.cols()};
  const SchattenExponent q = p.dual();
  const cmat xv = vstack(x);
  const double scale = xv.norm();

  auto finish = [&](const cmat& yv, double objective, int iters, double resid,
                    double lb, bool conv) {
    std::vector<cmat> yt, zt;
    yt.reserve(static_cast<std::size_t>(sh.n));
    zt.reserve(static_cast<std::size_t>(sh.n));
    for (Eigen::Index k = 0; k < sh.n; ++k) {
      yt.push_back(yv.middleRows(k * sh.d1, sh.d1));
      zt.push_back(x[static_cast<std::size_t>(k)] - yt.back());
    }
    return DecompositionResult{OperatorSequence(std::move(yt)),
                               OperatorSequence(std::move(zt)),
                               objective,
                               iters,
                               resid,
                               std::min(lb, objective),
                               conv,
                               p.value() <= 2.0};
  };

  if (scale == 0.0)
    return finish(cmat::Zero(sh.n * sh.d1, sh.d2), 0.0, 0, 0.0, 0.0, true);

  // Work on x / ||x||_F; positive homogeneity maps everything back.
  const cmat xn = xv / scale;
  const double base_step = 2.5 * cfg.step_size;

  // Pure splits are feasible and bound the infimum from above.
  double best_obj = schatten_norm(xn, p);
  cmat best_y = xn;
  double best_resid = 0.0;
  {
    const double pure_z = schatten_norm(vs_to_hs(xn, sh), p);
    if (pure_z < best_obj) {
      best_obj = pure_z;
      best_y = cmat::Zero(xn.rows(), xn.cols());
    }
  }

  double best_lb = 0.0;
  int total_iters = 0;
  bool converged = false;
  constexpr int check_every = 5;

  auto consider = [&](const cmat& y, const cmat& nu, double resid) {
    const double obj = stack_objective(y, xn, sh, p);
    if (obj < best_obj) {
      best_obj = obj;
      best_y = y;
      best_resid = resid;
    }
    best_lb = std::max(best_lb, stacked_pairing_bound(nu, xn, sh, q));
    const cmat wy = schatten_subgradient(y, p);
    const cmat wz = hs_to_vs(schatten_subgradient(vs_to_hs(xn - y, sh), p), sh);
    best_lb = std::max(best_lb, stacked_pairing_bound(wy, xn, sh, q));
    best_lb = std::max(best_lb, stacked_pairing_bound(wz, xn, sh, q));
    best_lb = std::max(best_lb, stacked_pairing_bound(cmat(0.5 * (wy + wz)), xn, sh, q));
    converged = best_obj - best_lb <= cfg.tolerance * std::max(best_obj, 1e-30);
  };

  // Hill climb on the dual ratio |<a, x>| / chi_q(a): push the witness
  // toward x and renormalize, keeping the best bound seen.
  auto polish_witness = [&](cmat a) {
    double chi = stacked_chi(a, sh, q);
    if (chi <= 0.0) return;
    a /= chi;
    double bound = std::abs(a.conjugate().cwiseProduct(xn).sum().real());
    double eta = 0.25;
    for (int it = 0; it < 40 && eta > 1e-7; ++it) {
      cmat cand = a + eta * xn;
      const double c = stacked_chi(cand, sh, q);
      if (c > 0.0) {
        cand /= c;
        const double b = std::abs(cand.conjugate().cwiseProduct(xn).sum().real());
        if (b > bound) {
          bound = b;
          a = std::move(cand);
          continue;
        }
      }
      eta *= 0.5;
    }
    best_lb = std::max(best_lb, bound);
    converged = best_obj - best_lb <= cfg.tolerance * std::max(best_obj, 1e-30);
  };

  for (int restart = 0; restart <= cfg.restart_count && !converged; ++restart) {
    cmat s = 0.5 * xn;
    if (restart > 0) {
      SplitMix64 g(fold(cfg.seed, static_cast<std::uint64_t>(restart)));
      s += 0.35 / std::sqrt(static_cast<double>(s.size())) *
           complex_gaussian_matrix(s.rows(), s.cols(), g);
    }
    // restarts climb a step ladder; slow certifications usually just need a
    // larger proximal step
    const double step = base_step * std::pow(4.0, restart);
    cmat y, nu, u;
    double resid = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cfg.max_iterations; ++k) {
      ++total_iters;
      y = schatten_prox(s, p, step);
      nu = (s - y) / step;  // subgradient of ||.||_{C_p} at y, the dual witness
      u = xn - hs_to_vs(schatten_prox(vs_to_hs(xn - (2.0 * y - s), sh), p, step), sh);
      s += u - y;
      resid = (u - y).norm();
      if (k % check_every == 0) {
        consider(y, nu, resid);
        if (converged) break;
      }
    }
    if (!converged && y.size() > 0) consider(y, nu, resid);
    if (!converged && y.size() > 0) {
      polish_witness(nu);
      if (!converged) {
        const cmat wy = schatten_subgradient(best_y, p);
        const cmat wz = hs_to_vs(schatten_subgradient(vs_to_hs(xn - best_y, sh), p), sh);
        polish_witness(0.5 * (wy + wz));
      }
    }
  }

  return finish(scale * best_y, scale * best_obj, total_iters, scale * best_resid,
                scale * best_lb, converged);
}

double triple_norm_oracle(const OperatorSequence& x, SchattenExponent p,
                          int resolution) {
  if (x.size() > 2 || x.rows() > 2 || x.cols() > 2)
    throw std::invalid_argument(
        "triple_norm_oracle: limited to 2 terms of at most 2x2");
  if (resolution < 1)
    throw std::invalid_argument("triple_norm_oracle: resolution >= 1 required");

  const StackShape sh{x.size(), x.rows(), x.cols()};
  const cmat xv = vstack(x);
  const Eigen::Index m = 2 * xv.size();  // real degrees of freedom
  const double scale = std::max(xv.norm(), 1e-12);

  auto unpack = [&](const rvec& theta) {
    cmat yv(xv.rows(), xv.cols());
    Eigen::Index idx = 0;
    for (Eigen::Index c = 0; c < yv.cols(); ++c)
      for (Eigen::Index r = 0; r < yv.rows(); ++r) {
        yv(r, c) = complexd(theta[idx], theta[idx + 1]);
        idx += 2;
      }
    return yv;
  };
  auto pack = [&](const cmat& yv) {
    rvec theta(m);
    Eigen::Index idx = 0;
    for (Eigen::Index c = 0; c < yv.cols(); ++c)
      for (Eigen::Index r = 0; r < yv.rows(); ++r) {
        theta[idx] = yv(r, c).real();
        theta[idx + 1] = yv(r, c).imag();
        idx += 2;
      }
    return theta;
  };
  auto objective = [&](const rvec& theta) {
    return stack_objective(unpack(theta), xv, sh, p);
  };

  std::vector<rvec> starts;
  starts.push_back(pack(0.5 * xv));
  starts.push_back(rvec::Zero(m));
  starts.push_back(pack(xv));
  SplitMix64 g(fold(0x6f7261636c65ull, static_cast<std::uint64_t>(resolution)));
  for (int i = 0; i < resolution; ++i) {
    rvec theta(m);
    for (Eigen::Index j = 0; j < m; ++j)
      theta[j] = 0.7 * scale / std::sqrt(static_cast<double>(m)) * standard_normal(g);
    starts.push_back(theta);
  }

  double best = std::numeric_limits<double>::infinity();
  for (const rvec& start : starts) {
    rvec theta = start;
    double f = objective(theta);
    double step = 0.5 * scale;
    while (step > 1e-7 * scale) {
      bool improved = false;
      for (Eigen::Index i = 0; i < m; ++i) {
        for (double sign : {1.0, -1.0}) {
          rvec cand = theta;
          cand[i] += sign * step;
          const double fc = objective(cand);
          if (fc < f - 1e-15) {
            theta = cand;
            f = fc;
            improved = true;
          }
        }
      }
      if (!improved) {
        // a few random directions guard against axis-aligned stalls
        for (int d = 0; d < 8 && !improved; ++d) {
          rvec dir(m);
          for (Eigen::Index j = 0; j < m; ++j) dir[j] = standard_normal(g);
          dir.normalize();
          const rvec cand = theta + step * dir;
          const double fc = objective(cand);
          if (fc < f - 1e-15) {
            theta = cand;
            f = fc;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::min(best, f);
  }
  return best;
}

}  // namespace tracelab
