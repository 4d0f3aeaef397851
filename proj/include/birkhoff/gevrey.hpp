#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "birkhoff/hamiltonian.hpp"
#include "birkhoff/lie.hpp"

namespace birkhoff {

/// Majorant-norm parameters: ball radius r, Gevrey width s, Sobolev weight
/// p >= 1/2 and sub-analytic exponent theta in (0,1).
struct GevreyParams {
  double r;
  double s;
  double p = 0.5;
  double theta = 0.5;

  GevreyParams(double r_, double s_, double p_ = 0.5, double theta_ = 0.5)
      : r(r_), s(s_), p(p_), theta(theta_) {
    if (!(r > 0)) fail(Errc::domain, "r must be positive");
    if (!(s >= 0)) fail(Errc::domain, "s must be non-negative");
    if (!(p >= 0.5)) fail(Errc::domain, "p must be >= 1/2");
    if (!(theta > 0 && theta < 1)) fail(Errc::domain, "theta must lie in (0,1)");
  }
  GevreyParams with_r(double r2) const { return {r2, s, p, theta}; }
  GevreyParams with_s(double s2) const { return {r, s2, p, theta}; }
};

/// sum_i <i>^theta (alpha_i + beta_i) - 2 <j>^theta; the Gevrey smoothing
/// exponent. Non-negative on momentum-zero keys with alpha_j + beta_j != 0.
double smoothing_gap(Site j, const MultiIndex& alpha, const MultiIndex& beta, double theta);

/// log of the field weight
///   c^{(j)}_{r,s} = r^{|a|+|b|-2} (<j>^2 / prod_i <i>^{a_i+b_i})^p
///                   exp(-s (sum_i <i>^theta (a_i+b_i) - 2 <j>^theta)).
/// Requires alpha_j + beta_j != 0.
double gevrey_log_weight(Site j, const MultiIndex& alpha, const MultiIndex& beta,
                         const GevreyParams& params);

inline double gevrey_weight(Site j, const MultiIndex& alpha, const MultiIndex& beta,
                            const GevreyParams& params) {
  return std::exp(gevrey_log_weight(j, alpha, beta, params));
}

using SiteMap = std::map<Site, double>;

/// Exact sup over the non-negative unit sphere of the Euclidean length of a
/// single monomial's majorant field, by multiplicative-weights ascent over
/// the simplex t_i = y_i^2 (several starts, relative tolerance 1e-10).
double monomial_norm(const MonomialKey& key, double abs_coeff, const GevreyParams& params);

namespace detail {

// shared core: per-site field weights w_j = |c| (v_j / 2) c^{(j)}
struct MonomialField {
  std::vector<Site> sites;
  std::vector<int> v;          // exponents of alpha + beta on `sites`
  std::vector<double> w;
  int total = 0;
};

MonomialField monomial_field(const MonomialKey& key, double abs_coeff, const GevreyParams& params);
double monomial_norm_core(const MonomialField& f);

}  // namespace detail

/// Componentwise majorant field Y_H(y) on a finitely supported non-negative y.
template <class C>
SiteMap majorant_field(const Hamiltonian<C>& h, const SiteMap& y, const GevreyParams& params) {
  for (const auto& [site, val] : y)
    if (val < 0) fail(Errc::domain, "majorant field needs y >= 0");
  SiteMap out;
  for (const auto& [key, c] : h.terms()) {
    const double mult = key.diagonal() ? 1.0 : 2.0;  // implied conjugate orientation
    const double ac = scalar_traits<C>::abs_double(c);
    if (ac == 0) continue;
    MultiIndex v = key.alpha.plus(key.beta);
    for (const auto& [j, vj] : v.entries()) {
      double mono = 1;
      bool zero = false;
      for (const auto& [i, vi] : v.entries()) {
        int e = vi - (i == j ? 1 : 0);
        if (e == 0) continue;
        auto it = y.find(i);
        double yi = it == y.end() ? 0.0 : it->second;
        if (yi == 0) {
          zero = true;
          break;
        }
        mono *= std::pow(yi, e);
      }
      if (zero) continue;
      out[j] += mult * ac * (0.5 * vj) * gevrey_weight(j, key.alpha, key.beta, params) * mono;
    }
  }
  return out;
}

/// Certified upper bound for the majorant norm: sum over keys of the exact
/// single-monomial norm (triangle inequality). A key and its implied
/// conjugate orientation have identical fields, hence the factor 2.
template <class C>
double norm_upper(const Hamiltonian<C>& h, const GevreyParams& params) {
  double total = 0;
  for (const auto& [key, c] : h.terms()) {
    const double mult = key.diagonal() ? 1.0 : 2.0;
    total += mult * monomial_norm(key, scalar_traits<C>::abs_double(c), params);
  }
  return total;
}

/// Sampled lower bound: max of |Y_H(y)|_2 over `samples` points of the
/// non-negative unit sphere on the union support. Deterministic under seed.
template <class C>
double norm_lower(const Hamiltonian<C>& h, const GevreyParams& params, int samples,
                  std::uint64_t seed) {
  if (samples < 1) fail(Errc::validation, "norm_lower needs samples >= 1");
  std::vector<Site> support;
  {
    std::map<Site, bool> seen;
    for (const auto& [key, c] : h.terms())
      for (const auto& [site, e] : key.alpha.plus(key.beta).entries()) seen[site] = true;
    for (const auto& [site, b] : seen) support.push_back(site);
  }
  if (support.empty()) return 0;
  double best = 0;
  for (int k = 0; k < samples; ++k) {
    rng::Stream st(rng::mix64(seed, 0x4e0241u, static_cast<std::uint64_t>(k)));
    SiteMap y;
    double nrm = 0;
    for (Site site : support) {
      double g = st.next_normal();
      y[site] = std::abs(g);
      nrm += g * g;
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0) continue;
    for (auto& [site, val] : y) val /= nrm;
    double len = 0;
    for (const auto& [site, val] : majorant_field(h, y, params)) len += val * val;
    best = std::max(best, std::sqrt(len));
  }
  return best;
}

struct NormCheck {
  std::string name;
  double lhs = 0;   // sampled lower bound of the bounded side
  double rhs = 0;   // certified upper bound of the bounding side
  double margin = 0;
  bool ok = false;
};

struct NormReport {
  std::vector<NormCheck> checks;
  double generator_scale = 1;   // rescaling applied to meet the flow hypothesis
  bool unbounded_constant = false;
  bool all_ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

/// Necessary-direction verification of the bracket/flow norm estimates on
/// truncated instances: each check compares a sampled lower bound of the
/// left side with the certified product bound on the right.
template <class C>
NormReport verify_norm_inequalities(const Hamiltonian<C>& f, const Hamiltonian<C>& g,
                                    const GevreyParams& params, double rho, DegreeCap cap,
                                    int samples = 2000, std::uint64_t seed = 20240601) {
  using Real = typename scalar_traits<C>::real_type;
  NormReport report;
  if (!(rho > 0) || !std::isfinite(1 + params.r / rho)) {
    report.unbounded_constant = true;
    return report;
  }
  const GevreyParams wide = params.with_r(params.r + rho);
  auto push = [&](const std::string& name, double lhs, double rhs) {
    report.checks.push_back({name, lhs, rhs, rhs - lhs, lhs <= rhs});
  };

  // bracket estimate: |{F,G}|_{r,s} <= 4 (1 + r/rho) |F|_{r+rho,s} |G|_{r+rho,s}
  {
    int bracket_cap = std::max(0, f.max_degree()) + std::max(0, g.max_degree());
    Hamiltonian<C> fg = poisson(f, g, DegreeCap(bracket_cap));
    push("bracket", norm_lower(fg, params, samples, seed),
         4 * (1 + params.r / rho) * norm_upper(f, wide) * norm_upper(g, wide));
  }

  // flow estimates need a small generator: |S|_{r+rho,s} <= delta
  const double delta = rho / (8 * std::exp(1.0) * (params.r + rho));
  double fu = norm_upper(f, wide);
  double tau = (fu > delta / 2) ? (delta / (2 * fu)) : 1.0;
  report.generator_scale = tau;
  Hamiltonian<C> s_gen = scale(f, scalar_traits<C>::real_from_double(tau));
  if (!s_gen.empty() && s_gen.min_degree() < 1) {
    // quadratic generators do not define a flow estimate here; drop them
    s_gen = project_degree_ge(s_gen, 1);
  }
  const double su = norm_upper(s_gen, wide);
  const double gu = norm_upper(g, wide);
  Hamiltonian<C> trans = lie_transform(s_gen, g, cap);
  Hamiltonian<C> g_trunc = project_degree_le(g, cap.cap);
  Hamiltonian<C> lin = poisson(s_gen, g_trunc, cap);
  push("transform", norm_lower(trans, params, samples, rng::mix64(seed, 1)), 2 * gu);
  push("transform-minus-id", norm_lower(trans - g_trunc, params, samples, rng::mix64(seed, 2)),
       su * gu / delta);
  Hamiltonian<C> tail2 = trans - g_trunc - lin;
  push("transform-tail-2", norm_lower(tail2, params, samples, rng::mix64(seed, 3)),
       0.5 * su * su * gu / (delta * delta));
  Hamiltonian<C> tail3 = tail2 - scale(poisson(s_gen, lin, cap), Real(1) / Real(2));
  push("lie-series-tail-3", norm_lower(tail3, params, samples, rng::mix64(seed, 4)),
       2 * gu * std::pow(su / (2 * delta), 3));
  return report;
}

}  // namespace birkhoff
