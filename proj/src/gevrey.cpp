#include "birkhoff/gevrey.hpp"

#include <algorithm>
#include <cmath>

namespace birkhoff {

double smoothing_gap(Site j, const MultiIndex& alpha, const MultiIndex& beta, double theta) {
  double acc = -2 * std::pow(static_cast<double>(site_mag(j)), theta);
  MultiIndex v = alpha.plus(beta);
  for (const auto& [i, vi] : v.entries())
    acc += vi * std::pow(static_cast<double>(site_mag(i)), theta);
  return acc;
}

double gevrey_log_weight(Site j, const MultiIndex& alpha, const MultiIndex& beta,
                         const GevreyParams& params) {
  MultiIndex v = alpha.plus(beta);
  if (v.exponent(j) == 0)
    fail(Errc::unsupported_site, "weight at site " + std::to_string(j) + " outside the support");
  const int n = v.total();
  double log_site_ratio = 2 * std::log(static_cast<double>(site_mag(j)));
  for (const auto& [i, vi] : v.entries())
    log_site_ratio -= vi * std::log(static_cast<double>(site_mag(i)));
  return (n - 2) * std::log(params.r) + params.p * log_site_ratio -
         params.s * smoothing_gap(j, alpha, beta, params.theta);
}

namespace detail {

MonomialField monomial_field(const MonomialKey& key, double abs_coeff,
                             const GevreyParams& params) {
  MonomialField f;
  MultiIndex v = key.alpha.plus(key.beta);
  f.total = v.total();
  for (const auto& [site, e] : v.entries()) {
    f.sites.push_back(site);
    f.v.push_back(e);
    f.w.push_back(abs_coeff * (0.5 * e) * gevrey_weight(site, key.alpha, key.beta, params));
  }
  return f;
}

namespace {

// F(t) = sum_j w_j^2 t^{v - e_j} on the simplex over the support.
double field_sq(const MonomialField& f, const std::vector<double>& t) {
  double acc = 0;
  for (std::size_t j = 0; j < f.sites.size(); ++j) {
    double mono = f.w[j] * f.w[j];
    for (std::size_t i = 0; i < f.sites.size(); ++i) {
      int e = f.v[i] - (i == j ? 1 : 0);
      if (e != 0) mono *= std::pow(t[i], e);
    }
    acc += mono;
  }
  return acc;
}

double ascend(const MonomialField& f, std::vector<double> t) {
  const std::size_t m = t.size();
  const int degree = f.total - 1;  // homogeneity of F
  double value = field_sq(f, t);
  std::vector<double> grad(m);
  for (int iter = 0; iter < 100000; ++iter) {
    // dF/dt_i, with the t_i = 0 face handled by dropping vanished terms
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      double mono = f.w[j] * f.w[j];
      bool on_face = false;
      for (std::size_t i = 0; i < m; ++i) {
        int e = f.v[i] - (i == j ? 1 : 0);
        if (e == 0) continue;
        if (t[i] == 0) {
          on_face = true;
          break;
        }
        mono *= std::pow(t[i], e);
      }
      if (on_face || mono == 0) continue;
      for (std::size_t i = 0; i < m; ++i) {
        int e = f.v[i] - (i == j ? 1 : 0);
        if (e != 0) grad[i] += mono * e / t[i];
      }
    }
    double denom = 0;
    for (std::size_t i = 0; i < m; ++i) denom += t[i] * grad[i];
    if (denom <= 0) break;
    // Baum-Eagon step t_i <- t_i dF_i / ((deg F) F); increases F
    for (std::size_t i = 0; i < m; ++i) t[i] = t[i] * grad[i] / denom;
    double next = field_sq(f, t);
    if (next <= value * (1 + 1e-12)) {
      value = std::max(value, next);
      break;
    }
    value = next;
    (void)degree;
  }
  return value;
}

}  // namespace

double monomial_norm_core(const MonomialField& f) {
  const std::size_t m = f.sites.size();
  if (m == 0) return 0;
  double best = 0;
  // uniform start
  {
    std::vector<double> t(m, 1.0 / static_cast<double>(m));
    best = std::max(best, ascend(f, t));
  }
  // exponent-profile start t ~ v
  {
    std::vector<double> t(m);
    for (std::size_t i = 0; i < m; ++i) t[i] = static_cast<double>(f.v[i]) / f.total;
    best = std::max(best, ascend(f, t));
  }
  // near-vertex starts
  for (std::size_t k = 0; k < m && m > 1; ++k) {
    std::vector<double> t(m, 0.1 / static_cast<double>(m - 1));
    t[k] = 0.9;
    double rest = 0;
    for (double x : t) rest += x;
    for (double& x : t) x /= rest;
    best = std::max(best, ascend(f, t));
  }
  return std::sqrt(best);
}

}  // namespace detail

double monomial_norm(const MonomialKey& key, double abs_coeff, const GevreyParams& params) {
  if (abs_coeff == 0) return 0;
  return detail::monomial_norm_core(detail::monomial_field(key, abs_coeff, params));
}

}  // namespace birkhoff
