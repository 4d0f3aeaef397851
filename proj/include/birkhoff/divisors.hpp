#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "birkhoff/frequency.hpp"
#include "birkhoff/gevrey.hpp"
#include "birkhoff/hamiltonian.hpp"
#include "birkhoff/indices.hpp"
#include "birkhoff/normal_form.hpp"

namespace birkhoff {

/// Parameters of the small-divisor chain: gamma (Diophantine constant),
/// sigma (Gevrey width loss, <= 1), theta; c_star = 7/(2 - 2^theta).
struct DivisorParams {
  double gamma;
  double sigma;
  double theta;
  DivisorParams(double gamma_, double sigma_, double theta_)
      : gamma(gamma_), sigma(sigma_), theta(theta_) {
    if (!(gamma > 0)) fail(Errc::domain, "gamma must be positive");
    if (!(sigma > 0 && sigma <= 1)) fail(Errc::domain, "sigma must lie in (0,1]");
    if (!(theta > 0 && theta < 1)) fail(Errc::domain, "theta must lie in (0,1)");
  }
  double c_star() const { return 7.0 / (2.0 - std::pow(2.0, theta)); }
};

inline double c_star_of(double theta) { return 7.0 / (2.0 - std::pow(2.0, theta)); }

/// gamma * prod_{n in supp(l)} (1 + l_n^2 <n>^2)^{-1}. Errors on l = 0.
double divisor_weight(const SignedIndex& ell, double gamma);

struct DiophantineCheck {
  bool ok = false;
  double worst_ratio = 0;  // min |omega.l| / divisor_weight(l); > 1 means pass
  SignedIndex worst;
};

/// Checks |omega.l| > gamma prod (1+l_n^2 <n>^2)^{-1} for every l != 0 with
/// |l| <= ell_norm_cap and supp(l) in [-site_cap, site_cap] (one of each
/// +-l pair; the ratio is even in l). The l-list is cached per cap pair.
DiophantineCheck is_diophantine_up_to(const Frequency& omega, double gamma, int ell_norm_cap,
                                      Site site_cap);

struct MeasureRow {
  double gamma = 0;
  int samples = 0;
  int failures = 0;
  double fraction = 0;
  double ci95 = 0;  // normal-approximation half width
};

/// Monte Carlo estimate of the non-Diophantine fraction for each gamma,
/// using one shared set of sampled frequencies (each sample's minimal ratio
/// is thresholded per gamma). Honors BIRKHOFF_THREADS.
std::vector<MeasureRow> measure_scan(const std::vector<double>& gammas, int ell_norm_cap,
                                     Site site_cap, int n_samples, std::uint64_t seed);

MeasureRow measure_estimate(double gamma, int ell_norm_cap, Site site_cap, int n_samples,
                            std::uint64_t seed);

struct InequalityStat {
  std::string name;
  long checked = 0;
  long violations = 0;
  double max_ratio = 0;  // lhs / rhs tightness over the hypothesis set
  std::string witness;   // first violating key, if any
};

struct LemmaReport {
  double theta = 0;
  double c_star = 0;
  long keys = 0;
  std::vector<InequalityStat> stats;
  bool all_ok() const {
    for (const auto& s : stats)
      if (s.violations != 0) return false;
    return true;
  }
};

/// Exhaustive check of the rearrangement inequalities over all momentum-zero
/// keys with support in [lo, hi] and 2 <= |alpha|+|beta| <= max_total_degree.
LemmaReport verify_rearrangement_lemmas(Site lo, Site hi, int max_total_degree, double theta);

struct PajataBound {
  double i_sharp = 0;
  double bound = 0;  // 18 i# ln i#
};

/// i# = ((24 C*/(sigma theta)) ln(12 C*/(sigma theta)))^{2/theta} and the
/// derived bound 18 i# ln i# on sum_i f_i(|l_i|).
PajataBound pajata_bound(double sigma, double theta);

/// f_i(x) = -(sigma/C*) x <i>^{theta/2} + ln(1 + x^2 <i>^2).
double pajata_f(Site i, double x, double sigma, double theta);

/// sigma-free surrogate for the homological constant: the smallest C1 with
/// exp(C1 sigma^{-3/theta}) >= exp(18 i#(sigma) ln i#(sigma)) for all
/// sigma in (0,1], i.e. sup_sigma sigma^{3/theta} 18 i# ln i#. Cached.
double derived_c1(double theta);

struct HomologicalReport {
  double log_bound = 0;    // 18 i# ln i#
  double max_log_k = -std::numeric_limits<double>::infinity();
  double min_margin = std::numeric_limits<double>::infinity();  // log_bound - log K
  long keys = 0;
  MonomialKey tightest;
};

/// Per-monomial check of the homological K-quantity
///   K = gamma exp(-sigma (sum <i>^theta (a_i+b_i) - 2 <j>^theta)) / |omega.(a-b)|
/// against exp(18 i# ln i#), in log domain, maximizing over the admissible j.
template <class C>
HomologicalReport verify_homological_bound(const Frequency& freq, const Hamiltonian<C>& r,
                                           double gamma, double sigma, double theta,
                                           double divisor_floor = default_divisor_floor(
                                               scalar_traits<C>::exact)) {
  DivisorParams params(gamma, sigma, theta);
  HomologicalReport report;
  report.log_bound = pajata_bound(sigma, theta).bound;
  for (const auto& [key, c] : r.terms()) {
    if (key.diagonal())
      fail(Errc::kernel_input, "homological bound is undefined on " + key.to_string());
    SignedIndex u = difference(key.alpha, key.beta);
    double div = std::abs(freq.dot(u));
    if (div == 0 || div < divisor_floor)
      fail(Errc::resonance, "divisor " + double_to_string(div) + " at key " + key.to_string());
    // smallest smoothing gap, i.e. the largest admissible <j>
    Site jmax = 0;
    Site best = -1;
    for (const auto& [site, e] : key.alpha.plus(key.beta).entries())
      if (site_mag(site) > best) {
        best = site_mag(site);
        jmax = site;
      }
    double log_k = std::log(gamma) - sigma * smoothing_gap(jmax, key.alpha, key.beta, theta) -
                   std::log(div);
    ++report.keys;
    if (log_k > report.max_log_k) {
      report.max_log_k = log_k;
      report.tightest = key;
    }
    report.min_margin = std::min(report.min_margin, report.log_bound - log_k);
  }
  return report;
}

}  // namespace birkhoff
