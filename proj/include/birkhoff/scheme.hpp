#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "birkhoff/divisors.hpp"
#include "birkhoff/gevrey.hpp"
#include "birkhoff/normal_form.hpp"

namespace birkhoff {

/// Iteration schedules: radii shrink to r0/2 and widths grow to 2 s0,
///   rho_i = r0 / (2 Ct <i>^2),  sigma_i = s0 / (Ct <i>^2),  d_i = 2^i,
/// with Ct = 1 + pi^2/6 (so the <.>-weighted inverse squares sum to Ct).
/// The i = 0 entries use <0> = 1; the raw 1/i^2 form is undefined there.
struct Schedule {
  double r0;
  double s0;
  double chi;
  int i_max;
  double c_tilde = 1.0 + 1.6449340668482264365;  // 1 + pi^2/6

  Schedule(double r0_, double s0_, double chi_, int i_max_)
      : r0(r0_), s0(s0_), chi(chi_), i_max(i_max_) {
    if (!(r0 > 0) || !(s0 > 0)) fail(Errc::domain, "schedule needs r0, s0 > 0");
    if (!(chi > 1 && chi < 2)) fail(Errc::domain, "chi must lie in (1,2)");
    if (i_max < 1) fail(Errc::domain, "schedule needs i_max >= 1");
  }

  double rho(int i) const {
    double m = static_cast<double>(site_mag(i));
    return r0 / (2 * c_tilde * m * m);
  }
  double sigma_loss(int i) const {
    double m = static_cast<double>(site_mag(i));
    return s0 / (c_tilde * m * m);
  }
  double r(int i) const {
    double x = r0;
    for (int k = 0; k < i; ++k) x -= rho(k);
    return x;
  }
  double s(int i) const {
    double x = s0;
    for (int k = 0; k < i; ++k) x += sigma_loss(k);
    return x;
  }
  static int degree(int i) { return 1 << i; }
};

/// sup_{0 <= n <= n_max} 2^{n+1} ln(1 - 1/(2 Ct <n>^2)) + chi^n (chi - 1).
/// The terms tend to -infinity (2^n beats chi^n), so a finite scan with a
/// decreasing-tail check evaluates the sup; chi is admissible when the
/// result is <= -0.1.
double chi_margin(double chi, double c_tilde, int n_max = 400);

struct SmallnessThreshold {
  double log_epsilon0 = 0;  // natural log of the maximal admissible epsilon_0
  double epsilon0 = 0;      // exp of the above; 0 on underflow
  int arg_n = 0;            // where the sup was attained
  bool tail_certified = false;
  double c1 = 0;  // derived homological constant used
  double c2 = 0;  // c1 Ct^{3/theta} s0^{-3/theta}
};

/// Largest epsilon_0 with epsilon_0^{-1} >= K sup_n exp(C2(s0) n^{6/theta})
/// n^2 max(exp(n - chi^n), exp(-(2-chi) chi^n)), evaluated in log domain
/// with a monotone-tail certificate. K is the caller-supplied calibration.
SmallnessThreshold smallness_threshold(double s0, double theta, double chi, double k_cal = 1.0);

struct SchemeRow {
  int i = 0;
  double r_i = 0;
  double s_i = 0;
  int min_degree = 0;
  std::size_t terms = 0;
  double eps_upper = 0;      // gamma^{-1} |P_i|_{r_i, s_i} (certified upper)
  double decay_bound = 0;    // eps_0 e^{-chi^i}
  bool decay_ok = true;      // checked for i >= 1
  // data of the generator step that produced this P_i (absent for i = 0)
  double smallest_divisor = std::numeric_limits<double>::quiet_NaN();
  double gen_upper = 0;        // |S_{i-1}|_{r_{i-1}, s_i}
  double gen_log_bound = 0;    // log(gamma^{-1} e^{18 i# ln i#} |P_{i-1}|)
  double hom_margin = 0;       // min per-key log margin of the divisor bound
  double scaling_term = 0;     // |Pi^{>= 2^i} Pi^K P_{i-1}|_{r_i, s_i}
  double scaling_bound = 0;    // (r_i/r_{i-1})^{2^i} |P_{i-1}|_{r_{i-1}, s_{i-1}}
  double tails_upper = 0;      // Lie-series tails at (r_i, s_i)
  double tails_bound = 0;      // 16 e r_{i-1}/rho_{i-1} |P_{i-1}| |S_{i-1}|
  double displacement = 0;     // r_{i-1} |S_{i-1}|
  double displacement_bound = 0;  // 2^{-(i-1)} r0
};

struct SchemeReport {
  double gamma = 0;
  double epsilon0 = 0;
  SmallnessThreshold threshold;
  bool smallness_ok = false;  // warn-only condition
  bool decay_ok = true;
  std::vector<SchemeRow> rows;
};

template <class C>
struct SchemeOptions {
  double divisor_floor = default_divisor_floor(scalar_traits<C>::exact);
  double residual_tol = scalar_traits<C>::exact ? 0.0 : 1e-9;
  double k_cal = 1.0;
  bool throw_on_decay_violation = true;
};

/// Tracked run of the doubling iteration with per-step majorant-norm
/// bookkeeping on the schedule (r_i, s_i). The smallness condition is
/// advisory (warn-only): at finite truncation the decay usually holds for
/// far larger perturbations than the worst-case threshold admits.
template <class C>
SchemeReport run_scheme(const Frequency& freq, const Hamiltonian<C>& p0, const Schedule& sched,
                        double p_weight, double theta, double gamma, DegreeCap cap,
                        const SchemeOptions<C>& opts = {}) {
  if (cap.cap < 4) fail(Errc::validation, "scheme cap below 4 tracks nothing");
  SchemeReport report;
  report.gamma = gamma;
  Hamiltonian<C> p = project_degree_le(p0, cap.cap);
  if (!p.empty() && p.min_degree() < 1)
    fail(Errc::validation, "perturbation must have scaling order >= 1");

  const GevreyParams base(sched.r0, sched.s0, p_weight, theta);
  report.epsilon0 = norm_upper(p, base) / gamma;
  report.threshold = smallness_threshold(sched.s0, theta, sched.chi, opts.k_cal);
  report.smallness_ok =
      p.empty() || std::log(report.epsilon0) <= report.threshold.log_epsilon0;

  SchemeRow pending;  // generator data carried into the next row
  for (int i = 0; i <= sched.i_max; ++i) {
    SchemeRow row = pending;
    pending = SchemeRow{};
    row.i = i;
    row.r_i = sched.r(i);
    row.s_i = sched.s(i);
    row.min_degree = p.empty() ? cap.cap + 1 : p.min_degree();
    row.terms = p.term_count();
    const GevreyParams here(row.r_i, row.s_i, p_weight, theta);
    row.eps_upper = norm_upper(p, here) / gamma;
    row.decay_bound = report.epsilon0 * std::exp(-std::pow(sched.chi, i));
    row.decay_ok = i == 0 || row.eps_upper <= row.decay_bound * (1 + 1e-9);
    if (!row.decay_ok) report.decay_ok = false;
    report.rows.push_back(row);
    if (i == sched.i_max || p.empty()) break;

    // step i: drop roundoff below 2^i, require the normal-form part below
    // 2^{i+1} to vanish, solve, conjugate
    Hamiltonian<C> junk = project_degree_lt(p, 1 << i);
    if (detail::relative_residual(junk, p) > opts.residual_tol)
      fail(Errc::non_convergent, "remainder order below 2^i at step " + std::to_string(i));
    if (!junk.empty()) p = p - junk;
    Hamiltonian<C> kernel_low = project_degree_lt(project_k(p), 1 << (i + 1));
    if (detail::relative_residual(kernel_low, p) > opts.residual_tol)
      fail(Errc::not_linearizable,
           "normal-form part survives at scheme step " + std::to_string(i));
    if (!kernel_low.empty()) p = p - kernel_low;
    Hamiltonian<C> range_i = project_r(p);

    if (range_i.empty()) {
      p = project_k(p);
      continue;
    }
    const double sigma_i = sched.sigma_loss(i);
    Hamiltonian<C> s =
        solve_homological(freq, range_i, opts.divisor_floor, &pending.smallest_divisor);

    const GevreyParams next(sched.r(i + 1), sched.s(i + 1), p_weight, theta);
    const GevreyParams gen_params(row.r_i, sched.s(i + 1), p_weight, theta);
    pending.gen_upper = norm_upper(s, gen_params);
    auto hom = verify_homological_bound(freq, range_i, gamma, sigma_i, theta, opts.divisor_floor);
    pending.hom_margin = hom.min_margin;
    pending.gen_log_bound =
        -std::log(gamma) + hom.log_bound + std::log(norm_upper(p, here));
    pending.displacement = row.r_i * pending.gen_upper;
    pending.displacement_bound = std::pow(2.0, -i) * sched.r0;

    Hamiltonian<C> p_next = conjugate_given_solution(s, range_i, p, cap);
    Hamiltonian<C> scaling_piece = project_degree_ge(project_k(p), 1 << (i + 1));
    pending.scaling_term = norm_upper(scaling_piece, next);
    pending.scaling_bound =
        std::pow(next.r / row.r_i, 1 << (i + 1)) * norm_upper(p, here);
    pending.tails_upper = norm_upper(p_next - scaling_piece, next);
    pending.tails_bound = 16 * std::exp(1.0) * row.r_i / sched.rho(i) * norm_upper(p, here) *
                          norm_upper(s, next);
    p = std::move(p_next);
  }

  if (!report.decay_ok && opts.throw_on_decay_violation) {
    for (const auto& row : report.rows)
      if (!row.decay_ok)
        fail(Errc::decay_violation,
             "tracked norm " + double_to_string(row.eps_upper) + " exceeds " +
                 double_to_string(row.decay_bound) + " at step " + std::to_string(row.i));
  }
  return report;
}

}  // namespace birkhoff
