#pragma once

#include <climits>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "birkhoff/lie.hpp"

namespace birkhoff {

/// {D_omega, H}: coefficientwise i * omega.(beta - alpha). Computed from the
/// frequency directly, so the quadratic part never has to be materialized on
/// a finite window.
template <class C>
Hamiltonian<C> ad_d_omega(const Frequency& freq, const Hamiltonian<C>& h) {
  using Real = typename scalar_traits<C>::real_type;
  typename Hamiltonian<C>::TermMap out;
  for (const auto& [key, c] : h.terms()) {
    if (key.diagonal()) continue;
    Real w;
    if constexpr (scalar_traits<C>::exact)
      w = freq.dot_rational(difference(key.beta, key.alpha));
    else
      w = freq.dot(difference(key.beta, key.alpha));
    C v = mul_i(c * w);
    if (!scalar_traits<C>::is_zero(v)) out.emplace(key, v);
  }
  return Hamiltonian<C>::from_canonical_terms(std::move(out), DegreeCap(h.degree_cap()),
                                              h.drop_threshold());
}

namespace detail {

/// Relative small-divisor guard. In exact mode only a true zero counts as
/// resonant; in float mode the floor is scaled by the size of the dot
/// product's terms to absorb cancellation error.
template <class C>
void check_divisor(const Frequency& freq, const SignedIndex& u,
                   const typename scalar_traits<C>::real_type& w, double floor,
                   const MonomialKey& key) {
  using traits = scalar_traits<C>;
  if (w == typename traits::real_type{})
    fail(Errc::resonance, "exact resonance at key " + key.to_string());
  if constexpr (!traits::exact) {
    double scale = 1;
    for (const auto& [site, val] : u.entries())
      scale += std::abs(static_cast<double>(val)) * std::abs(freq.omega(site));
    if (std::abs(traits::to_double(w)) < floor * scale)
      fail(Errc::resonance, "small divisor " + double_to_string(traits::to_double(w)) +
                                " at key " + key.to_string());
  }
}

}  // namespace detail

inline double default_divisor_floor(bool exact) { return exact ? 0.0 : 1e-12; }

/// Solves {D_omega, S} = R on the range part: S_{alpha,beta} =
/// R_{alpha,beta} / (i omega.(beta - alpha)), with Pi_K S = 0. R must have no
/// diagonal keys. Reports the smallest divisor met through `smallest`.
template <class C>
Hamiltonian<C> solve_homological(const Frequency& freq, const Hamiltonian<C>& r,
                                 double divisor_floor = default_divisor_floor(scalar_traits<C>::exact),
                                 double* smallest = nullptr) {
  using Real = typename scalar_traits<C>::real_type;
  typename Hamiltonian<C>::TermMap out;
  double min_div = std::numeric_limits<double>::infinity();
  for (const auto& [key, c] : r.terms()) {
    if (key.diagonal())
      fail(Errc::kernel_input, "homological equation is singular on " + key.to_string());
    SignedIndex u = difference(key.beta, key.alpha);
    Real w;
    if constexpr (scalar_traits<C>::exact)
      w = freq.dot_rational(u);
    else
      w = freq.dot(u);
    detail::check_divisor<C>(freq, u, w, divisor_floor, key);
    min_div = std::min(min_div, std::abs(scalar_traits<C>::to_double(w)));
    out.emplace(key, c / C(Real(0), w));
  }
  if (smallest) *smallest = min_div;
  return Hamiltonian<C>::from_canonical_terms(std::move(out), DegreeCap(r.degree_cap()),
                                              r.drop_threshold());
}

/// e^{{S,.}}(D_omega + A) - D_omega when {D_omega, S} = R holds exactly:
///   A - R - sum_{k>=1} ad_S^k R/(k+1)! + sum_{k>=1} ad_S^k A/k!
/// The identity keeps the quadratic part symbolic, so the result is exact at
/// the truncation for lazily defined frequencies.
template <class C>
Hamiltonian<C> conjugate_given_solution(const Hamiltonian<C>& s, const Hamiltonian<C>& r,
                                        const Hamiltonian<C>& a, DegreeCap cap) {
  using Real = typename scalar_traits<C>::real_type;
  Accumulator<C> acc(cap, a.drop_threshold());
  acc.add_hamiltonian(a, Real(1));
  acc.add_hamiltonian(r, Real(-1));
  Hamiltonian<C> term_r = project_degree_le(r, cap.cap);   // ad^k R / (k+1)!
  Hamiltonian<C> term_a = project_degree_le(a, cap.cap);   // ad^k A / k!
  for (int k = 1; !(term_r.empty() && term_a.empty()); ++k) {
    term_r = scale(poisson(s, term_r, cap), Real(1) / Real(k + 1));
    term_a = scale(poisson(s, term_a, cap), Real(1) / Real(k));
    acc.add_hamiltonian(term_r, Real(-1));
    acc.add_hamiltonian(term_a, Real(1));
    if (s.empty()) break;
  }
  return acc.take();
}

/// e^{{S,.}}(D_omega + P) - D_omega for arbitrary S of order >= 1.
template <class C>
Hamiltonian<C> conjugate_with_d(const Frequency& freq, const Hamiltonian<C>& s,
                                const Hamiltonian<C>& p, DegreeCap cap) {
  if (!s.empty() && s.min_degree() < 1)
    fail(Errc::order_violation, "generator must have scaling order >= 1");
  Hamiltonian<C> r = scale(ad_d_omega(freq, s), typename scalar_traits<C>::real_type(-1));
  // here {D, S} = -r by construction, i.e. r plays -{S,D}; reuse the identity
  // A' = P - ({D,S}=-r ... ) with R := {D,S} = -(-r)
  return conjugate_given_solution(s, scale(r, typename scalar_traits<C>::real_type(-1)), p, cap);
}

struct NormalFormStep {
  int step = 0;
  int remainder_min_degree = 0;   // min degree of P_i entering the step
  std::size_t term_count = 0;     // terms of P_i
  double max_generator_coeff = 0; // coefficient sup of S_i
  double smallest_divisor = std::numeric_limits<double>::infinity();
  double kernel_residual = 0;     // normal-form coefficients that had to vanish
  double low_order_residual = 0;  // range coefficients below the proven window
};

template <class C>
struct BnfOptions {
  int target_degree = 6;
  double divisor_floor = default_divisor_floor(scalar_traits<C>::exact);
  /// Residuals that must vanish identically are compared against
  /// residual_tol * max(1, |P_i|_sup); exact mode uses plain zero.
  double residual_tol = scalar_traits<C>::exact ? 0.0 : 1e-9;
};

template <class C>
struct BnfResult {
  std::vector<Hamiltonian<C>> generators;  // in application order
  Hamiltonian<C> invariant;                // Z, truncated at the target degree
  int remainder_min_degree = 0;
  std::vector<NormalFormStep> steps;
};

namespace detail {

template <class C>
double relative_residual(const Hamiltonian<C>& junk, const Hamiltonian<C>& reference) {
  if (junk.empty()) return 0;
  return junk.max_abs_coeff() / std::max(1.0, reference.max_abs_coeff());
}

}  // namespace detail

/// Birkhoff normal-form iteration on the perturbation P (the full
/// Hamiltonian is D_omega + P). At step i the generator kills the range part
/// on degrees [2i+d, cap]; an order-one range part is removed first by a
/// preliminary step. Returns the generators, the invariant Z and the proven
/// lower bound on the remainder degree.
template <class C>
BnfResult<C> bnf_perturbation(const Frequency& freq, const Hamiltonian<C>& p0,
                              const BnfOptions<C>& opts) {
  const DegreeCap cap(opts.target_degree);
  BnfResult<C> result{{}, Hamiltonian<C>::zero(cap), opts.target_degree + 1, {}};
  Hamiltonian<C> p = project_degree_le(p0, cap.cap);
  if (!p.empty() && p.min_degree() < 1)
    fail(Errc::validation, "perturbation must have scaling order >= 1");

  Hamiltonian<C> range = project_r(p);
  Hamiltonian<C> z = Hamiltonian<C>::zero(cap);
  int d = 0;
  int step_index = 0;
  if (range.empty()) {
    result.invariant = project_k(p);
    return result;
  }
  if (range.min_degree() == 1) {
    // preliminary step: one conjugation raises the range order to 2
    NormalFormStep st;
    st.step = step_index++;
    st.remainder_min_degree = p.min_degree();
    st.term_count = p.term_count();
    Hamiltonian<C> s = solve_homological(freq, range, opts.divisor_floor, &st.smallest_divisor);
    st.max_generator_coeff = s.max_abs_coeff();
    result.steps.push_back(st);
    result.generators.push_back(s);
    Hamiltonian<C> a = conjugate_given_solution(s, range, p, cap);
    z = project_degree_le(project_k(a), 2);
    p = a - z;
    d = 2;
  } else {
    d = range.min_degree();
    z = project_degree_lt(project_k(p), d);
    p = p - z;
  }

  for (int i = 0; !p.empty(); ++i) {
    const int window = 2 * i + d;
    NormalFormStep st;
    st.step = step_index++;
    st.remainder_min_degree = p.min_degree();
    st.term_count = p.term_count();

    // everything below the proven window is identically zero in exact mode
    // and roundoff in float mode
    Hamiltonian<C> junk = project_degree_lt(p, window);
    st.low_order_residual = detail::relative_residual(junk, p);
    if (st.low_order_residual > opts.residual_tol)
      fail(Errc::non_convergent, "remainder below the proven window " + std::to_string(window) +
                                     " did not vanish (residual " +
                                     double_to_string(st.low_order_residual) + ")");
    Hamiltonian<C> p_clean = junk.empty() ? std::move(p) : p - junk;
    Hamiltonian<C> range_i = project_r(p_clean);
    Hamiltonian<C> a_clean = z + p_clean;

    if (range_i.empty()) {
      z = project_degree_lt(project_k(a_clean), window + 2);
      p = project_degree_ge(project_k(p_clean), window + 2);
      result.steps.push_back(st);
      continue;
    }

    Hamiltonian<C> s =
        solve_homological(freq, range_i, opts.divisor_floor, &st.smallest_divisor);
    st.max_generator_coeff = s.max_abs_coeff();
    result.steps.push_back(st);
    result.generators.push_back(s);

    Hamiltonian<C> a_next = conjugate_given_solution(s, range_i, a_clean, cap);
    z = project_degree_lt(project_k(a_next), window + 2);
    p = a_next - z;
  }
  result.invariant = std::move(z);
  return result;
}

namespace detail {

/// Warns through the error system if the stored quadratic part disagrees
/// with the frequency, then strips it.
template <class C>
Hamiltonian<C> strip_d_omega(const Frequency& freq, const Hamiltonian<C>& h) {
  using traits = scalar_traits<C>;
  typename Hamiltonian<C>::TermMap rest;
  for (const auto& [key, c] : h.terms()) {
    if (key.degree() > 0) {
      rest.emplace(key, c);
      continue;
    }
    if (!key.diagonal())
      fail(Errc::validation, "degree-zero range term " + key.to_string() +
                                 " is not admissible (perturbations are O(u^3))");
    Site j = key.alpha.entries().front().first;
    if constexpr (traits::exact) {
      if (!(c.re == freq.omega_rational(j)))
        fail(Errc::validation, "quadratic coefficient at site " + std::to_string(j) +
                                   " disagrees with the frequency");
    } else {
      double w = freq.omega(j);
      if (std::abs(traits::to_double(c.re) - w) > 1e-9 * std::max(1.0, std::abs(w)))
        fail(Errc::validation, "quadratic coefficient at site " + std::to_string(j) +
                                   " disagrees with the frequency");
    }
  }
  return Hamiltonian<C>::from_canonical_terms(std::move(rest), DegreeCap(h.degree_cap()),
                                              h.drop_threshold());
}

}  // namespace detail

/// Full-Hamiltonian entry point: H must be D_omega (on some window) plus a
/// perturbation of order >= 1.
template <class C>
BnfResult<C> bnf(const Frequency& freq, const Hamiltonian<C>& h, const BnfOptions<C>& opts) {
  return bnf_perturbation(freq, detail::strip_d_omega(freq, h), opts);
}

/// The unique invariant Z_H, truncated at the target degree.
template <class C>
Hamiltonian<C> normal_form_invariant(const Frequency& freq, const Hamiltonian<C>& h,
                                     const BnfOptions<C>& opts) {
  return bnf(freq, h, opts).invariant;
}

template <class C>
struct LinearizableOptions {
  int i_max = 8;
  double divisor_floor = default_divisor_floor(scalar_traits<C>::exact);
  double residual_tol = scalar_traits<C>::exact ? 0.0 : 1e-9;
};

template <class C>
struct LinearizableResult {
  std::vector<Hamiltonian<C>> generators;
  std::vector<NormalFormStep> steps;
  Hamiltonian<C> remainder;
};

/// Degree-doubling iteration for formally linearizable Hamiltonians
/// H = D_omega + P0, P0 of order >= 1: the step-i normal-form part below
/// degree 2^{i+1} must vanish, and the remainder order doubles each step.
/// Fails with not-linearizable when a normal-form coefficient survives.
template <class C>
LinearizableResult<C> linearizable_bnf(const Frequency& freq, const Hamiltonian<C>& p0,
                                       const LinearizableOptions<C>& opts) {
  const DegreeCap cap(p0.degree_cap());
  LinearizableResult<C> result{{}, {}, Hamiltonian<C>::zero(cap)};
  Hamiltonian<C> p = p0;
  if (!p.empty() && p.min_degree() < 1)
    fail(Errc::validation, "perturbation must have scaling order >= 1");
  for (int i = 0; i < opts.i_max && !p.empty(); ++i) {
    const int doubling = 1 << (i + 1);  // 2^{i+1}
    NormalFormStep st;
    st.step = i;
    st.remainder_min_degree = p.min_degree();
    st.term_count = p.term_count();

    Hamiltonian<C> junk = project_degree_lt(p, 1 << i);
    st.low_order_residual = detail::relative_residual(junk, p);
    if (st.low_order_residual > opts.residual_tol)
      fail(Errc::non_convergent, "remainder order below 2^i at step " + std::to_string(i) +
                                     " (residual " + double_to_string(st.low_order_residual) +
                                     ")");
    if (!junk.empty()) p = p - junk;

    Hamiltonian<C> kernel_low = project_degree_lt(project_k(p), doubling);
    st.kernel_residual = detail::relative_residual(kernel_low, p);
    if (st.kernel_residual > opts.residual_tol) {
      std::string witness;
      for (const auto& [key, c] : kernel_low.terms()) {
        witness += "\n  " + key.to_string();
        if (witness.size() > 300) break;
      }
      fail(Errc::not_linearizable, "normal-form part below degree " + std::to_string(doubling) +
                                       " does not vanish at step " + std::to_string(i) +
                                       "; offending keys:" + witness);
    }
    Hamiltonian<C> p_clean = kernel_low.empty() ? std::move(p) : p - kernel_low;
    Hamiltonian<C> range_i = project_r(p_clean);
    if (range_i.empty()) {
      p = project_k(p_clean);  // all of order >= 2^{i+1} after the kernel check
      result.steps.push_back(st);
      continue;
    }
    Hamiltonian<C> s =
        solve_homological(freq, range_i, opts.divisor_floor, &st.smallest_divisor);
    st.max_generator_coeff = s.max_abs_coeff();
    result.steps.push_back(st);
    result.generators.push_back(s);
    p = conjugate_given_solution(s, range_i, p_clean, cap);
  }
  result.remainder = std::move(p);
  return result;
}

}  // namespace birkhoff
