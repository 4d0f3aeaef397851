#pragma once

#include <climits>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/frequency.hpp"
#include "birkhoff/indices.hpp"
#include "birkhoff/scalar.hpp"

namespace birkhoff {

/// Inclusive bound on the scaling degree kept by an operation. Outputs are
/// exact in degrees <= cap and discarded above; there is no implicit global
/// truncation state.
struct DegreeCap {
  int cap;
  explicit DegreeCap(int c) : cap(c) {
    if (c < 0) fail(Errc::validation, "degree cap must be >= 0");
  }
};

/// Ordered exponent pair (alpha, beta) of a monomial u^alpha ubar^beta.
/// Stored keys are canonical: the lexicographically smaller of (alpha, beta)
/// and (beta, alpha); the coefficient of the swapped orientation is the
/// conjugate and is implied.
struct MonomialKey {
  MultiIndex alpha;
  MultiIndex beta;

  bool is_canonical() const { return !(beta < alpha); }
  MonomialKey swapped() const { return {beta, alpha}; }
  MonomialKey canonical() const { return is_canonical() ? *this : swapped(); }
  bool diagonal() const { return alpha == beta; }
  int total_degree() const { return alpha.total() + beta.total(); }
  /// Scaling degree |alpha| + |beta| - 2.
  int degree() const { return total_degree() - 2; }

  friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
  friend std::strong_ordering operator<=>(const MonomialKey& a, const MonomialKey& b) {
    return std::tie(a.alpha, a.beta) <=> std::tie(b.alpha, b.beta);
  }
  std::string to_string() const { return alpha.to_string() + " " + beta.to_string(); }
};

/// Throws unless (alpha, beta) is an admissible key: momentum zero, total
/// degree >= 2 (no constant, no zero-site linear term).
inline void validate_key(const MultiIndex& alpha, const MultiIndex& beta) {
  std::int64_t pi = momentum(alpha, beta);
  if (pi != 0)
    fail(Errc::momentum_violation,
         "key " + alpha.to_string() + " " + beta.to_string() + " has momentum " + std::to_string(pi));
  if (alpha.total() + beta.total() < 2)
    fail(Errc::forbidden_term, "constant and linear monomials are excluded: " + alpha.to_string() +
                                   " " + beta.to_string());
}

/// Sparse formal Hamiltonian at a finite degree truncation. Immutable after
/// construction. Coefficients live over a configurable complex scalar C
/// (exact rationals or floating point); reality is guaranteed structurally
/// by canonical key storage plus real diagonal coefficients.
template <class C>
class Hamiltonian {
 public:
  using traits = scalar_traits<C>;
  using Real = typename traits::real_type;
  using TermMap = std::map<MonomialKey, C>;

  struct Term {
    MultiIndex alpha;
    MultiIndex beta;
    C coeff;
  };

  explicit Hamiltonian(DegreeCap cap, Real drop = traits::default_drop())
      : cap_(cap.cap), drop_(std::move(drop)) {}

  static Hamiltonian zero(DegreeCap cap) { return Hamiltonian(cap); }

  /// Validated build from user terms. A term with non-canonical orientation
  /// declares the conjugate coefficient on the canonical key; duplicates of
  /// the same orientation accumulate; contradictory orientations are
  /// rejected.
  static Hamiltonian build(std::span<const Term> terms, DegreeCap cap,
                           Real drop = traits::default_drop()) {
    std::map<MonomialKey, C> oriented;
    for (const Term& t : terms) {
      validate_key(t.alpha, t.beta);
      MonomialKey key{t.alpha, t.beta};
      if (key.degree() > cap.cap)
        fail(Errc::degree_overflow, "term of degree " + std::to_string(key.degree()) +
                                        " above cap " + std::to_string(cap.cap));
      oriented[key] += t.coeff;
    }
    TermMap canonical;
    for (const auto& [key, c] : oriented) {
      if (key.diagonal() && !(c.im == Real{}))
        fail(Errc::reality_conflict, "diagonal coefficient must be real at " + key.to_string());
      if (key.is_canonical()) {
        auto other = oriented.find(key.swapped());
        if (other != oriented.end() && !key.diagonal() && !(other->second == conj(c)))
          fail(Errc::reality_conflict, "orientations of " + key.to_string() + " are not conjugate");
        canonical[key] = c;
      } else if (oriented.find(key.swapped()) == oriented.end()) {
        canonical[key.swapped()] = conj(c);
      }
    }
    return from_canonical_terms(std::move(canonical), cap, std::move(drop));
  }

  /// Builds from an already canonical term map; validates every invariant.
  static Hamiltonian from_canonical_terms(TermMap terms, DegreeCap cap,
                                          Real drop = traits::default_drop()) {
    Hamiltonian out(cap, std::move(drop));
    for (auto it = terms.begin(); it != terms.end();) {
      const MonomialKey& key = it->first;
      validate_key(key.alpha, key.beta);
      if (!key.is_canonical()) fail(Errc::validation, "non-canonical key " + key.to_string());
      if (key.degree() > cap.cap) fail(Errc::degree_overflow, "key above degree cap");
      if (key.diagonal() && !(it->second.im == Real{}))
        fail(Errc::reality_conflict, "diagonal coefficient must be real at " + key.to_string());
      if (traits::below_drop(it->second, out.drop_))
        it = terms.erase(it);
      else
        ++it;
    }
    out.terms_ = std::move(terms);
    return out;
  }

  const TermMap& terms() const { return terms_; }
  int degree_cap() const { return cap_; }
  const Real& drop_threshold() const { return drop_; }
  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Coefficient of the (alpha, beta) orientation; conjugated lookup for
  /// non-canonical keys, zero if absent.
  C coeff(const MultiIndex& alpha, const MultiIndex& beta) const {
    MonomialKey key{alpha, beta};
    if (key.is_canonical()) {
      auto it = terms_.find(key);
      return it == terms_.end() ? C{} : it->second;
    }
    auto it = terms_.find(key.swapped());
    return it == terms_.end() ? C{} : conj(it->second);
  }

  /// Visits every oriented monomial, expanding implied conjugates.
  template <class F>
  void for_each_oriented(F&& f) const {
    for (const auto& [key, c] : terms_) {
      f(key.alpha, key.beta, c);
      if (!key.diagonal()) f(key.beta, key.alpha, conj(c));
    }
  }

  /// Minimal scaling degree over stored keys; INT_MAX when empty.
  int min_degree() const {
    int d = INT_MAX;
    for (const auto& [key, c] : terms_) d = std::min(d, key.degree());
    return d;
  }
  int max_degree() const {
    int d = -1;
    for (const auto& [key, c] : terms_) d = std::max(d, key.degree());
    return d;
  }

  double max_abs_coeff() const {
    double m = 0;
    for (const auto& [key, c] : terms_) m = std::max(m, traits::abs_double(c));
    return m;
  }

  friend bool operator==(const Hamiltonian& a, const Hamiltonian& b) {
    return a.terms_ == b.terms_;
  }

 private:
  TermMap terms_;
  int cap_;
  Real drop_;
};

/// Collects oriented contributions into a canonical term map. Contributions
/// whose orientation is not canonical are skipped: for operations that
/// preserve reality (every operation here) the mirrored contribution arrives
/// on the canonical key by symmetry, and accumulating both would double
/// count.
template <class C>
class Accumulator {
 public:
  using traits = scalar_traits<C>;
  using Real = typename traits::real_type;

  explicit Accumulator(DegreeCap cap, Real drop = traits::default_drop())
      : cap_(cap.cap), drop_(std::move(drop)) {}

  void add(const MultiIndex& alpha, const MultiIndex& beta, const C& c) {
    MonomialKey key{alpha, beta};
    if (key.degree() > cap_) return;
    if (!key.is_canonical()) return;
    acc_[std::move(key)] += c;
  }

  void add_hamiltonian(const Hamiltonian<C>& h, const Real& factor) {
    for (const auto& [key, c] : h.terms()) {
      if (key.degree() > cap_) continue;
      acc_[key] += c * factor;
    }
  }

  Hamiltonian<C> take() {
    for (auto it = acc_.begin(); it != acc_.end();) {
      if (it->first.diagonal()) {
        // mathematically real; floating roundoff may leave a speck
        if constexpr (traits::exact) {
          if (!(it->second.im == Real{}))
            fail(Errc::validation, "internal: diagonal coefficient not real");
        } else {
          it->second.im = Real{};
        }
      }
      if (traits::below_drop(it->second, drop_))
        it = acc_.erase(it);
      else
        ++it;
    }
    return Hamiltonian<C>::from_canonical_terms(std::move(acc_), DegreeCap(cap_), drop_);
  }

 private:
  typename Hamiltonian<C>::TermMap acc_;
  int cap_;
  Real drop_;
};

template <class C>
Hamiltonian<C> operator+(const Hamiltonian<C>& a, const Hamiltonian<C>& b) {
  DegreeCap cap(std::min(a.degree_cap(), b.degree_cap()));
  Accumulator<C> acc(cap, a.drop_threshold());
  acc.add_hamiltonian(a, typename scalar_traits<C>::real_type(1));
  acc.add_hamiltonian(b, typename scalar_traits<C>::real_type(1));
  return acc.take();
}

template <class C>
Hamiltonian<C> operator-(const Hamiltonian<C>& a, const Hamiltonian<C>& b) {
  DegreeCap cap(std::min(a.degree_cap(), b.degree_cap()));
  Accumulator<C> acc(cap, a.drop_threshold());
  acc.add_hamiltonian(a, typename scalar_traits<C>::real_type(1));
  acc.add_hamiltonian(b, typename scalar_traits<C>::real_type(-1));
  return acc.take();
}

/// Real scalar multiple (complex scales would break reality).
template <class C>
Hamiltonian<C> scale(const Hamiltonian<C>& h, const typename scalar_traits<C>::real_type& s) {
  Accumulator<C> acc(DegreeCap(h.degree_cap()), h.drop_threshold());
  acc.add_hamiltonian(h, s);
  return acc.take();
}

namespace detail {
template <class C, class Pred>
Hamiltonian<C> filter_terms(const Hamiltonian<C>& h, Pred&& keep) {
  typename Hamiltonian<C>::TermMap out;
  for (const auto& [key, c] : h.terms())
    if (keep(key)) out.emplace(key, c);
  return Hamiltonian<C>::from_canonical_terms(std::move(out), DegreeCap(h.degree_cap()),
                                              h.drop_threshold());
}
}  // namespace detail

/// Normal-form part: keys with alpha = beta (functions of the actions).
template <class C>
Hamiltonian<C> project_k(const Hamiltonian<C>& h) {
  return detail::filter_terms(h, [](const MonomialKey& k) { return k.diagonal(); });
}

/// Range part: keys with alpha != beta.
template <class C>
Hamiltonian<C> project_r(const Hamiltonian<C>& h) {
  return detail::filter_terms(h, [](const MonomialKey& k) { return !k.diagonal(); });
}

template <class C>
Hamiltonian<C> project_degree_eq(const Hamiltonian<C>& h, int d) {
  return detail::filter_terms(h, [d](const MonomialKey& k) { return k.degree() == d; });
}

template <class C>
Hamiltonian<C> project_degree_le(const Hamiltonian<C>& h, int d) {
  return detail::filter_terms(h, [d](const MonomialKey& k) { return k.degree() <= d; });
}

template <class C>
Hamiltonian<C> project_degree_lt(const Hamiltonian<C>& h, int d) {
  return detail::filter_terms(h, [d](const MonomialKey& k) { return k.degree() < d; });
}

template <class C>
Hamiltonian<C> project_degree_ge(const Hamiltonian<C>& h, int d) {
  return detail::filter_terms(h, [d](const MonomialKey& k) { return k.degree() >= d; });
}

/// Coefficientwise modulus. In exact mode the modulus must itself be
/// rational (real, imaginary or Pythagorean coefficients); otherwise use a
/// floating-point scalar.
template <class C>
Hamiltonian<C> majorant(const Hamiltonian<C>& h) {
  typename Hamiltonian<C>::TermMap out;
  for (const auto& [key, c] : h.terms()) out.emplace(key, C(scalar_traits<C>::modulus(c)));
  return Hamiltonian<C>::from_canonical_terms(std::move(out), DegreeCap(h.degree_cap()),
                                              h.drop_threshold());
}

/// sum_{j in [lo, hi]} omega_j |u_j|^2.
template <class C>
Hamiltonian<C> d_omega(const Frequency& freq, Site lo, Site hi, DegreeCap cap) {
  if (lo > hi) return Hamiltonian<C>::zero(cap);
  typename Hamiltonian<C>::TermMap out;
  for (Site j = lo; j <= hi; ++j) {
    typename scalar_traits<C>::real_type w;
    if constexpr (scalar_traits<C>::exact)
      w = freq.omega_rational(j);
    else
      w = scalar_traits<C>::real_from_double(freq.omega(j));
    if (w == typename scalar_traits<C>::real_type{}) continue;
    MultiIndex e = MultiIndex().plus_unit(j);
    out.emplace(MonomialKey{e, e}, C(w));
  }
  return Hamiltonian<C>::from_canonical_terms(std::move(out), cap);
}

/// Reproducible Hamiltonian with canonical keys drawn from the momentum-zero
/// pairs in the window. Perturbations are cubic or higher, hence
/// min_degree >= 1.
template <class C>
Hamiltonian<C> random_hamiltonian(std::uint64_t seed, Site lo, Site hi, int min_degree,
                                  DegreeCap cap, double density, double scale_limit) {
  if (min_degree < 1) fail(Errc::validation, "random perturbations need min_degree >= 1");
  if (min_degree > cap.cap) fail(Errc::validation, "min_degree above the degree cap");
  if (density < 0 || density > 1) fail(Errc::validation, "density must lie in [0, 1]");
  typename Hamiltonian<C>::TermMap out;
  std::uint64_t counter = 0;
  for_each_momentum_zero_pair(lo, hi, cap.cap + 2, [&](const MultiIndex& a, const MultiIndex& b) {
    MonomialKey key{a, b};
    if (!key.is_canonical() || key.degree() < min_degree) return;
    rng::Stream st(rng::mix64(seed, 0xa11ce, counter++));
    if (st.next_uniform01() >= density) return;
    double re = st.next_uniform(-scale_limit, scale_limit);
    double im = key.diagonal() ? 0.0 : st.next_uniform(-scale_limit, scale_limit);
    C c(scalar_traits<C>::real_from_double(re), scalar_traits<C>::real_from_double(im));
    if (!scalar_traits<C>::is_zero(c)) out.emplace(key, c);
  });
  return Hamiltonian<C>::from_canonical_terms(std::move(out), cap);
}

using HamiltonianQ = Hamiltonian<CRational>;
using HamiltonianD = Hamiltonian<CDouble>;

}  // namespace birkhoff
