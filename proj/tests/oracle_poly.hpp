#pragma once

// Test-only dense polynomial oracle in the variables u_j, ubar_j for j in a
// fixed window, with exact complex-rational coefficients. Deliberately
// independent of the sparse Hamiltonian algebra: the canonical bracket is
// computed by literal symbolic differentiation and polynomial products, so
// agreement with the production bracket is a genuine cross-check.

#include <map>
#include <vector>

#include "birkhoff/hamiltonian.hpp"

namespace oracle {

using birkhoff::CRational;
using birkhoff::Rational;
using birkhoff::Site;

class Poly {
 public:
  // exponent layout: [u_{lo..hi} | ubar_{lo..hi}]
  Poly(Site lo, Site hi) : lo_(lo), hi_(hi) {}

  Site lo() const { return lo_; }
  Site hi() const { return hi_; }
  std::size_t width() const { return 2 * static_cast<std::size_t>(hi_ - lo_ + 1); }

  void add_term(const std::vector<int>& exps, const CRational& c) {
    if (c == CRational{}) return;
    auto& slot = terms_[exps];
    slot += c;
    if (slot == CRational{}) terms_.erase(exps);
  }

  template <class C>
  static Poly from_hamiltonian(const birkhoff::Hamiltonian<C>& h, Site lo, Site hi) {
    Poly out(lo, hi);
    h.for_each_oriented([&](const birkhoff::MultiIndex& alpha, const birkhoff::MultiIndex& beta,
                            const C& c) {
      std::vector<int> exps(out.width(), 0);
      for (const auto& [site, e] : alpha.entries()) {
        REQUIRE(site >= lo);
        REQUIRE(site <= hi);
        exps[static_cast<std::size_t>(site - lo)] = e;
      }
      for (const auto& [site, e] : beta.entries()) {
        REQUIRE(site >= lo);
        REQUIRE(site <= hi);
        exps[static_cast<std::size_t>(hi - lo + 1 + site - lo)] = e;
      }
      out.add_term(exps, c);
    });
    return out;
  }

  Poly derivative(std::size_t var) const {
    Poly out(lo_, hi_);
    for (const auto& [exps, c] : terms_) {
      if (exps[var] == 0) continue;
      std::vector<int> d = exps;
      --d[var];
      out.add_term(d, c * Rational(exps[var]));
    }
    return out;
  }

  Poly times(const Poly& o) const {
    Poly out(lo_, hi_);
    for (const auto& [ea, ca] : terms_)
      for (const auto& [eb, cb] : o.terms_) {
        std::vector<int> e = ea;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  Poly minus(const Poly& o) const {
    Poly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, -c);
    return out;
  }

  Poly plus(const Poly& o) const {
    Poly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
  }

  Poly mul_by_i() const {
    Poly out(lo_, hi_);
    for (const auto& [e, c] : terms_) out.add_term(e, mul_i(c));
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  std::size_t term_count() const { return terms_.size(); }

  /// i sum_j (dF/du_j dG/dubar_j - dF/dubar_j dG/du_j)
  static Poly canonical_bracket(const Poly& f, const Poly& g) {
    Poly acc(f.lo(), f.hi());
    const std::size_t sites = static_cast<std::size_t>(f.hi() - f.lo() + 1);
    for (std::size_t j = 0; j < sites; ++j) {
      acc = acc.plus(f.derivative(j).times(g.derivative(sites + j)));
      acc = acc.minus(f.derivative(sites + j).times(g.derivative(j)));
    }
    return acc.mul_by_i();
  }

 private:
  Site lo_, hi_;
  std::map<std::vector<int>, CRational> terms_;
};

}  // namespace oracle
