#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "birkhoff/hamiltonian.hpp"

namespace birkhoff {

namespace detail {

template <class C>
struct OrientedTerm {
  int degree;
  MultiIndex alpha;
  MultiIndex beta;
  C coeff;
};

template <class C>
std::vector<OrientedTerm<C>> oriented_by_degree(const Hamiltonian<C>& h) {
  std::vector<OrientedTerm<C>> out;
  out.reserve(2 * h.term_count());
  h.for_each_oriented([&](const MultiIndex& a, const MultiIndex& b, const C& c) {
    out.push_back({MonomialKey{a, b}.degree(), a, b, c});
  });
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return std::tie(x.degree, x.alpha, x.beta) < std::tie(y.degree, y.alpha, y.beta);
  });
  return out;
}

}  // namespace detail

/// Poisson bracket {F, G} = i sum_j (dF/du_j dG/dubar_j - dF/dubar_j dG/du_j),
/// exact in degrees <= cap. Since bracket degrees add, pairs whose degree sum
/// exceeds the cap are skipped up front.
template <class C>
Hamiltonian<C> poisson(const Hamiltonian<C>& f, const Hamiltonian<C>& g, DegreeCap cap) {
  using Real = typename scalar_traits<C>::real_type;
  Accumulator<C> acc(cap, f.drop_threshold());
  if (f.empty() || g.empty()) return acc.take();
  auto ft = detail::oriented_by_degree(f);
  auto gt = detail::oriented_by_degree(g);
  for (const auto& t1 : ft) {
    if (t1.degree + gt.front().degree > cap.cap) break;
    for (const auto& t2 : gt) {
      if (t1.degree + t2.degree > cap.cap) break;
      C c12 = t1.coeff * t2.coeff;
      // derivative sites must appear in both factors
      for (const auto& [j, e1a] : t1.alpha.entries()) {
        std::int64_t factor = static_cast<std::int64_t>(e1a) * t2.beta.exponent(j) -
                              static_cast<std::int64_t>(t1.beta.exponent(j)) * t2.alpha.exponent(j);
        if (factor == 0) continue;
        acc.add(*t1.alpha.plus(t2.alpha).minus_unit(j), *t1.beta.plus(t2.beta).minus_unit(j),
                mul_i(c12 * Real(factor)));
      }
      for (const auto& [j, e1b] : t1.beta.entries()) {
        if (t1.alpha.contains(j)) continue;  // already handled above
        std::int64_t factor = -static_cast<std::int64_t>(e1b) * t2.alpha.exponent(j);
        if (factor == 0) continue;
        acc.add(*t1.alpha.plus(t2.alpha).minus_unit(j), *t1.beta.plus(t2.beta).minus_unit(j),
                mul_i(c12 * Real(factor)));
      }
    }
  }
  return acc.take();
}

/// ad_S^k H, truncated at cap. ad_S^0 H = H (itself truncated).
template <class C>
Hamiltonian<C> ad_power(const Hamiltonian<C>& s, const Hamiltonian<C>& h, int k, DegreeCap cap) {
  if (k < 0) fail(Errc::validation, "ad power needs k >= 0");
  Hamiltonian<C> x = project_degree_le(h, cap.cap);
  for (int i = 0; i < k && !x.empty(); ++i) x = poisson(s, x, cap);
  return x;
}

/// exp(ad_S) H = sum_k ad_S^k H / k!, exact at the truncation. The sum
/// terminates because every bracket raises the scaling degree by at least
/// min_degree(S) >= 1.
template <class C>
Hamiltonian<C> lie_transform(const Hamiltonian<C>& s, const Hamiltonian<C>& h, DegreeCap cap) {
  using Real = typename scalar_traits<C>::real_type;
  if (!s.empty() && s.min_degree() < 1)
    fail(Errc::order_violation, "generator must have scaling order >= 1");
  Accumulator<C> acc(cap, h.drop_threshold());
  Hamiltonian<C> term = project_degree_le(h, cap.cap);
  acc.add_hamiltonian(term, Real(1));
  for (int k = 1; !term.empty() && !s.empty(); ++k) {
    term = scale(poisson(s, term, cap), Real(1) / Real(k));
    acc.add_hamiltonian(term, Real(1));
  }
  return acc.take();
}

namespace detail {

/// Nested ad value of a two-letter word: the last letter is the operand,
/// every preceding letter acts by ad. Values are cached per suffix, so the
/// enumeration below costs one bracket per distinct word.
template <class C>
class WordBrackets {
 public:
  WordBrackets(const Hamiltonian<C>& f, const Hamiltonian<C>& g, DegreeCap cap)
      : f_(f), g_(g), cap_(cap) {}

  const Hamiltonian<C>& eval(const std::string& word) {
    auto it = cache_.find(word);
    if (it != cache_.end()) return it->second;
    Hamiltonian<C> value = Hamiltonian<C>::zero(cap_);
    if (word.size() == 1) {
      value = project_degree_le(word[0] == 'F' ? f_ : g_, cap_.cap);
    } else {
      const Hamiltonian<C>& inner = eval(word.substr(1));
      value = poisson(word[0] == 'F' ? f_ : g_, inner, cap_);
    }
    return cache_.emplace(word, std::move(value)).first->second;
  }

 private:
  const Hamiltonian<C>& f_;
  const Hamiltonian<C>& g_;
  DegreeCap cap_;
  std::map<std::string, Hamiltonian<C>> cache_;
};

}  // namespace detail

/// Baker-Campbell-Hausdorff generator: K with e^{{K,.}} = e^{{G,.}} e^{{F,.}}
/// up to cap, via the explicit series with nested brackets of the block
/// words G^{r_1} F^{s_1} ... G^{r_n} F^{s_n}. Blocks with
/// n min(d_F, d_G) above the cap are skipped a priori; within a level terms
/// are summed in (n, r, s)-lexicographic order so float results are
/// reproducible. K - F - G has scaling order >= d_F + d_G.
template <class C>
Hamiltonian<C> bch(const Hamiltonian<C>& g, const Hamiltonian<C>& f, DegreeCap cap) {
  using Real = typename scalar_traits<C>::real_type;
  if (f.empty()) return project_degree_le(g, cap.cap);
  if (g.empty()) return project_degree_le(f, cap.cap);
  const int df = f.min_degree();
  const int dg = g.min_degree();
  if (df < 1 || dg < 1) fail(Errc::order_violation, "bch needs generators of scaling order >= 1");

  detail::WordBrackets<C> words(f, g, cap);
  Accumulator<C> acc(cap, f.drop_threshold());

  std::vector<Real> factorial(static_cast<std::size_t>(cap.cap) + 2, Real(1));
  for (std::size_t k = 1; k < factorial.size(); ++k) factorial[k] = factorial[k - 1] * Real(static_cast<std::int64_t>(k));

  struct Block {
    int r, s;
  };
  std::vector<Block> blocks;
  std::string word;

  // Depth-first over block sequences with total weight r*dg + s*df <= cap.
  // A sequence contributes only when it ends in a single F (operand F) or in
  // a single trailing G block with r_n = 1 (operand G).
  auto emit = [&]() {
    const Block last = blocks.back();
    if (!(last.s == 1 || (last.s == 0 && last.r == 1))) return;
    int letters = 0;
    Real denom_fact(1);
    for (const Block& b : blocks) {
      letters += b.r + b.s;
      denom_fact = denom_fact * factorial[static_cast<std::size_t>(b.r)] *
                   factorial[static_cast<std::size_t>(b.s)];
    }
    const int n = static_cast<int>(blocks.size());
    Real coeff = Real(1) / (Real(n) * Real(letters) * denom_fact);
    if (n % 2 == 0) coeff = -coeff;
    const Hamiltonian<C>& value = words.eval(word);
    if (!value.empty()) acc.add_hamiltonian(value, coeff);
  };

  std::function<void(int)> rec = [&](int budget) {
    for (int r = 0; r * dg <= budget; ++r) {
      for (int s = (r == 0 ? 1 : 0); r * dg + s * df <= budget; ++s) {
        blocks.push_back({r, s});
        word.append(static_cast<std::size_t>(r), 'G');
        word.append(static_cast<std::size_t>(s), 'F');
        emit();
        rec(budget - r * dg - s * df);
        word.resize(word.size() - static_cast<std::size_t>(r + s));
        blocks.pop_back();
      }
    }
  };
  rec(cap.cap);
  return acc.take();
}

/// Single generator of the composition e^{{S_k,.}} ... e^{{S_1,.}} of an
/// ordered list (first applied first), by iterated bch. Stabilizes in
/// degrees <= cap once generators pass the cap.
template <class C>
Hamiltonian<C> compose_generators(std::span<const Hamiltonian<C>> generators, DegreeCap cap) {
  std::vector<const Hamiltonian<C>*> gens;
  int last_degree = 0;
  for (const auto& s : generators) {
    if (s.empty()) continue;
    const int d = s.min_degree();
    if (d < 1 || d <= last_degree)
      fail(Errc::order_violation, "generator orders must be strictly increasing and >= 1");
    last_degree = d;
    gens.push_back(&s);
  }
  if (gens.empty()) return Hamiltonian<C>::zero(cap);
  Hamiltonian<C> composed = project_degree_le(*gens.front(), cap.cap);
  for (std::size_t k = 1; k < gens.size(); ++k) {
    if (gens[k]->min_degree() > cap.cap) break;  // cannot affect degrees <= cap
    composed = bch(*gens[k], composed, cap);
  }
  return composed;
}

}  // namespace birkhoff
