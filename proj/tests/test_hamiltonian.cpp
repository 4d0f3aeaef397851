#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "birkhoff/hamiltonian.hpp"
#include "birkhoff/io.hpp"

using namespace birkhoff;

namespace {

MultiIndex mi(std::initializer_list<std::pair<Site, int>> pairs) {
  std::vector<MultiIndex::Entry> v(pairs.begin(), pairs.end());
  return MultiIndex::from_pairs(std::move(v));
}

template <class C>
Hamiltonian<C> build(std::vector<typename Hamiltonian<C>::Term> terms, int cap) {
  return Hamiltonian<C>::build(terms, DegreeCap(cap));
}

}  // namespace

TEST_CASE("build validation") {
  using H = HamiltonianQ;
  SUBCASE("valid diagonal") {
    auto h = build<CRational>({{mi({{1, 1}}), mi({{1, 1}}), CRational(Rational(2))}}, 4);
    CHECK(h.term_count() == 1);
    CHECK(h.min_degree() == 0);
  }
  SUBCASE("momentum violation") {
    CHECK_THROWS_WITH_AS(build<CRational>({{mi({{1, 1}}), mi({{2, 1}}), CRational(Rational(1))}}, 4),
                         doctest::Contains("momentum"), Error);
  }
  SUBCASE("forbidden constant and linear") {
    CHECK_THROWS_AS(build<CRational>({{MultiIndex(), MultiIndex(), CRational(Rational(1))}}, 4),
                    Error);
    CHECK_THROWS_AS(build<CRational>({{mi({{0, 1}}), MultiIndex(), CRational(Rational(1))}}, 4),
                    Error);
  }
  SUBCASE("degree overflow") {
    CHECK_THROWS_AS(build<CRational>({{mi({{1, 3}}), mi({{3, 1}}), CRational(Rational(1))}}, 1),
                    Error);
  }
  SUBCASE("reality merge collapses conjugate orientations") {
    CRational c(Rational(1, 3), Rational(-2, 5));
    auto h = build<CRational>({{mi({{1, 1}, {-1, 1}}), mi({{0, 2}}), c},
                               {mi({{0, 2}}), mi({{1, 1}, {-1, 1}}), conj(c)}},
                              4);
    CHECK(h.term_count() == 1);
    CHECK(h.coeff(mi({{1, 1}, {-1, 1}}), mi({{0, 2}})) == c);
    CHECK(h.coeff(mi({{0, 2}}), mi({{1, 1}, {-1, 1}})) == conj(c));
  }
  SUBCASE("reality conflict") {
    CRational c(Rational(1), Rational(1));
    CHECK_THROWS_WITH_AS(build<CRational>({{mi({{1, 1}, {-1, 1}}), mi({{0, 2}}), c},
                                           {mi({{0, 2}}), mi({{1, 1}, {-1, 1}}), c}},
                                          4),
                         doctest::Contains("conjugate"), Error);
    CHECK_THROWS_AS(build<CRational>({{mi({{1, 1}}), mi({{1, 1}}), c}}, 4), Error);
  }
  SUBCASE("zero drop") {
    auto h = build<CRational>({{mi({{1, 1}}), mi({{1, 1}}), CRational(Rational(0))}}, 4);
    CHECK(h.empty());
  }
  (void)sizeof(H);
}

TEST_CASE("projections split and recompose") {
  CRational one{Rational(1)};
  auto h = build<CRational>({{mi({{1, 1}}), mi({{1, 1}}), one},
                             {mi({{1, 1}, {2, 1}}), mi({{1, 1}, {2, 1}}), one},
                             {mi({{1, 1}, {-1, 1}}), mi({{0, 2}}), CRational(Rational(1), Rational(2))},
                             {mi({{2, 1}, {-2, 1}}), mi({{0, 2}}), one}},
                            6);
  auto k = project_k(h);
  auto r = project_r(h);
  CHECK(k.term_count() == 2);
  CHECK(r.term_count() == 2);
  CHECK(k + r == h);
  CHECK(project_r(k).empty());
  CHECK(project_k(r).empty());
  // degree projectors partition
  auto low = project_degree_le(h, 1);
  auto high = project_degree_ge(h, 2);
  CHECK(low + high == h);
  CHECK(project_degree_eq(h, 0).term_count() == 1);
}

TEST_CASE("coefficient lookup honors reality") {
  CRational c(Rational(3, 7), Rational(-1, 2));
  auto h = build<CRational>({{mi({{1, 1}, {-1, 1}}), mi({{0, 2}}), c}}, 4);
  for (const auto& [key, val] : h.terms()) {
    CHECK(h.coeff(key.alpha, key.beta) == val);
    CHECK(h.coeff(key.beta, key.alpha) == conj(val));
  }
}

TEST_CASE("d_omega") {
  SUBCASE("resonant frequency on a window") {
    auto d = d_omega<CRational>(Frequency::resonant(), -1, 1, DegreeCap(4));
    CHECK(d.term_count() == 2);  // site 0 has omega = 0
    CHECK(d.coeff(mi({{1, 1}}), mi({{1, 1}})) == CRational(Rational(1)));
    CHECK(d.coeff(mi({{-1, 1}}), mi({{-1, 1}})) == CRational(Rational(1)));
  }
  SUBCASE("perturbed frequency stays in the band") {
    Frequency freq = sample_frequency(7);
    auto d = d_omega<CDouble>(freq, -3, 3, DegreeCap(2));
    for (const auto& [key, c] : d.terms()) {
      Site j = key.alpha.entries().front().first;
      CHECK(std::abs(c.re - j * j) <= 0.5);
      CHECK(c.im == 0.0);
    }
  }
  SUBCASE("empty window") {
    CHECK(d_omega<CDouble>(sample_frequency(7), 2, 1, DegreeCap(2)).empty());
  }
}

TEST_CASE("majorant") {
  auto h = build<CRational>({{mi({{1, 1}, {-1, 1}}), mi({{0, 2}}), CRational(Rational(-3), Rational(4))}}, 4);
  auto m = majorant(h);
  CHECK(m.coeff(mi({{1, 1}, {-1, 1}}), mi({{0, 2}})) == CRational(Rational(5)));
  CHECK(majorant(m) == m);

  // triangle inequality coefficientwise, float mode
  auto a = random_hamiltonian<CDouble>(11, -2, 2, 1, DegreeCap(4), 0.5, 1.0);
  auto b = random_hamiltonian<CDouble>(12, -2, 2, 1, DegreeCap(4), 0.5, 1.0);
  auto lhs = majorant(a + b);
  auto rhs = majorant(a) + majorant(b);
  for (const auto& [key, c] : lhs.terms()) {
    CHECK(c.im == 0.0);
    CHECK(c.re <= rhs.coeff(key.alpha, key.beta).re + 1e-12);
  }
}

TEST_CASE("random hamiltonian") {
  auto a = random_hamiltonian<CDouble>(42, -3, 3, 1, DegreeCap(4), 0.3, 1.0);
  auto b = random_hamiltonian<CDouble>(42, -3, 3, 1, DegreeCap(4), 0.3, 1.0);
  CHECK(a == b);
  CHECK_FALSE(a.empty());
  CHECK(a.min_degree() >= 1);
  CHECK(random_hamiltonian<CDouble>(42, -3, 3, 1, DegreeCap(4), 0.0, 1.0).empty());
  // all keys pass validation by construction: rebuild from terms
  std::vector<HamiltonianD::Term> terms;
  for (const auto& [key, c] : a.terms()) terms.push_back({key.alpha, key.beta, c});
  CHECK(HamiltonianD::build(terms, DegreeCap(4)) == a);

  auto exact = random_hamiltonian<CRational>(42, -3, 3, 1, DegreeCap(4), 0.3, 1.0);
  CHECK(exact.term_count() == a.term_count());
}

TEST_CASE("file round trip") {
  SUBCASE("exact mode is bit-exact") {
    auto h = random_hamiltonian<CRational>(5, -2, 2, 1, DegreeCap(5), 0.4, 1.0);
    std::stringstream ss;
    save_hamiltonian(ss, h);
    auto back = load_hamiltonian<CRational>(ss);
    CHECK(back == h);
    CHECK(back.degree_cap() == h.degree_cap());
  }
  SUBCASE("float mode round-trips the shortest decimal") {
    auto h = random_hamiltonian<CDouble>(6, -2, 2, 1, DegreeCap(5), 0.4, 0.37);
    std::stringstream ss;
    save_hamiltonian(ss, h);
    CHECK(load_hamiltonian<CDouble>(ss) == h);
  }
  SUBCASE("parse errors carry line numbers") {
    std::stringstream ss("degree_cap 4\n{1:1} {1:1} nonsense 0\n");
    CHECK_THROWS_WITH_AS(load_hamiltonian<CDouble>(ss), doctest::Contains("line 2"), Error);
    std::stringstream missing("{1:1} {1:1} 1 0\n");
    CHECK_THROWS_AS(load_hamiltonian<CDouble>(missing), Error);
  }
  SUBCASE("comments and both orientations accepted") {
    std::stringstream ss(
        "# sample\n"
        "degree_cap 4\n"
        "{0:2} {1:1,-1:1} 1/2 1/3\n"
        "{1:1,-1:1} {0:2} 1/2 -1/3\n");
    auto h = load_hamiltonian<CRational>(ss);
    CHECK(h.term_count() == 1);
    CHECK(h.coeff(mi({{0, 2}}), mi({{1, 1}, {-1, 1}})) ==
          CRational(Rational(1, 2), Rational(1, 3)));
  }
}
