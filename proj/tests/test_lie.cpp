#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "birkhoff/lie.hpp"
#include "birkhoff/normal_form.hpp"
#include "oracle_poly.hpp"
#include "test_util.hpp"

using namespace birkhoff;

namespace {

MultiIndex mi(std::initializer_list<std::pair<Site, int>> pairs) {
  std::vector<MultiIndex::Entry> v(pairs.begin(), pairs.end());
  return MultiIndex::from_pairs(std::move(v));
}

HamiltonianQ rand_q(std::uint64_t seed, int min_degree, int cap, std::size_t terms = 6) {
  return testutil::sparse_random<CRational>(seed, -2, 2, min_degree, cap, terms);
}

}  // namespace

TEST_CASE("bracket with the quadratic diagonal") {
  // {D, G} computed two ways: explicit bracket with the windowed quadratic
  // and the frequency formula i omega.(beta - alpha) G
  Frequency freq = sample_frequency(3);
  auto d = d_omega<CRational>(freq, -4, 4, DegreeCap(8));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto g = rand_q(seed, 1, 4);
    auto direct = poisson(d, g, DegreeCap(8));
    auto lazy = ad_d_omega(freq, g);
    CHECK(direct == lazy);
  }
}

TEST_CASE("antisymmetry and bilinearity") {
  for (std::uint64_t seed : {10u, 11u}) {
    auto f = rand_q(seed, 1, 4);
    auto g = rand_q(seed + 100, 1, 4);
    DegreeCap cap(10);
    CHECK(poisson(f, f, cap).empty());
    CHECK(poisson(f, g, cap) + poisson(g, f, cap) == Hamiltonian<CRational>::zero(DegreeCap(10)));
    // additivity in the left slot
    auto h = rand_q(seed + 200, 1, 4);
    CHECK(poisson(f + h, g, cap) == poisson(f, g, cap) + poisson(h, g, cap));
    // real scalar linearity
    CHECK(poisson(scale(f, Rational(3, 7)), g, cap) == scale(poisson(f, g, cap), Rational(3, 7)));
  }
}

TEST_CASE("jacobi identity") {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    auto f = rand_q(seed, 1, 3, 4);
    auto g = rand_q(seed + 50, 1, 3, 4);
    auto h = rand_q(seed + 90, 1, 3, 4);
    DegreeCap cap(9);  // double brackets stay exact
    auto lhs = poisson(f, poisson(g, h, cap), cap) + poisson(g, poisson(h, f, cap), cap) +
               poisson(h, poisson(f, g, cap), cap);
    CHECK(lhs.empty());
  }
}

TEST_CASE("filtration") {
  auto f = rand_q(31, 2, 4);
  auto g = rand_q(32, 1, 3);
  REQUIRE(!f.empty());
  REQUIRE(!g.empty());
  auto fg = poisson(f, g, DegreeCap(7));
  if (!fg.empty()) CHECK(fg.min_degree() >= f.min_degree() + g.min_degree());
}

TEST_CASE("bracket closure keeps momentum and reality") {
  auto f = rand_q(41, 1, 4);
  auto g = rand_q(42, 1, 4);
  auto fg = poisson(f, g, DegreeCap(8));
  for (const auto& [key, c] : fg.terms()) {
    CHECK(momentum(key.alpha, key.beta) == 0);
    CHECK(fg.coeff(key.beta, key.alpha) == conj(c));
  }
}

TEST_CASE("bracket equals the differentiation oracle") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto f = testutil::sparse_random<CRational>(rng::mix64(900, seed), -3, 3, 1, 4, 12);
    auto g = testutil::sparse_random<CRational>(rng::mix64(901, seed), -3, 3, 1, 4, 12);
    auto fg = poisson(f, g, DegreeCap(8));
    auto of = oracle::Poly::from_hamiltonian(f, -3, 3);
    auto og = oracle::Poly::from_hamiltonian(g, -3, 3);
    auto want = oracle::Poly::canonical_bracket(of, og);
    CHECK(oracle::Poly::from_hamiltonian(fg, -3, 3) == want);
  }
}

TEST_CASE("ad powers") {
  auto s = rand_q(51, 2, 4);
  auto h = rand_q(52, 1, 3);
  REQUIRE(!s.empty());
  REQUIRE(!h.empty());
  DegreeCap cap(12);
  CHECK(ad_power(s, h, 0, cap) == project_degree_le(h, 12));
  for (int k : {1, 2, 3}) {
    auto a = ad_power(s, h, k, cap);
    if (!a.empty()) CHECK(a.min_degree() >= h.min_degree() + k * s.min_degree());
  }
  // filtration kill: k min(s) beyond the cap
  CHECK(ad_power(s, h, 7, cap).empty());
  CHECK_THROWS_AS(ad_power(s, h, -1, cap), Error);
}

TEST_CASE("lie transform") {
  DegreeCap cap(8);
  auto h = rand_q(61, 1, 4);
  SUBCASE("zero generator is the identity") {
    CHECK(lie_transform(HamiltonianQ::zero(DegreeCap(8)), h, cap) == project_degree_le(h, 8));
  }
  SUBCASE("group inverse") {
    auto s = rand_q(62, 1, 3, 4);
    auto forward = lie_transform(s, h, cap);
    auto back = lie_transform(scale(s, Rational(-1)), forward, cap);
    CHECK(back == project_degree_le(h, 8));
  }
  SUBCASE("expansion order on the quadratic part") {
    Frequency freq = sample_frequency(5);
    auto s = rand_q(63, 1, 3, 3);
    REQUIRE(!s.empty());
    // e^{ad_S}(D + 0) - D - {S, D} has order >= 2 min_degree(S)
    auto transformed = conjugate_with_d(freq, s, HamiltonianQ::zero(DegreeCap(12)), DegreeCap(12));
    auto linear_part = scale(ad_d_omega(freq, s), Rational(-1));
    auto tail = transformed - linear_part;
    if (!tail.empty()) CHECK(tail.min_degree() >= 2 * s.min_degree());
  }
  SUBCASE("order violation") {
    auto bad = d_omega<CRational>(Frequency::resonant(), -1, 1, DegreeCap(4));
    CHECK_THROWS_AS(lie_transform(bad, h, cap), Error);
  }
}

TEST_CASE("bch") {
  DegreeCap cap(8);
  SUBCASE("one-sided identities") {
    auto g = rand_q(71, 1, 4);
    CHECK(bch(g, HamiltonianQ::zero(DegreeCap(8)), cap) == project_degree_le(g, 8));
    CHECK(bch(HamiltonianQ::zero(DegreeCap(8)), g, cap) == project_degree_le(g, 8));
  }
  SUBCASE("commuting generators add") {
    // normal-form elements commute pairwise
    CRational one{Rational(1)};
    auto f = HamiltonianQ::build(
        std::vector<HamiltonianQ::Term>{{mi({{1, 1}, {2, 1}}), mi({{1, 1}, {2, 1}}), one}},
        DegreeCap(8));
    auto g = HamiltonianQ::build(
        std::vector<HamiltonianQ::Term>{{mi({{0, 1}, {3, 1}}), mi({{0, 1}, {3, 1}}), one}},
        DegreeCap(8));
    CHECK(poisson(f, g, cap).empty());
    CHECK(bch(g, f, cap) == f + g);
  }
  SUBCASE("defining property") {
    for (std::uint64_t seed : {81u, 82u, 83u}) {
      auto f = rand_q(seed, 1, 3, 3);
      auto g = rand_q(seed + 10, 1, 3, 3);
      auto h = rand_q(seed + 20, 1, 3, 3);
      auto k = bch(g, f, cap);
      CHECK(!k.empty());
      auto diff = k - f - g;
      bool order_ok = diff.empty() || diff.min_degree() >= f.min_degree() + g.min_degree();
      CHECK(order_ok);
      auto via_k = lie_transform(k, h, cap);
      auto nested = lie_transform(g, lie_transform(f, h, cap), cap);
      CHECK(via_k == nested);
    }
  }
  SUBCASE("order violation") {
    auto quad = d_omega<CRational>(Frequency::resonant(), -1, 1, DegreeCap(8));
    auto f = rand_q(91, 1, 3);
    CHECK_THROWS_AS(bch(quad, f, DegreeCap(8)), Error);
  }
}

TEST_CASE("compose generators") {
  DegreeCap cap(6);
  auto s1 = rand_q(101, 1, 1, 3);
  auto s2 = rand_q(102, 2, 2, 3);
  auto s3 = rand_q(103, 3, 3, 3);
  REQUIRE(!s1.empty());
  REQUIRE(!s2.empty());
  REQUIRE(!s3.empty());
  SUBCASE("single element") {
    std::vector<HamiltonianQ> gens{s1};
    CHECK(compose_generators(std::span<const HamiltonianQ>(gens), cap) ==
          project_degree_le(s1, 6));
  }
  SUBCASE("two elements match bch") {
    std::vector<HamiltonianQ> gens{s1, s2};
    CHECK(compose_generators(std::span<const HamiltonianQ>(gens), cap) == bch(s2, s1, cap));
  }
  SUBCASE("acts like the ordered product") {
    std::vector<HamiltonianQ> gens{s1, s2, s3};
    auto composed = compose_generators(std::span<const HamiltonianQ>(gens), cap);
    auto h = rand_q(104, 1, 3, 3);
    auto nested = lie_transform(s3, lie_transform(s2, lie_transform(s1, h, cap), cap), cap);
    CHECK(lie_transform(composed, h, cap) == nested);
  }
  SUBCASE("stability under high-order appends") {
    std::vector<HamiltonianQ> two{s1, s2};
    std::vector<HamiltonianQ> three{s1, s2, s3};
    auto a = compose_generators(std::span<const HamiltonianQ>(two), cap);
    auto b = compose_generators(std::span<const HamiltonianQ>(three), cap);
    CHECK(project_degree_le(a, 2) == project_degree_le(b, 2));
  }
  SUBCASE("order violation") {
    std::vector<HamiltonianQ> bad{s2, s1};
    CHECK_THROWS_AS(compose_generators(std::span<const HamiltonianQ>(bad), cap), Error);
  }
}
