#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "birkhoff/gevrey.hpp"
#include "test_util.hpp"

using namespace birkhoff;
using testutil::mi;
using testutil::sparse_random;

namespace {

HamiltonianD one_term(const MultiIndex& alpha, const MultiIndex& beta, double re, double im,
                      int cap) {
  return HamiltonianD::build(std::vector<HamiltonianD::Term>{{alpha, beta, CDouble(re, im)}},
                             DegreeCap(cap));
}

// dense grid oracle for the simplex maximum of |Y|^2, supports of size <= 3
double grid_norm(const MonomialKey& key, double abs_coeff, const GevreyParams& params, int n) {
  auto f = detail::monomial_field(key, abs_coeff, params);
  auto value = [&](const std::vector<double>& t) {
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
  };
  double best = 0;
  if (f.sites.size() == 1) return f.w[0];
  if (f.sites.size() == 2) {
    for (int a = 0; a <= n; ++a) {
      std::vector<double> t{double(a) / n, double(n - a) / n};
      best = std::max(best, value(t));
    }
  } else {
    REQUIRE(f.sites.size() == 3);
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b) {
        std::vector<double> t{double(a) / n, double(b) / n, double(n - a - b) / n};
        best = std::max(best, value(t));
      }
  }
  return std::sqrt(best);
}

}  // namespace

TEST_CASE("weight basics") {
  GevreyParams params(0.7, 1.3, 1.0, 0.5);
  SUBCASE("diagonal quadratic weight is one") {
    for (Site j : {-3, 0, 1, 5}) {
      CHECK(gevrey_weight(j, mi({{j, 1}}), mi({{j, 1}}), params) == doctest::Approx(1.0));
      CHECK(gevrey_weight(j, mi({{j, 1}}), mi({{j, 1}}), GevreyParams(2.0, 0.1, 3.0, 0.9)) ==
            doctest::Approx(1.0));
    }
  }
  SUBCASE("unsupported site") {
    CHECK_THROWS_AS(gevrey_weight(2, mi({{1, 1}}), mi({{1, 1}}), params), Error);
  }
  SUBCASE("radius scaling identity") {
    auto alpha = mi({{1, 2}, {-2, 1}});
    auto beta = mi({{0, 3}});
    REQUIRE(momentum(alpha, beta) == 0);
    int deg = scaling_degree(alpha, beta);
    for (double r2 : {0.3, 0.5, 0.69}) {
      double ratio = gevrey_weight(1, alpha, beta, params.with_r(r2)) /
                     gevrey_weight(1, alpha, beta, params);
      CHECK(std::abs(ratio - std::pow(r2 / params.r, deg)) <=
            1e-12 * std::pow(r2 / params.r, deg));
    }
  }
  SUBCASE("smoothing ratio never exceeds one on momentum-zero keys") {
    for_each_momentum_zero_pair(-3, 3, 5, [&](const MultiIndex& a, const MultiIndex& b) {
      MultiIndex v = a.plus(b);
      for (const auto& [j, e] : v.entries()) {
        CHECK(smoothing_gap(j, a, b, params.theta) >= -1e-12);
        double ratio =
            gevrey_weight(j, a, b, params.with_s(params.s + 0.4)) / gevrey_weight(j, a, b, params);
        CHECK(ratio <= 1.0 + 1e-12);
      }
    });
  }
}

TEST_CASE("majorant field") {
  GevreyParams params(0.5, 0.8, 0.5, 0.5);
  SUBCASE("diagonal quadratic") {
    auto h = one_term(mi({{2, 1}}), mi({{2, 1}}), 0.7, 0.0, 4);
    SiteMap y{{2, 0.3}};
    auto field = majorant_field(h, y, params);
    REQUIRE(field.count(2) == 1);
    CHECK(field[2] == doctest::Approx(0.7 * 0.3));
  }
  SUBCASE("zero point kills positive-order fields") {
    auto h = one_term(mi({{1, 1}, {-1, 1}}), mi({{0, 2}}), 1.0, 2.0, 4);
    CHECK(majorant_field(h, SiteMap{}, params).empty());
  }
  SUBCASE("single monomial closed form") {
    auto alpha = mi({{1, 1}, {-1, 1}});
    auto beta = mi({{0, 2}});
    auto h = one_term(alpha, beta, 3.0, -4.0, 4);
    SiteMap y{{-1, 0.2}, {0, 0.5}, {1, 0.9}};
    auto field = majorant_field(h, y, params);
    // v = (1, 2, 1) on sites (-1, 0, 1); |c| = 5; the conjugate orientation doubles it
    double c0 = 2 * 5.0 * 0.5 * gevrey_weight(-1, alpha, beta, params) * 0.5 * 0.5 * 0.9;
    CHECK(field[-1] == doctest::Approx(c0));
    double c1 = 2 * 5.0 * 1.0 * gevrey_weight(0, alpha, beta, params) * 0.2 * 0.5 * 0.9;
    CHECK(field[0] == doctest::Approx(c1));
  }
  SUBCASE("rejects negative y") {
    auto h = one_term(mi({{1, 1}}), mi({{1, 1}}), 1.0, 0.0, 4);
    CHECK_THROWS_AS(majorant_field(h, SiteMap{{1, -0.1}}, params), Error);
  }
}

TEST_CASE("monomial norm") {
  GevreyParams params(0.8, 0.6, 0.5, 0.5);
  SUBCASE("quadratic diagonal") {
    CHECK(monomial_norm(MonomialKey{mi({{3, 1}}), mi({{3, 1}})}, 2.5, params) ==
          doctest::Approx(2.5));
    CHECK(monomial_norm(MonomialKey{mi({{3, 1}}), mi({{3, 1}})}, 0.0, params) == 0.0);
  }
  SUBCASE("grid validation on small supports") {
    std::vector<MonomialKey> keys = {
        {mi({{1, 1}, {-1, 1}}), mi({{0, 2}})},    // three sites
        {mi({{2, 2}}), mi({{1, 2}, {3, 1}, {-1, 1}})},  // momentum zero? 4 = 2+3-1 yes
        {mi({{1, 2}}), mi({{2, 1}, {0, 1}})},     // three sites, degree 1
        {mi({{1, 1}, {-1, 1}}), MultiIndex()},    // two sites
    };
    for (const auto& key : keys) {
      if (momentum(key.alpha, key.beta) != 0) continue;
      MultiIndex v = key.alpha.plus(key.beta);
      if (v.entries().size() > 3) continue;
      double got = monomial_norm(key, 1.3, params);
      double want = grid_norm(key, 1.3, params, 400);
      CHECK(got >= want * (1 - 1e-4));     // ascent must not fall below the grid
      CHECK(got <= want * (1 + 5e-3) + 1e-12);  // and the grid approximates the sup
    }
  }
}

TEST_CASE("norm upper and lower") {
  GevreyParams params(0.9, 0.4, 0.5, 0.5);
  SUBCASE("single monomial: upper equals the monomial norm") {
    auto key = MonomialKey{mi({{1, 1}, {-1, 1}}), mi({{0, 2}})};
    auto h = one_term(key.alpha, key.beta, 0.3, 0.4, 4);
    CHECK(norm_upper(h, params) == doctest::Approx(2 * monomial_norm(key, 0.5, params)));
    CHECK(norm_lower(h, params, 10000, 7) <= norm_upper(h, params));
    CHECK(norm_lower(h, params, 10000, 7) >=
          0.95 * norm_upper(h, params));  // 4-site support, 1e4 samples
  }
  SUBCASE("diagonal quadratic window") {
    Frequency freq = sample_frequency(3);
    auto d = d_omega<CDouble>(freq, -2, 2, DegreeCap(2));
    double biggest = 0, sum = 0;
    for (const auto& [key, c] : d.terms()) {
      biggest = std::max(biggest, std::abs(c.re));
      sum += std::abs(c.re);
    }
    CHECK(norm_upper(d, params) == doctest::Approx(sum));
    double lower = norm_lower(d, params, 20000, 11);
    CHECK(lower <= biggest * (1 + 1e-9));  // true norm is the max
    CHECK(lower >= 0.9 * biggest);
    CHECK(lower <= norm_upper(d, params));
  }
  SUBCASE("zero Hamiltonian") {
    CHECK(norm_lower(HamiltonianD::zero(DegreeCap(4)), params, 10, 1) == 0.0);
    CHECK(norm_upper(HamiltonianD::zero(DegreeCap(4)), params) == 0.0);
  }
  SUBCASE("radius scaling bound") {
    for (std::uint64_t seed : {31u, 32u, 33u}) {
      auto h = sparse_random<CDouble>(seed, -2, 2, 1, 4, 6);
      REQUIRE(!h.empty());
      for (double r2 : {0.3, 0.6}) {
        double lhs = norm_upper(h, params.with_r(r2));
        double rhs = std::pow(r2 / params.r, h.min_degree()) * norm_upper(h, params);
        CHECK(lhs <= rhs * (1 + 1e-10));
      }
    }
  }
  SUBCASE("monotone in the width") {
    auto h = sparse_random<CDouble>(41, -2, 2, 1, 4, 6);
    CHECK(norm_upper(h, params.with_s(params.s + 0.7)) <= norm_upper(h, params) * (1 + 1e-12));
  }
  SUBCASE("sandwich on random instances") {
    for (std::uint64_t seed = 50; seed < 60; ++seed) {
      auto h = sparse_random<CDouble>(seed, -2, 2, 1, 4, 8);
      CHECK(norm_lower(h, params, 2000, seed) <= norm_upper(h, params) * (1 + 1e-12));
    }
  }
}

TEST_CASE("norm inequality shadows") {
  GevreyParams params(0.5, 0.3, 0.5, 0.5);
  SUBCASE("quadratic pair holds with margin") {
    auto f = one_term(mi({{1, 1}}), mi({{1, 1}}), 0.4, 0.0, 8);
    auto g = one_term(mi({{2, 1}}), mi({{2, 1}}), 0.3, 0.0, 8);
    auto report = verify_norm_inequalities(f, g, params, 0.25, DegreeCap(8));
    CHECK(report.all_ok());
    REQUIRE(!report.checks.empty());
    CHECK(report.checks.front().name == "bracket");
    CHECK(report.checks.front().lhs == 0.0);  // normal forms commute
  }
  SUBCASE("random cubic pair") {
    for (std::uint64_t seed : {61u, 62u, 63u}) {
      auto f = sparse_random<CDouble>(seed, -2, 2, 1, 3, 4);
      auto g = sparse_random<CDouble>(seed + 10, -2, 2, 1, 3, 4);
      auto report = verify_norm_inequalities(f, g, params, 0.25, DegreeCap(9));
      for (const auto& c : report.checks) {
        INFO(c.name);
        CHECK(c.ok);
        CHECK(c.margin >= 0);
      }
    }
  }
  SUBCASE("vanishing rho flags the constant") {
    auto f = one_term(mi({{1, 1}}), mi({{1, 1}}), 0.4, 0.0, 4);
    auto report = verify_norm_inequalities(f, f, params, 0.0, DegreeCap(4));
    CHECK(report.unbounded_constant);
    CHECK(report.checks.empty());
  }
}
