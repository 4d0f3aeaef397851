#include "birkhoff/divisors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <map>
#include <mutex>
#include <thread>

namespace birkhoff {

double divisor_weight(const SignedIndex& ell, double gamma) {
  if (ell.is_zero()) fail(Errc::zero_vector, "divisor weight of the zero vector");
  double w = gamma;
  for (const auto& [site, val] : ell.entries()) {
    double mag = static_cast<double>(site_mag(site));
    double v = static_cast<double>(val);
    w /= 1.0 + v * v * mag * mag;
  }
  return w;
}

namespace {

// All l != 0 with |l| <= norm_cap, supp in [-site_cap, site_cap] and first
// nonzero entry positive, ordered by total norm then lexicographically.
const std::vector<SignedIndex>& ell_list(int norm_cap, Site site_cap) {
  static std::map<std::pair<int, Site>, std::vector<SignedIndex>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({norm_cap, site_cap});
  if (it != cache.end()) return it->second;

  std::vector<SignedIndex> out;
  std::vector<SignedIndex::Entry> current;
  std::function<void(Site, int, bool)> rec = [&](Site site, int budget, bool leading) {
    if (site > site_cap) {
      if (!current.empty()) out.push_back(SignedIndex::from_pairs(current));
      return;
    }
    rec(site + 1, budget, leading);
    for (int v = 1; v <= budget; ++v) {
      current.emplace_back(site, v);
      rec(site + 1, budget - v, false);
      current.pop_back();
      if (!leading) {  // first nonzero entry stays positive; -l is equivalent
        current.emplace_back(site, -v);
        rec(site + 1, budget - v, false);
        current.pop_back();
      }
    }
  };
  rec(-site_cap, norm_cap, true);
  std::sort(out.begin(), out.end(), [](const SignedIndex& a, const SignedIndex& b) {
    auto na = a.one_norm(), nb = b.one_norm();
    if (na != nb) return na < nb;
    return a < b;
  });
  return cache.emplace(std::make_pair(norm_cap, site_cap), std::move(out)).first->second;
}

int thread_count() {
  if (const char* env = std::getenv("BIRKHOFF_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// min over the cached list of |omega.l| * prod(1 + l_n^2 <n>^2)
double min_unit_ratio(const Frequency& omega, int norm_cap, Site site_cap,
                      const SignedIndex** worst) {
  const auto& ells = ell_list(norm_cap, site_cap);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ell : ells) {
    double dot = std::abs(omega.dot(ell));
    double ratio = dot / divisor_weight(ell, 1.0);
    if (ratio < best) {
      best = ratio;
      if (worst) *worst = &ell;
    }
  }
  return best;
}

}  // namespace

DiophantineCheck is_diophantine_up_to(const Frequency& omega, double gamma, int ell_norm_cap,
                                      Site site_cap) {
  if (ell_norm_cap < 1 || site_cap < 0) fail(Errc::validation, "caps must be positive");
  DiophantineCheck out;
  const SignedIndex* worst = nullptr;
  double unit = min_unit_ratio(omega, ell_norm_cap, site_cap, &worst);
  out.worst_ratio = unit / gamma;
  out.ok = out.worst_ratio > 1.0;
  if (worst) out.worst = *worst;
  return out;
}

std::vector<MeasureRow> measure_scan(const std::vector<double>& gammas, int ell_norm_cap,
                                     Site site_cap, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) fail(Errc::validation, "measure estimate needs n_samples >= 1");
  ell_list(ell_norm_cap, site_cap);  // fill the cache before going parallel

  std::vector<double> unit_ratios(static_cast<std::size_t>(n_samples));
  auto worker = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      Frequency omega(rng::mix64(seed, 0xd10f, static_cast<std::uint64_t>(k)), 1.0);
      unit_ratios[static_cast<std::size_t>(k)] =
          min_unit_ratio(omega, ell_norm_cap, site_cap, nullptr);
    }
  };
  int threads = std::min(thread_count(), n_samples);
  if (threads <= 1) {
    worker(0, n_samples);
  } else {
    std::vector<std::future<void>> futures;
    int chunk = (n_samples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      int begin = t * chunk, end = std::min(n_samples, begin + chunk);
      if (begin >= end) break;
      futures.push_back(std::async(std::launch::async, worker, begin, end));
    }
    for (auto& f : futures) f.get();
  }

  std::vector<MeasureRow> rows;
  for (double gamma : gammas) {
    MeasureRow row;
    row.gamma = gamma;
    row.samples = n_samples;
    for (double r : unit_ratios)
      if (r <= gamma) ++row.failures;
    row.fraction = static_cast<double>(row.failures) / n_samples;
    row.ci95 = 1.96 * std::sqrt(row.fraction * (1 - row.fraction) / n_samples);
    rows.push_back(row);
  }
  return rows;
}

MeasureRow measure_estimate(double gamma, int ell_norm_cap, Site site_cap, int n_samples,
                            std::uint64_t seed) {
  return measure_scan({gamma}, ell_norm_cap, site_cap, n_samples, seed).front();
}

namespace {

double theta_pow(Site j, double exponent) {
  return std::pow(static_cast<double>(site_mag(j)), exponent);
}

}  // namespace

LemmaReport verify_rearrangement_lemmas(Site lo, Site hi, int max_total_degree, double theta) {
  if (!(theta > 0 && theta < 1)) fail(Errc::domain, "theta must lie in (0,1)");
  LemmaReport report;
  report.theta = theta;
  report.c_star = c_star_of(theta);
  const double two_minus = 2.0 - std::pow(2.0, theta);

  InequalityStat rearr{"rearrangement-lower", 0, 0, 0, ""};     // yuan-type
  InequalityStat split{"signed-split", 0, 0, 0, ""};            // pula-type
  InequalityStat leading{"leading-entry", 0, 0, 0, ""};         // chiappechiare-type
  InequalityStat weighted{"weighted-difference", 0, 0, 0, ""};  // adele-type
  InequalityStat dominance{"dominance", 0, 0, 0, ""};
  InequalityStat cardinality{"cardinality", 0, 0, 0, ""};
  InequalityStat head{"head-vs-tail", 0, 0, 0, ""};
  InequalityStat signs{"sign-balance", 0, 0, 0, ""};
  InequalityStat nonres{"strong-nonresonance", 0, 0, 0, ""};

  auto check = [&](InequalityStat& st, bool ok, double ratio, const MonomialKey& key) {
    ++st.checked;
    st.max_ratio = std::max(st.max_ratio, ratio);
    if (!ok) {
      ++st.violations;
      if (st.witness.empty()) st.witness = key.to_string();
    }
  };

  for_each_momentum_zero_pair(lo, hi, max_total_degree, [&](const MultiIndex& alpha,
                                                            const MultiIndex& beta) {
    MonomialKey key{alpha, beta};
    ++report.keys;
    MultiIndex v = alpha.plus(beta);
    std::vector<Site> na = rearrangement(v);
    const int n_card = static_cast<int>(na.size());
    SignedIndex u = difference(alpha, beta);
    auto [m, d_card] = signed_list(u);
    const int a0b0 = alpha.exponent(0) + beta.exponent(0);

    // sum of <i>^theta (alpha_i + beta_i) = sum n_l^theta >= 2 n_1^theta +
    // (2 - 2^theta) sum_{l >= 3} n_l^theta
    {
      double lhs = 0, tail = 0;
      for (std::size_t l = 0; l < na.size(); ++l) {
        double x = theta_pow(na[l], theta);
        lhs += x;
        if (l >= 2) tail += x;
      }
      double rhs = 2 * theta_pow(na[0], theta) + two_minus * tail;
      check(rearr, lhs >= rhs * (1 - 1e-12), lhs > 0 ? rhs / lhs : 0, key);
    }

    // n_1 <= sum_{l >= 2} n_l
    {
      Site tail = 0;
      for (std::size_t l = 1; l < na.size(); ++l) tail += na[l];
      check(head, na[0] <= tail, tail > 0 ? static_cast<double>(na[0]) / tail : 1e9, key);
    }

    // D + alpha_0 + beta_0 <= N
    check(cardinality, d_card + a0b0 <= n_card,
          static_cast<double>(d_card + a0b0) / n_card, key);

    // (|m_1|, ..., |m_D|, 1, ..., 1) dominated by the rearrangement
    {
      bool ok = true;
      for (int l = 0; l < n_card; ++l) {
        Site lhs = l < d_card ? site_mag(m[static_cast<std::size_t>(l)]) : 1;
        if (lhs > na[static_cast<std::size_t>(l)]) {
          ok = false;
          break;
        }
      }
      check(dominance, ok, 0, key);
    }

    // constructed signs balance the rearrangement
    {
      auto sigma = sigma_signs(alpha, beta);
      std::int64_t acc = 0;
      bool zeros_ok = true;
      for (std::size_t l = 0; l < na.size(); ++l) {
        acc += sigma[l] * na[l];
        if (sigma[l] == 0 && na[l] != 1) zeros_ok = false;
      }
      check(signs, acc == 0 && zeros_ok, 0, key);
    }

    const bool divisor_cond = [&] {
      std::int64_t q = 0, n1 = 0;
      for (const auto& [site, val] : u.entries()) {
        q += val * site * site;
        n1 += val > 0 ? val : -val;
      }
      return std::abs(q) <= 2 * n1;
    }();

    if (!(alpha == beta)) {
      // sum g(i) |alpha_i - beta_i| <= 2 g(m_1) + sum_{l >= 3} g(n_l) for
      // g = <.>^{theta/2}; the empty-m case contributes g(0) = 1
      {
        double lhs = 0;
        for (const auto& [site, val] : u.entries())
          lhs += theta_pow(site, theta / 2) * std::abs(static_cast<double>(val));
        double rhs = 2 * theta_pow(d_card > 0 ? m[0] : 0, theta / 2);
        for (std::size_t l = 2; l < na.size(); ++l) rhs += theta_pow(na[l], theta / 2);
        check(split, lhs <= rhs * (1 + 1e-12), rhs > 0 ? lhs / rhs : 1e9, key);
      }

      if (n_card >= 3 && d_card >= 1 && divisor_cond) {
        // |m_1| <= 7 sum_{l >= 3} n_l^2
        double tail_sq = 0;
        for (std::size_t l = 2; l < na.size(); ++l)
          tail_sq += static_cast<double>(na[l]) * na[l];
        double lhs = static_cast<double>(site_mag(m[0]));
        check(leading, lhs <= 7 * tail_sq, tail_sq > 0 ? lhs / (7 * tail_sq) : 1e9, key);
      }

      if (n_card >= 3 && divisor_cond) {
        // weighted difference against the smallest smoothing gap
        double lhs = 0;
        for (const auto& [site, val] : u.entries())
          lhs += theta_pow(site, theta / 2) * std::abs(static_cast<double>(val));
        Site jmax = 0;
        Site best = -1;
        for (const auto& [site, e] : v.entries())
          if (site_mag(site) > best) {
            best = site_mag(site);
            jmax = site;
          }
        double rhs = report.c_star * smoothing_gap(jmax, alpha, beta, theta);
        check(weighted, lhs <= rhs * (1 + 1e-12), rhs > 0 ? lhs / rhs : (lhs > 0 ? 1e9 : 0),
              key);
      }

      if (!divisor_cond) {
        // outside the divisor regime |omega.(alpha-beta)| >= 1 on all of Omega
        std::int64_t q = 0, n1 = 0;
        for (const auto& [site, val] : u.entries()) {
          q += val * site * site;
          n1 += val > 0 ? val : -val;
        }
        double worst = std::abs(static_cast<double>(q)) - 0.5 * static_cast<double>(n1);
        check(nonres, worst >= 1.0, worst > 0 ? 1.0 / worst : 1e9, key);
      }
    }
  });

  report.stats = {rearr, head, cardinality, dominance, signs, split, leading, weighted, nonres};
  return report;
}

PajataBound pajata_bound(double sigma, double theta) {
  if (!(sigma > 0 && sigma <= 1)) fail(Errc::domain, "sigma must lie in (0,1]");
  if (!(theta > 0 && theta < 1)) fail(Errc::domain, "theta must lie in (0,1)");
  const double cs = c_star_of(theta);
  const double x = (24 * cs / (sigma * theta)) * std::log(12 * cs / (sigma * theta));
  PajataBound out;
  out.i_sharp = std::pow(x, 2 / theta);
  out.bound = 18 * out.i_sharp * std::log(out.i_sharp);
  return out;
}

double pajata_f(Site i, double x, double sigma, double theta) {
  if (x < 0) fail(Errc::domain, "pajata_f needs x >= 0");
  const double cs = c_star_of(theta);
  const double mag = static_cast<double>(site_mag(i));
  return -(sigma / cs) * x * std::pow(mag, theta / 2) + std::log1p(x * x * mag * mag);
}

double derived_c1(double theta) {
  static std::map<double, double> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(theta);
  if (it != cache.end()) return it->second;
  // sup over sigma in (0,1] of sigma^{3/theta} 18 i# ln i#; the quantity
  // vanishes as sigma -> 0, so a log grid with local refinement suffices
  auto value = [&](double sigma) {
    return std::pow(sigma, 3 / theta) * pajata_bound(sigma, theta).bound;
  };
  double best = 0, best_sigma = 1;
  for (int k = 0; k <= 600; ++k) {
    double sigma = std::pow(10.0, -6.0 + 6.0 * k / 600.0);
    double v = value(sigma);
    if (v > best) {
      best = v;
      best_sigma = sigma;
    }
  }
  for (int k = -50; k <= 50; ++k) {
    double sigma = best_sigma * std::pow(10.0, 0.01 * k / 50.0);
    if (sigma > 0 && sigma <= 1) best = std::max(best, value(sigma));
  }
  cache[theta] = best;
  return best;
}

}  // namespace birkhoff
