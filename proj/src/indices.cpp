#include "birkhoff/indices.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace birkhoff {

MultiIndex MultiIndex::from_pairs(std::vector<Entry> pairs) {
  std::map<Site, int> acc;
  for (const auto& [site, exp] : pairs) {
    if (exp < 0) fail(Errc::validation, "negative exponent in multi-index");
    if (exp != 0) acc[site] += exp;
  }
  MultiIndex out;
  out.entries_.assign(acc.begin(), acc.end());
  return out;
}

int MultiIndex::exponent(Site j) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), j,
                             [](const Entry& e, Site s) { return e.first < s; });
  return (it != entries_.end() && it->first == j) ? it->second : 0;
}

int MultiIndex::total() const {
  int t = 0;
  for (const auto& e : entries_) t += e.second;
  return t;
}

namespace {

// Merge two sorted entry lists with a combiner; drops zero results.
template <class V, class F>
std::vector<std::pair<Site, V>> merge_entries(const std::vector<std::pair<Site, V>>& a,
                                              const std::vector<std::pair<Site, V>>& b, F&& comb) {
  std::vector<std::pair<Site, V>> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, k = 0;
  while (i < a.size() || k < b.size()) {
    if (k == b.size() || (i < a.size() && a[i].first < b[k].first)) {
      V v = comb(a[i].second, V{});
      if (v != V{}) out.emplace_back(a[i].first, v);
      ++i;
    } else if (i == a.size() || b[k].first < a[i].first) {
      V v = comb(V{}, b[k].second);
      if (v != V{}) out.emplace_back(b[k].first, v);
      ++k;
    } else {
      V v = comb(a[i].second, b[k].second);
      if (v != V{}) out.emplace_back(a[i].first, v);
      ++i;
      ++k;
    }
  }
  return out;
}

std::int64_t momentum_of(const MultiIndex& v) {
  std::int64_t m = 0;
  for (const auto& [site, exp] : v.entries()) m += site * exp;
  return m;
}

}  // namespace

MultiIndex MultiIndex::plus(const MultiIndex& o) const {
  MultiIndex out;
  out.entries_ = merge_entries(entries_, o.entries_, [](int x, int y) { return x + y; });
  return out;
}

MultiIndex MultiIndex::plus_unit(Site j) const {
  MultiIndex unit;
  unit.entries_ = {{j, 1}};
  return plus(unit);
}

std::optional<MultiIndex> MultiIndex::minus(const MultiIndex& o) const {
  for (const auto& [site, exp] : o.entries_)
    if (exponent(site) < exp) return std::nullopt;
  MultiIndex out;
  out.entries_ = merge_entries(entries_, o.entries_, [](int x, int y) { return x - y; });
  return out;
}

std::optional<MultiIndex> MultiIndex::minus_unit(Site j) const {
  MultiIndex unit;
  unit.entries_ = {{j, 1}};
  return minus(unit);
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [site, exp] : entries_) {
    if (!first) os << ',';
    os << site << ':' << exp;
    first = false;
  }
  os << '}';
  return os.str();
}

MultiIndex MultiIndex::parse(const std::string& text) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    fail(Errc::parse, "multi-index must look like {site:exp,...}: '" + text + "'");
  std::vector<Entry> pairs;
  std::string body = text.substr(1, text.size() - 2);
  if (body.empty()) return MultiIndex();
  std::istringstream is(body);
  std::string item;
  while (std::getline(is, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) fail(Errc::parse, "missing ':' in multi-index entry '" + item + "'");
    try {
      Site site = std::stoll(item.substr(0, colon));
      int exp = std::stoi(item.substr(colon + 1));
      if (exp <= 0) fail(Errc::parse, "exponent must be positive in '" + item + "'");
      pairs.emplace_back(site, exp);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(Errc::parse, "bad multi-index entry '" + item + "'");
    }
  }
  return from_pairs(std::move(pairs));
}

SignedIndex SignedIndex::from_pairs(std::vector<Entry> pairs) {
  std::map<Site, std::int64_t> acc;
  for (const auto& [site, val] : pairs)
    if (val != 0) acc[site] += val;
  SignedIndex out;
  for (const auto& [site, val] : acc)
    if (val != 0) out.entries_.emplace_back(site, val);
  return out;
}

std::int64_t SignedIndex::value(Site j) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), j,
                             [](const Entry& e, Site s) { return e.first < s; });
  return (it != entries_.end() && it->first == j) ? it->second : 0;
}

std::int64_t SignedIndex::one_norm() const {
  std::int64_t t = 0;
  for (const auto& e : entries_) t += e.second > 0 ? e.second : -e.second;
  return t;
}

std::string SignedIndex::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [site, val] : entries_) {
    if (!first) os << ',';
    os << site << ':' << val;
    first = false;
  }
  os << '}';
  return os.str();
}

SignedIndex difference(const MultiIndex& alpha, const MultiIndex& beta) {
  std::vector<SignedIndex::Entry> pairs;
  for (const auto& [site, exp] : alpha.entries()) pairs.emplace_back(site, exp);
  for (const auto& [site, exp] : beta.entries()) pairs.emplace_back(site, -exp);
  return SignedIndex::from_pairs(std::move(pairs));
}

std::int64_t momentum(const MultiIndex& alpha, const MultiIndex& beta) {
  return momentum_of(alpha) - momentum_of(beta);
}

int scaling_degree(const MultiIndex& alpha, const MultiIndex& beta) {
  int n = alpha.total() + beta.total();
  if (n < 2) fail(Errc::degree_underflow, "monomial of total degree " + std::to_string(n));
  return n - 2;
}

std::vector<std::pair<MultiIndex, MultiIndex>> splits(const MultiIndex& alpha) {
  std::vector<std::pair<MultiIndex, MultiIndex>> out;
  const auto& entries = alpha.entries();
  std::vector<int> take(entries.size(), 0);
  while (true) {
    std::vector<MultiIndex::Entry> first, second;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (take[i] > 0) first.emplace_back(entries[i].first, take[i]);
      if (entries[i].second - take[i] > 0)
        second.emplace_back(entries[i].first, entries[i].second - take[i]);
    }
    out.emplace_back(MultiIndex::from_pairs(std::move(first)),
                     MultiIndex::from_pairs(std::move(second)));
    // odometer over 0..alpha_j per site
    std::size_t i = entries.size();
    bool rolled_over = true;
    while (i > 0) {
      --i;
      if (take[i] < entries[i].second) {
        ++take[i];
        rolled_over = false;
        break;
      }
      take[i] = 0;
    }
    if (entries.empty() || rolled_over) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Site> rearrangement(const MultiIndex& v) {
  if (v.total() < 2) fail(Errc::degree_underflow, "rearrangement needs |v| >= 2");
  std::vector<Site> out;
  out.reserve(v.total());
  for (const auto& [site, exp] : v.entries()) {
    Site mag = site_mag(site);
    for (int k = 0; k < exp; ++k) out.push_back(mag);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::pair<std::vector<Site>, int> signed_list(const SignedIndex& u) {
  std::vector<Site> m;
  for (const auto& [site, val] : u.entries()) {
    if (site == 0) continue;
    std::int64_t reps = val > 0 ? val : -val;
    for (std::int64_t k = 0; k < reps; ++k) m.push_back(site);
  }
  std::sort(m.begin(), m.end(), [](Site x, Site y) {
    Site ax = x < 0 ? -x : x, ay = y < 0 ? -y : y;
    if (ax != ay) return ax > ay;
    if ((x > 0) != (y > 0)) return x > 0;  // positive site first among ties
    return x < y;
  });
  return {m, static_cast<int>(m.size())};
}

std::vector<int> sigma_signs(const MultiIndex& alpha, const MultiIndex& beta) {
  if (momentum(alpha, beta) != 0) fail(Errc::infeasible, "sign assignment needs momentum zero");
  MultiIndex v = alpha.plus(beta);
  if (v.total() < 2) fail(Errc::degree_underflow, "sigma_signs needs |alpha|+|beta| >= 2");

  // Magnitude h picks up '+' alpha_h + beta_{-h} times and '-'
  // alpha_{-h} + beta_h times; the alpha_0 + beta_0 unit entries get 0.
  // Aligned with the descending rearrangement; among equal magnitudes the
  // order is '+', then '-', then '0'.
  std::set<Site> mags;
  for (const auto& [site, exp] : v.entries()) mags.insert(site_mag(site));
  std::vector<int> out;
  out.reserve(v.total());
  for (auto it = mags.rbegin(); it != mags.rend(); ++it) {
    Site h = *it;
    int plus = alpha.exponent(h) + beta.exponent(-h);
    int minus = alpha.exponent(-h) + beta.exponent(h);
    int zero = (h == 1) ? alpha.exponent(0) + beta.exponent(0) : 0;
    for (int k = 0; k < plus; ++k) out.push_back(+1);
    for (int k = 0; k < minus; ++k) out.push_back(-1);
    for (int k = 0; k < zero; ++k) out.push_back(0);
  }
  return out;
}

std::vector<BracketTriple> bracket_support(const MultiIndex& alpha, const MultiIndex& beta) {
  if (momentum(alpha, beta) != 0) fail(Errc::validation, "bracket_support needs momentum zero");
  std::set<BracketTriple> out;
  auto condition_ii = [](const BracketTriple& t) {
    return t.a1.exponent(t.j) * t.b2.exponent(t.j) + t.a2.exponent(t.j) * t.b1.exponent(t.j) != 0;
  };
  for (const auto& [a1, a2] : splits(alpha)) {
    for (const auto& [b1, b2] : splits(beta)) {
      const std::int64_t pi1 = momentum(a1, b1);
      if (pi1 == 0) {
        // unit pair (e_j, e_j) lands inside one parent; condition (ii)
        // forces j into the other parent's support
        std::set<Site> sites;
        for (const auto& [s, e] : a2.entries()) sites.insert(s);
        for (const auto& [s, e] : b2.entries()) sites.insert(s);
        for (Site j : sites) {
          BracketTriple t{a1.plus_unit(j), b1.plus_unit(j), a2, b2, j};
          if (condition_ii(t)) out.insert(t);
        }
        sites.clear();
        for (const auto& [s, e] : a1.entries()) sites.insert(s);
        for (const auto& [s, e] : b1.entries()) sites.insert(s);
        for (Site j : sites) {
          BracketTriple t{a1, b1, a2.plus_unit(j), b2.plus_unit(j), j};
          if (condition_ii(t)) out.insert(t);
        }
      }
      // unit pair split across the parents; momentum conservation pins j,
      // which may fall outside supp(alpha + beta)
      {
        Site j = -pi1;
        BracketTriple t{a1.plus_unit(j), b1, a2, b2.plus_unit(j), j};
        if (condition_ii(t)) out.insert(t);
      }
      {
        Site j = pi1;
        BracketTriple t{a1, b1.plus_unit(j), a2.plus_unit(j), b2, j};
        if (condition_ii(t)) out.insert(t);
      }
    }
  }
  return {out.begin(), out.end()};
}

std::vector<MultiIndex> enumerate_multi_indices(Site lo, Site hi, int max_total) {
  if (lo > hi) fail(Errc::validation, "empty site window");
  std::vector<MultiIndex> out;
  std::vector<MultiIndex::Entry> current;
  std::function<void(Site, int)> rec = [&](Site site, int budget) {
    if (site > hi) {
      out.push_back(MultiIndex::from_pairs(current));
      return;
    }
    rec(site + 1, budget);
    for (int e = 1; e <= budget; ++e) {
      current.emplace_back(site, e);
      rec(site + 1, budget - e);
      current.pop_back();
    }
  };
  rec(lo, max_total);
  std::sort(out.begin(), out.end());
  return out;
}

void for_each_momentum_zero_pair(
    Site lo, Site hi, int max_total,
    const std::function<void(const MultiIndex&, const MultiIndex&)>& fn) {
  auto all = enumerate_multi_indices(lo, hi, max_total);
  // bucket by momentum, each bucket ordered by total degree
  std::map<std::int64_t, std::vector<const MultiIndex*>> buckets;
  for (const auto& v : all) buckets[momentum_of(v)].push_back(&v);
  for (auto& [m, vec] : buckets)
    std::stable_sort(vec.begin(), vec.end(),
                     [](const MultiIndex* x, const MultiIndex* y) { return x->total() < y->total(); });
  for (const auto& alpha : all) {
    int at = alpha.total();
    auto it = buckets.find(momentum_of(alpha));
    if (it == buckets.end()) continue;
    for (const MultiIndex* beta : it->second) {
      int n = at + beta->total();
      if (n > max_total) break;
      if (n < 2) continue;
      fn(alpha, *beta);
    }
  }
}

}  // namespace birkhoff
