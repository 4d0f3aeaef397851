#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "birkhoff/errors.hpp"

namespace birkhoff {

using Site = std::int64_t;

/// max(|j|, 1); site 0 always maps to 1.
inline Site site_mag(Site j) { return j >= 0 ? (j > 0 ? j : 1) : (-j); }

/// Finitely supported map site -> positive exponent, kept sorted by site.
/// Values are immutable; "mutators" return new objects.
class MultiIndex {
 public:
  using Entry = std::pair<Site, int>;

  MultiIndex() = default;
  /// Builds from arbitrary (site, exponent) pairs; merges duplicates,
  /// drops zeros, rejects negatives.
  static MultiIndex from_pairs(std::vector<Entry> pairs);

  int exponent(Site j) const;
  bool contains(Site j) const { return exponent(j) != 0; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  /// |v| = sum of exponents.
  int total() const;

  MultiIndex plus(const MultiIndex& o) const;
  MultiIndex plus_unit(Site j) const;
  /// Empty optional if any exponent would go negative.
  std::optional<MultiIndex> minus(const MultiIndex& o) const;
  std::optional<MultiIndex> minus_unit(Site j) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.entries_ <=> b.entries_;
  }

  std::string to_string() const;           // {site:exp,...}
  static MultiIndex parse(const std::string& text);

 private:
  std::vector<Entry> entries_;
};

/// Finitely supported map site -> nonzero integer.
class SignedIndex {
 public:
  using Entry = std::pair<Site, std::int64_t>;

  SignedIndex() = default;
  static SignedIndex from_pairs(std::vector<Entry> pairs);

  std::int64_t value(Site j) const;
  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  /// |l| = sum of |values|.
  std::int64_t one_norm() const;

  friend bool operator==(const SignedIndex&, const SignedIndex&) = default;
  friend std::strong_ordering operator<=>(const SignedIndex& a, const SignedIndex& b) {
    return a.entries_ <=> b.entries_;
  }

  std::string to_string() const;

 private:
  std::vector<Entry> entries_;
};

/// alpha - beta.
SignedIndex difference(const MultiIndex& alpha, const MultiIndex& beta);

/// pi(alpha, beta) = sum_j j (alpha_j - beta_j).
std::int64_t momentum(const MultiIndex& alpha, const MultiIndex& beta);

/// |alpha| + |beta| - 2. Throws degree-underflow when |alpha|+|beta| < 2.
int scaling_degree(const MultiIndex& alpha, const MultiIndex& beta);

/// All ordered pairs (a1, a2) with a1 + a2 = alpha, in lexicographic order
/// of a1. Length is prod_j (alpha_j + 1).
std::vector<std::pair<MultiIndex, MultiIndex>> splits(const MultiIndex& alpha);

/// Decreasing rearrangement of site magnitudes of v counted with
/// multiplicity: magnitude h > 1 repeated v_h + v_{-h} times, and 1
/// repeated v_1 + v_{-1} + v_0 times. Requires |v| >= 2.
std::vector<Site> rearrangement(const MultiIndex& v);

/// The multiset { site j != 0, repeated |u_j| times }, ordered by
/// non-increasing magnitude. Ties break positive site first, then by
/// ascending site; consumers use magnitudes only. Returns (m, D).
std::pair<std::vector<Site>, int> signed_list(const SignedIndex& u);

/// Signs sigma_l in {-1,0,+1} aligned with rearrangement(alpha+beta), with
/// sum_l sigma_l * n_l = 0 and sigma_l = 0 only on unit entries coming from
/// site 0. Requires momentum zero (else infeasible) and |alpha|+|beta| >= 2.
std::vector<int> sigma_signs(const MultiIndex& alpha, const MultiIndex& beta);

/// One way of producing a given bracket monomial from a pair of parents.
struct BracketTriple {
  MultiIndex a1, b1, a2, b2;
  Site j;
  friend bool operator==(const BracketTriple&, const BracketTriple&) = default;
  friend std::strong_ordering operator<=>(const BracketTriple& x, const BracketTriple& y) {
    return std::tie(x.a1, x.b1, x.a2, x.b2, x.j) <=> std::tie(y.a1, y.b1, y.a2, y.b2, y.j);
  }
};

/// Enumerates every triple ((a1,b1),(a2,b2),j) of momentum-zero parents with
/// (alpha,beta) = (a1,b1) + (a2,b2) - (e_j,e_j) and a1_j b2_j + a2_j b1_j != 0.
/// Requires momentum(alpha,beta) = 0. Deterministic lexicographic order.
std::vector<BracketTriple> bracket_support(const MultiIndex& alpha, const MultiIndex& beta);

/// All multi-indices supported in [lo, hi] with total in [0, max_total].
std::vector<MultiIndex> enumerate_multi_indices(Site lo, Site hi, int max_total);

/// Visits every ordered pair (alpha, beta) with support in [lo, hi],
/// 2 <= |alpha| + |beta| <= max_total and momentum zero.
void for_each_momentum_zero_pair(Site lo, Site hi, int max_total,
                                 const std::function<void(const MultiIndex&, const MultiIndex&)>& fn);

}  // namespace birkhoff
