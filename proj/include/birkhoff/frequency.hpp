#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "birkhoff/indices.hpp"
#include "birkhoff/scalar.hpp"

namespace birkhoff {

/// Frequency sequence omega_j = j^2 + xi_j with xi_j in [-1/2, 1/2].
/// Entries are lazy: explicit overrides win, everything else is drawn
/// deterministically from (seed, j). Sampled xi are dyadic doubles, so the
/// exact-rational view of the same frequency is well defined.
class Frequency {
 public:
  explicit Frequency(std::uint64_t seed, double gamma = 1e-3);
  Frequency(std::uint64_t seed, double gamma, std::map<Site, double> overrides);

  double xi(Site j) const;
  double omega(Site j) const { return static_cast<double>(j) * static_cast<double>(j) + xi(j); }
  Rational omega_rational(Site j) const {
    return Rational(BigInt(j) * BigInt(j)) + Rational(xi(j));
  }

  /// omega . u over the support of u.
  double dot(const SignedIndex& u) const;
  Rational dot_rational(const SignedIndex& u) const;

  double gamma() const { return gamma_; }
  std::uint64_t seed() const { return seed_; }
  const std::map<Site, double>& overrides() const { return overrides_; }

  /// Unperturbed resonant sequence omega_j = j^2 (xi = 0 everywhere).
  static Frequency resonant();

  /// File format: optional '#' comments, header lines `gamma <value>` and
  /// `seed <int>`, then lines `<site> <xi>` with |xi| <= 1/2.
  static Frequency load(std::istream& in);
  void save(std::ostream& out) const;

 private:
  std::uint64_t seed_;
  double gamma_;
  std::map<Site, double> overrides_;
  bool all_overrides_ = false;  // resonant() helper: missing sites mean xi = 0
};

/// xi_j i.i.d. uniform on [-1/2, 1/2], lazily and deterministically per (seed, j).
inline Frequency sample_frequency(std::uint64_t seed, double gamma = 1e-3) {
  return Frequency(seed, gamma);
}

}  // namespace birkhoff
