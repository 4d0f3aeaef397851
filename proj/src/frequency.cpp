#include "birkhoff/frequency.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace birkhoff {

Frequency::Frequency(std::uint64_t seed, double gamma) : seed_(seed), gamma_(gamma) {
  if (!(gamma > 0)) fail(Errc::validation, "gamma must be positive");
}

Frequency::Frequency(std::uint64_t seed, double gamma, std::map<Site, double> overrides)
    : seed_(seed), gamma_(gamma), overrides_(std::move(overrides)) {
  if (!(gamma > 0)) fail(Errc::validation, "gamma must be positive");
  for (const auto& [site, x] : overrides_)
    if (!(std::abs(x) <= 0.5)) fail(Errc::validation, "xi outside [-1/2, 1/2] at site " + std::to_string(site));
}

double Frequency::xi(Site j) const {
  auto it = overrides_.find(j);
  if (it != overrides_.end()) return it->second;
  if (all_overrides_) return 0.0;
  std::uint64_t u = rng::mix64(seed_, 0x5e71e575u, static_cast<std::uint64_t>(j));
  return rng::uniform01(u) - 0.5;
}

double Frequency::dot(const SignedIndex& u) const {
  double acc = 0;
  for (const auto& [site, val] : u.entries()) acc += static_cast<double>(val) * omega(site);
  return acc;
}

Rational Frequency::dot_rational(const SignedIndex& u) const {
  Rational acc = 0;
  for (const auto& [site, val] : u.entries()) acc += Rational(val) * omega_rational(site);
  return acc;
}

Frequency Frequency::resonant() {
  Frequency f(0, 1.0);
  f.all_overrides_ = true;
  return f;
}

Frequency Frequency::load(std::istream& in) {
  double gamma = 1e-3;
  std::uint64_t seed = 0;
  std::map<Site, double> overrides;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string head;
    if (!(is >> head)) continue;
    if (head == "gamma") {
      if (!(is >> gamma)) fail(Errc::parse, "bad gamma on line " + std::to_string(lineno));
    } else if (head == "seed") {
      if (!(is >> seed)) fail(Errc::parse, "bad seed on line " + std::to_string(lineno));
    } else {
      try {
        Site site = std::stoll(head);
        double x;
        if (!(is >> x)) fail(Errc::parse, "missing xi value on line " + std::to_string(lineno));
        overrides[site] = x;
      } catch (const Error&) {
        throw;
      } catch (const std::exception&) {
        fail(Errc::parse, "bad frequency line " + std::to_string(lineno) + ": '" + line + "'");
      }
    }
  }
  return Frequency(seed, gamma, std::move(overrides));
}

void Frequency::save(std::ostream& out) const {
  out << "gamma " << double_to_string(gamma_) << "\n";
  out << "seed " << seed_ << "\n";
  for (const auto& [site, x] : overrides_) out << site << ' ' << double_to_string(x) << "\n";
}

}  // namespace birkhoff
