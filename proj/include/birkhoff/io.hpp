#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "birkhoff/hamiltonian.hpp"

namespace birkhoff {

/// Line-oriented Hamiltonian text format:
///
///   # comment
///   degree_cap 8
///   {1:1,-1:1} {0:2} 1/2 0
///
/// Each term line is `alpha beta re im`. Coefficients are rationals `p/q` in
/// exact mode and shortest round-trip decimals in float mode, so a save/load
/// cycle is bit-exact either way. Only canonical orientations are written;
/// both orientations are accepted on input.
template <class C>
void save_hamiltonian(std::ostream& out, const Hamiltonian<C>& h) {
  using traits = scalar_traits<C>;
  out << "degree_cap " << h.degree_cap() << "\n";
  for (const auto& [key, c] : h.terms())
    out << key.alpha.to_string() << ' ' << key.beta.to_string() << ' '
        << traits::real_to_string(c.re) << ' ' << traits::real_to_string(c.im) << "\n";
}

template <class C>
Hamiltonian<C> load_hamiltonian(std::istream& in) {
  using traits = scalar_traits<C>;
  std::vector<typename Hamiltonian<C>::Term> terms;
  std::string line;
  std::size_t lineno = 0;
  int cap = -1;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string tok;
    if (!(is >> tok)) continue;
    if (tok == "degree_cap") {
      if (!(is >> cap) || cap < 0)
        fail(Errc::parse, "line " + std::to_string(lineno) + ": bad degree_cap");
      continue;
    }
    std::string beta_tok, re_tok, im_tok;
    if (!(is >> beta_tok >> re_tok >> im_tok))
      fail(Errc::parse, "line " + std::to_string(lineno) + ": expected 'alpha beta re im'");
    std::string extra;
    if (is >> extra) fail(Errc::parse, "line " + std::to_string(lineno) + ": trailing tokens");
    try {
      terms.push_back({MultiIndex::parse(tok), MultiIndex::parse(beta_tok),
                       C(traits::real_from_string(re_tok), traits::real_from_string(im_tok))});
    } catch (const Error& e) {
      fail(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (cap < 0) fail(Errc::parse, "missing degree_cap header line");
  return Hamiltonian<C>::build(terms, DegreeCap(cap));
}

}  // namespace birkhoff
