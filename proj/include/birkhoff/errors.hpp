#pragma once

#include <stdexcept>
#include <string>

namespace birkhoff {

/// Error categories surfaced by the library. The CLI maps these to exit codes.
enum class Errc {
  validation,          // malformed input, bad parameter range
  momentum_violation,  // key with nonzero momentum
  forbidden_term,      // constant or zero-site linear monomial
  reality_conflict,    // both orientations supplied with non-conjugate values
  degree_overflow,     // term above the degree cap
  degree_underflow,    // total degree below 2 where >= 2 is required
  order_violation,     // generator of too-low scaling order
  kernel_input,        // homological equation fed a diagonal (kernel) key
  resonance,           // small divisor below the floor
  not_linearizable,    // normal-form part refuses to vanish
  non_convergent,      // iteration failed to raise the remainder degree
  decay_violation,     // tracked norm chain broke
  zero_vector,         // divisor weight of the zero vector
  infeasible,          // sign assignment impossible (nonzero momentum)
  unsupported_site,    // weight requested at a site outside the support
  domain,              // parameter outside its mathematical domain
  io,                  // file system failure
  parse,               // unreadable text input
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::validation: return "validation";
    case Errc::momentum_violation: return "momentum-violation";
    case Errc::forbidden_term: return "forbidden-term";
    case Errc::reality_conflict: return "reality-conflict";
    case Errc::degree_overflow: return "degree-overflow";
    case Errc::degree_underflow: return "degree-underflow";
    case Errc::order_violation: return "order-violation";
    case Errc::kernel_input: return "kernel-input";
    case Errc::resonance: return "resonance";
    case Errc::not_linearizable: return "not-linearizable";
    case Errc::non_convergent: return "non-convergent";
    case Errc::decay_violation: return "decay-violation";
    case Errc::zero_vector: return "zero-vector";
    case Errc::infeasible: return "infeasible";
    case Errc::unsupported_site: return "unsupported-site";
    case Errc::domain: return "domain";
    case Errc::io: return "io";
    case Errc::parse: return "parse";
  }
  return "unknown";
}

}  // namespace birkhoff
