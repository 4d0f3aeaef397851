#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "birkhoff/errors.hpp"

namespace birkhoff {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact square root of a non-negative rational, when one exists.
/// Needed for moduli of exact complex coefficients (majorants).
inline Rational exact_sqrt(const Rational& x) {
  if (x < 0) fail(Errc::domain, "exact_sqrt of a negative rational");
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);
  BigInt sn = boost::multiprecision::sqrt(num);
  BigInt sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den)
    fail(Errc::domain, "modulus is not rational; use a floating-point scalar");
  return Rational(sn, sd);
}

/// Complex number over an arbitrary ordered field. std::complex is only
/// specified for the builtin floating types, so exact coefficients get
/// this minimal replacement.
template <class T>
struct Complex {
  T re{};
  T im{};

  Complex() = default;
  Complex(T r) : re(std::move(r)) {}
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Complex& a, const T& s) { return {a.re * s, a.im * s}; }
  friend Complex operator*(const T& s, const Complex& a) { return a * s; }
  friend Complex operator/(const Complex& a, const T& s) { return {a.re / s, a.im / s}; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    T d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  Complex& operator+=(const Complex& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  Complex& operator-=(const Complex& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
  friend Complex conj(const Complex& a) { return {a.re, -a.im}; }
  /// i * z
  friend Complex mul_i(const Complex& a) { return {-a.im, a.re}; }
  friend T norm_sq(const Complex& a) { return a.re * a.re + a.im * a.im; }
};

inline std::string rational_to_string(const Rational& r) { return r.str(); }

inline Rational rational_from_string(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    fail(Errc::parse, "bad rational literal '" + s + "'");
  }
}

/// Shortest decimal that round-trips the double.
inline std::string double_to_string(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double double_from_string(const std::string& s) {
  double x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    fail(Errc::parse, "bad float literal '" + s + "'");
  return x;
}

/// Customization point for the coefficient field. Two instantiations are
/// first-class: Complex<Rational> (exact) and Complex<double>. Anything
/// with field operations, ordering on the reals and double interconversion
/// fits (e.g. a multiprecision float).
template <class C>
struct scalar_traits;

template <>
struct scalar_traits<Complex<Rational>> {
  using real_type = Rational;
  static constexpr bool exact = true;
  static bool is_zero(const Complex<Rational>& c) { return c.re == 0 && c.im == 0; }
  static double abs_double(const Complex<Rational>& c) {
    return std::sqrt(static_cast<double>(c.re) * static_cast<double>(c.re) +
                     static_cast<double>(c.im) * static_cast<double>(c.im));
  }
  static Rational modulus(const Complex<Rational>& c) {
    if (c.im == 0) return c.re < 0 ? Rational(-c.re) : c.re;
    if (c.re == 0) return c.im < 0 ? Rational(-c.im) : c.im;
    return exact_sqrt(norm_sq(c));
  }
  static double to_double(const Rational& x) { return static_cast<double>(x); }
  // doubles are dyadic rationals, so this is exact
  static Rational real_from_double(double x) { return Rational(x); }
  static Rational default_drop() { return Rational(0); }
  static bool below_drop(const Complex<Rational>& c, const Rational&) { return is_zero(c); }
  static std::string real_to_string(const Rational& x) { return rational_to_string(x); }
  static Rational real_from_string(const std::string& s) { return rational_from_string(s); }
};

template <>
struct scalar_traits<Complex<double>> {
  using real_type = double;
  static constexpr bool exact = false;
  static bool is_zero(const Complex<double>& c) { return c.re == 0 && c.im == 0; }
  static double abs_double(const Complex<double>& c) { return std::hypot(c.re, c.im); }
  static double modulus(const Complex<double>& c) { return std::hypot(c.re, c.im); }
  static double to_double(double x) { return x; }
  static double real_from_double(double x) { return x; }
  static double default_drop() { return 1e-300; }
  static bool below_drop(const Complex<double>& c, double drop) {
    return std::hypot(c.re, c.im) <= drop;
  }
  static std::string real_to_string(double x) { return double_to_string(x); }
  static double real_from_string(const std::string& s) { return double_from_string(s); }
};

using CRational = Complex<Rational>;
using CDouble = Complex<double>;

namespace rng {

/// SplitMix64 finalizer; the workhorse for keyed, lazily evaluated randomness
/// (frequency entries, per-sample seeds). Stable across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b)); }
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(a ^ mix64(b ^ mix64(c)));
}

/// Uniform in [0,1) with 53 random bits.
inline double uniform01(std::uint64_t u) { return static_cast<double>(u >> 11) * 0x1.0p-53; }

/// Small deterministic stream built on SplitMix64.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double next_uniform01() { return uniform01(next_u64()); }
  /// Uniform in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform01(); }
  /// Standard normal via Box-Muller (portable, unlike std distributions).
  double next_normal() {
    double u1 = next_uniform01();
    double u2 = next_uniform01();
    while (u1 <= 0) u1 = next_uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {  // inclusive bounds
    return lo + static_cast<std::int64_t>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace rng
}  // namespace birkhoff
