#include "birkhoff/scheme.hpp"

#include <cmath>

namespace birkhoff {

double chi_margin(double chi, double c_tilde, int n_max) {
  if (!(chi > 1 && chi < 2)) fail(Errc::domain, "chi must lie in (1,2)");
  if (!(c_tilde > 0.5)) fail(Errc::domain, "c_tilde must exceed 1/2");
  if (n_max < 10) fail(Errc::domain, "n_max too small for the tail to decay");
  long double sup = -std::numeric_limits<long double>::infinity();
  const long double lchi = static_cast<long double>(chi);
  for (int n = 0; n <= n_max; ++n) {
    long double m = static_cast<long double>(site_mag(n));
    long double term = std::pow(2.0L, n + 1) * std::log(1.0L - 1.0L / (2 * c_tilde * m * m)) +
                       std::pow(lchi, n) * (lchi - 1);
    sup = std::max(sup, term);
  }
  return static_cast<double>(sup);
}

SmallnessThreshold smallness_threshold(double s0, double theta, double chi, double k_cal) {
  if (!(s0 > 0)) fail(Errc::domain, "s0 must be positive");
  if (!(theta > 0 && theta < 1)) fail(Errc::domain, "theta must lie in (0,1)");
  if (!(chi > 1 && chi < 2)) fail(Errc::domain, "chi must lie in (1,2)");
  if (!(k_cal > 0)) fail(Errc::domain, "calibration must be positive");

  SmallnessThreshold out;
  out.c1 = derived_c1(theta);
  const double c_tilde = 1.0 + 1.6449340668482264365;
  out.c2 = out.c1 * std::pow(c_tilde, 3 / theta) * std::pow(s0, -3 / theta);

  // log of the n-th term; chi^n eventually crushes the stretched-exponential
  const long double lchi = std::log(static_cast<long double>(chi));
  auto term = [&](long double n) -> long double {
    long double chin = std::exp(n * lchi);  // may saturate to inf: term -> -inf
    long double growth = static_cast<long double>(out.c2) * std::pow(n, 6.0L / theta);
    long double decay = std::max(n - chin, -(2.0L - chi) * chin);
    return growth + 2 * std::log(n) + decay;
  };

  long double sup = -std::numeric_limits<long double>::infinity();
  int arg = 1;
  int decreasing_streak = 0;
  long double prev = -std::numeric_limits<long double>::infinity();
  const int hard_limit = 5000000;
  int n = 1;
  for (; n <= hard_limit; ++n) {
    long double t = term(static_cast<long double>(n));
    if (t > sup) {
      sup = t;
      arg = n;
    }
    decreasing_streak = (t < prev) ? decreasing_streak + 1 : 0;
    prev = t;
    if (decreasing_streak >= 10 && t < sup - 200) break;
  }
  // monotone tail: once the chi^n increment dominates the polynomial one,
  // the terms decrease forever
  {
    long double nn = static_cast<long double>(n);
    long double chin = std::exp(nn * lchi);
    long double poly_step = static_cast<long double>(out.c2) *
                                (std::pow(nn + 1, 6.0L / theta) - std::pow(nn, 6.0L / theta)) +
                            2 * std::log1p(1.0L / nn) + 1;
    long double decay_step = (chi - 1) * (2.0L - chi) * chin;
    out.tail_certified = !(std::isfinite(static_cast<double>(chin))) || decay_step > poly_step;
  }
  out.arg_n = arg;
  out.log_epsilon0 = static_cast<double>(-std::log(static_cast<long double>(k_cal)) - sup);
  out.epsilon0 = std::exp(out.log_epsilon0);  // 0 on underflow
  return out;
}

}  // namespace birkhoff
