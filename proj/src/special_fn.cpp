#include "hotspot/special_fn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace hotspot::special {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;
constexpr int kMaxIter = 1000;

// D(u) = u + 1/(u + 2/(u + 3/(u + ...))) so that (1 - Phi(u)) = phi(u) / D(u).
// Modified Lentz; converges quickly for u >= 3.
double mills_denominator(double u) {
  double f = u;
  double c = f;
  double d = 0.0;
  for (int k = 1; k < kMaxIter; ++k) {
    const double a = static_cast<double>(k);
    d = u + a * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = u + a / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return f;
}

[[noreturn]] void domain_fail(const char* fn, double v) {
  throw std::domain_error(std::string(fn) + ": argument out of domain (" +
                          std::to_string(v) + ")");
}

// Gamma(s, x) by continued fraction, valid for x > s + 1.
double upper_gamma_cf_scaled(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return h;
}

double upper_gamma_cf(double s, double x) {
  return std::exp(-x + s * std::log(x)) * upper_gamma_cf_scaled(s, x);
}

// Gamma(s, x) for s in (0, 1], x <= s + 1. The k = 0 term of the lower series
// is folded into Gamma(s) so that small s does not cancel catastrophically:
//   Gamma(s) - x^s/s = [(Gamma(1+s) - 1) - (x^s - 1)] / s.
double upper_gamma_series(double s, double x) {
  const double head =
      (boost::math::tgamma1pm1(s) - std::expm1(s * std::log(x))) / s;
  double sum = 0.0;
  double term = 1.0;  // (-x)^k / k!
  const double xs = std::pow(x, s);
  for (int k = 1; k < kMaxIter; ++k) {
    term *= -x / k;
    const double add = term / (s + k);
    sum += add;
    if (std::fabs(add) < kEps * std::fabs(sum)) break;
  }
  return head - xs * sum;
}

}  // namespace

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x - kLogSqrt2Pi); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double log_std_normal_cdf(double x) {
  if (x > 0.0) return std::log1p(-0.5 * std::erfc(x / kSqrt2));
  if (x > -8.0) return std::log(0.5 * std::erfc(-x / kSqrt2));
  const double u = -x;
  return -0.5 * u * u - kLogSqrt2Pi - std::log(mills_denominator(u));
}

std::pair<double, double> log_std_normal_cdf_pair(double x) {
  if (std::fabs(x) >= 8.0) return {log_std_normal_cdf(x), log_std_normal_cdf(-x)};
  const double tail = 0.5 * std::erfc(std::fabs(x) / kSqrt2);
  const double lt = std::log(tail), lc = std::log1p(-tail);
  return x < 0.0 ? std::make_pair(lt, lc) : std::make_pair(lc, lt);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) domain_fail("std_normal_quantile", p);
  // Acklam's rational approximation followed by one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement; the error term is taken on the smaller tail.
  const double e = x < 0.0 ? std_normal_cdf(x) - p : (1.0 - p) - std_normal_cdf(-x);
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double inverse_mills(double u, int gamma) {
  if (gamma == 0) return -inverse_mills(-u, 1);
  if (u > -8.0) return std_normal_pdf(u) / std_normal_cdf(u);
  return mills_denominator(-u);
}

double owens_t(double h, double a) {
  if (a == 0.0) return 0.0;
  if (a < 0.0) return -owens_t(h, -a);
  if (h == 0.0) return std::atan(a) / (2.0 * std::numbers::pi);
  const double hh = std::fabs(h);
  auto integrand = [hh](double x) { return std_normal_pdf(hh * x) / (1.0 + x * x); };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, a, 15, 1e-12, &err);
  return std_normal_pdf(hh) * v;
}

double upper_incomplete_gamma(double s, double x) {
  if (!(s > 0.0 && s <= 2.0)) domain_fail("upper_incomplete_gamma(s)", s);
  if (!(x > 0.0)) domain_fail("upper_incomplete_gamma(x)", x);
  if (s == 1.0) return std::exp(-x);
  if (x > s + 1.0) return upper_gamma_cf(s, x);
  if (s > 1.0) {
    // Gamma(s, x) = (s-1) Gamma(s-1, x) + x^{s-1} e^{-x}
    return (s - 1.0) * upper_incomplete_gamma(s - 1.0, x) +
           std::exp((s - 1.0) * std::log(x) - x);
  }
  return upper_gamma_series(s, x);
}

double upper_incomplete_gamma_scaled(double s, double x) {
  if (!(s >= 0.0 && s <= 2.0)) domain_fail("upper_incomplete_gamma_scaled(s)", s);
  if (!(x > 0.0)) domain_fail("upper_incomplete_gamma_scaled(x)", x);
  if (s == 0.0) return exp_e1(x);
  if (x > s + 1.0) return upper_gamma_cf_scaled(s, x);
  return std::exp(x - s * std::log(x)) * upper_incomplete_gamma(s, x);
}

double exp_e1(double x) {
  if (!(x > 0.0)) domain_fail("exp_e1", x);
  if (x <= 1.5) {
    double sum = 0.0;
    double term = 1.0;  // (-x)^k / k!
    for (int k = 1; k < kMaxIter; ++k) {
      term *= -x / k;
      const double add = term / k;
      sum += add;
      if (std::fabs(add) < kEps * std::fabs(sum)) break;
    }
    return std::exp(x) * (-kEulerGamma - std::log(x) - sum);
  }
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double delta = c * d;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return h;
}

double digamma(double x) {
  if (!(x > 0.0)) domain_fail("digamma", x);
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  const double series =
      r * (1.0 / 12 -
           r * (1.0 / 120 -
                r * (1.0 / 252 -
                     r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
  return shift + std::log(x) - 0.5 / x - series;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace hotspot::special
