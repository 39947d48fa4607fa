#pragma once

#include <utility>

// Scalar special functions used by the variational updates and the
// hyperparameter solver. All functions are pure and thread-safe.

namespace hotspot::special {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640561764;

/// Standard normal density.
double std_normal_pdf(double x);

/// Standard normal CDF, Phi(x).
double std_normal_cdf(double x);

/// log Phi(x); finite for every finite x (continued-fraction tail for x <= -8).
double log_std_normal_cdf(double x);

/// {log Phi(x), log Phi(-x)} from a single erfc pair when |x| < 8.
std::pair<double, double> log_std_normal_cdf_pair(double x);

/// Phi^{-1}(p) for p in (0,1).
double std_normal_quantile(double p);

/// Inverse Mills ratio M(u, gamma):
///   M(u,1) =  phi(u) / Phi(u)        > 0
///   M(u,0) = -phi(u) / (1 - Phi(u))  < 0
/// Stable for |u| well beyond 30.
double inverse_mills(double u, int gamma);

/// Owen's T function T(h,a) = phi(h) * int_0^a phi(h x) / (1 + x^2) dx,
/// evaluated by adaptive Gauss-Kronrod quadrature (1e-12 relative target).
double owens_t(double h, double a);

/// Upper incomplete gamma Gamma(s, x) for s in (0, 2] and x > 0.
/// Throws std::domain_error outside that domain.
double upper_incomplete_gamma(double s, double x);

/// e^x x^{-s} Gamma(s, x) for s in [0, 2] and x > 0 (s = 0 gives e^x E_1(x)).
/// Finite where Gamma(s, x) itself underflows.
double upper_incomplete_gamma_scaled(double s, double x);

/// e^x E_1(x) for x > 0: series for x <= 1.5, continued fraction above.
/// Throws std::domain_error for x <= 0.
double exp_e1(double x);

/// Digamma Psi(x) for x > 0. Throws std::domain_error for x <= 0.
double digamma(double x);

/// Natural log of the Beta function.
double log_beta(double a, double b);

}  // namespace hotspot::special
