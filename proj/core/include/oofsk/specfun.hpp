// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#pragma once

#include <compare>
#include <limits>
#include <optional>
#include <vector>

namespace oofsk::specfun {

/// Natural logarithm of a nonnegative quantity. Negative infinity encodes an
/// exact zero. Nothing in this module exponentiates a LogValue implicitly.
struct LogValue {
  double log_magnitude = -std::numeric_limits<double>::infinity();

  static constexpr LogValue zero() noexcept { return {}; }
  static constexpr LogValue one() noexcept { return {0.0}; }

  bool is_zero() const noexcept {
    return log_magnitude == -std::numeric_limits<double>::infinity();
  }
  double exp() const noexcept;

  auto operator<=>(const LogValue&) const = default;
};

LogValue operator*(LogValue a, LogValue b) noexcept;
LogValue operator/(LogValue a, LogValue b) noexcept;

/// ln(exp(a) + exp(b)) without overflow.
double log_add(double a, double b) noexcept;

/// ln n! for n >= 0.
double log_factorial(int n);

/// ln I_order(x), the modified Bessel function of the first kind.
///
/// Power series below x = 30; above that the large-argument expansion of
/// e^{-x} I_order(x) is used whenever it converges to full precision, and a
/// rescaled power series otherwise. Finite for x up to ~1e5 and beyond.
/// Throws DomainError on negative order or negative/NaN x.
LogValue log_bessel_i(int order, double x);

/// ln[ order! (x/2)^{-order} I_order(x) ]. Equals 0 at x = 0 and is accurate
/// for tiny x, where ln I_order itself would lose the leading power.
double log_bessel_i_normalized(int order, double x);

/// F(-i, c; z) = sum_{k=0}^{i} (-i)_k / (c)_k * z^k / k!, a degree-i
/// polynomial in z. Throws DomainError when c <= 0 or i < 0.
double confluent_hypergeometric_poly(int i, int c, double z);

/// ln F(-i, c; -w) for w >= 0. Every term of the finite sum is positive in this
/// half-line, so the result is evaluated in log space without cancellation.
double log_confluent_hypergeometric_poly_neg(int i, int c, double w);

/// CDF of the normalized central chi-square variable with 2L degrees of
/// freedom, P(L, x) = 1 - e^{-x} sum_{l<L} x^l / l!.
double chi2_cdf_2L(double x, int L);

/// Complement e^{-x} sum_{l<L} x^l / l!, accurate in the upper tail.
double chi2_sf_2L(double x, int L);

/// ln chi2_cdf_2L(x, L); finite for any x > 0 even when the CDF underflows.
double log_chi2_cdf_2L(double x, int L);

/// Coefficients c_0..c_{n(L-1)} of x^i in (sum_{l<L} x^l / l!)^n, built by the
/// convolution recursion c_{i,n} = sum_q c_{q,n-1} / (i-q)!.
std::vector<double> multinomial_coeffs(int n, int L);

/// ln of the density of R = sum_l |Y_l|^2 where Y_l are independent circular
/// complex Gaussians with per-component variance `scale` and
/// sum_l |E Y_l|^2 = `noncentrality`. Central when noncentrality = 0.
double log_ncx2_pdf_2L(double x, int L, double noncentrality, double scale);

namespace detail {
// Exposed for boundary validation in tests.
double log_bessel_i_series(int order, double x);
std::optional<double> log_bessel_i_asymptotic(int order, double x);
}  // namespace detail

}  // namespace oofsk::specfun
