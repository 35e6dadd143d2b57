// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#include "oofsk/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oofsk/errors.hpp"

namespace oofsk::specfun {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSeriesSwitch = 30.0;
constexpr double kEps = 1e-17;

// Rescale threshold for long positive series; keeps partial sums finite.
constexpr double kRescale = 1e250;

void require_order(int order) {
  if (order < 0) {
    throw DomainError("bessel order must be nonnegative, got " + std::to_string(order));
  }
}

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw DomainError(std::string(what) + " must be nonnegative, got " + std::to_string(x));
  }
}

// ln sum_k (x^2/4)^k order! / (k! (k+order)!), the normalized Bessel series.
double log_normalized_series(int order, double x) {
  if (x == 0.0) return 0.0;
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  double shift = 0.0;
  const double peak = 0.5 * x;
  for (int k = 1; k < 1'000'000; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
    sum += term;
    if (sum > kRescale) {
      sum /= kRescale;
      term /= kRescale;
      shift += std::log(kRescale);
    }
    if (k > peak && term < kEps * sum) break;
  }
  return std::log(sum) + shift;
}

}  // namespace

double LogValue::exp() const noexcept { return std::exp(log_magnitude); }

LogValue operator*(LogValue a, LogValue b) noexcept {
  if (a.is_zero() || b.is_zero()) return LogValue::zero();
  return {a.log_magnitude + b.log_magnitude};
}

LogValue operator/(LogValue a, LogValue b) noexcept {
  if (a.is_zero()) return LogValue::zero();
  return {a.log_magnitude - b.log_magnitude};
}

double log_add(double a, double b) noexcept {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("factorial of negative integer");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

namespace detail {

double log_bessel_i_series(int order, double x) {
  if (x == 0.0) return order == 0 ? 0.0 : kNegInf;
  return order * std::log(0.5 * x) - log_factorial(order) + log_normalized_series(order, x);
}

std::optional<double> log_bessel_i_asymptotic(int order, double x) {
  // e^{-x} I_nu(x) sqrt(2 pi x) ~ sum_k (-1)^k a_k(nu) / x^k
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  double previous = 1.0;
  for (int k = 1; k < 500; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    if (std::abs(term) < kEps * std::abs(sum)) {
      if (sum <= 0.0) return std::nullopt;
      return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
    }
    if (std::abs(term) >= std::abs(previous)) return std::nullopt;
    sum += term;
    previous = term;
  }
  return std::nullopt;
}

}  // namespace detail

LogValue log_bessel_i(int order, double x) {
  require_order(order);
  require_nonnegative(x, "bessel argument");
  if (x == 0.0) return order == 0 ? LogValue::one() : LogValue::zero();
  if (x >= kSeriesSwitch) {
    if (auto v = detail::log_bessel_i_asymptotic(order, x)) return {*v};
  }
  return {detail::log_bessel_i_series(order, x)};
}

double log_bessel_i_normalized(int order, double x) {
  require_order(order);
  require_nonnegative(x, "bessel argument");
  if (x < kSeriesSwitch) return log_normalized_series(order, x);
  if (auto v = detail::log_bessel_i_asymptotic(order, x)) {
    return *v - order * std::log(0.5 * x) + log_factorial(order);
  }
  return log_normalized_series(order, x);
}

double confluent_hypergeometric_poly(int i, int c, double z) {
  if (i < 0) throw DomainError("hypergeometric degree must be nonnegative");
  if (c <= 0) throw DomainError("hypergeometric parameter c must be positive");
  // Neumaier-compensated sum; terms alternate in sign for z > 0.
  double term = 1.0;
  double sum = 1.0;
  double comp = 0.0;
  for (int k = 1; k <= i; ++k) {
    term *= static_cast<double>(k - 1 - i) * z / (static_cast<double>(c + k - 1) * k);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

double log_confluent_hypergeometric_poly_neg(int i, int c, double w) {
  if (i < 0) throw DomainError("hypergeometric degree must be nonnegative");
  if (c <= 0) throw DomainError("hypergeometric parameter c must be positive");
  require_nonnegative(w, "hypergeometric argument magnitude");
  if (i == 0 || w == 0.0) return 0.0;
  const double log_w = std::log(w);
  double log_term = 0.0;
  double log_sum = 0.0;
  for (int k = 1; k <= i; ++k) {
    log_term += std::log(static_cast<double>(i - k + 1)) + log_w -
                std::log(static_cast<double>(c + k - 1)) - std::log(static_cast<double>(k));
    log_sum = log_add(log_sum, log_term);
  }
  return log_sum;
}

namespace {

void require_dof(int L) {
  if (L < 1) throw DomainError("chi-square order L must be positive, got " + std::to_string(L));
}

// ln[e^{-x} sum_{k>=L} x^k/k!], valid and fast for x < L.
double log_lower_tail(double x, int L) {
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < 100'000; ++j) {
    term *= x / static_cast<double>(L + j);
    sum += term;
    if (term < kEps * sum) break;
  }
  return -x + L * std::log(x) - log_factorial(L) + std::log(sum);
}

// e^{-x} sum_{l<L} x^l/l!, each term formed in log space.
double upper_tail(double x, int L) {
  const double log_x = std::log(x);
  double sum = 0.0;
  for (int l = 0; l < L; ++l) {
    sum += std::exp(-x + l * log_x - log_factorial(l));
  }
  return sum;
}

}  // namespace

double chi2_cdf_2L(double x, int L) {
  require_dof(L);
  require_nonnegative(x, "chi-square argument");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < L) return std::exp(log_lower_tail(x, L));
  return 1.0 - upper_tail(x, L);
}

double chi2_sf_2L(double x, int L) {
  require_dof(L);
  require_nonnegative(x, "chi-square argument");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < L) return -std::expm1(log_lower_tail(x, L));
  return upper_tail(x, L);
}

double log_chi2_cdf_2L(double x, int L) {
  require_dof(L);
  require_nonnegative(x, "chi-square argument");
  if (x == 0.0) return kNegInf;
  if (std::isinf(x)) return 0.0;
  if (x < L) return log_lower_tail(x, L);
  return std::log1p(-upper_tail(x, L));
}

std::vector<double> multinomial_coeffs(int n, int L) {
  if (n < 0) throw DomainError("multinomial power must be nonnegative");
  require_dof(L);
  std::vector<double> inv_factorial(L);
  inv_factorial[0] = 1.0;
  for (int l = 1; l < L; ++l) inv_factorial[l] = inv_factorial[l - 1] / l;

  std::vector<double> c{1.0};
  for (int power = 1; power <= n; ++power) {
    const int previous_top = (power - 1) * (L - 1);
    std::vector<double> next(static_cast<std::size_t>(power) * (L - 1) + 1, 0.0);
    for (int i = 0; i < static_cast<int>(next.size()); ++i) {
      double acc = 0.0;
      for (int q = std::max(0, i - L + 1); q <= std::min(i, previous_top); ++q) {
        acc += c[q] * inv_factorial[i - q];
      }
      next[i] = acc;
    }
    c = std::move(next);
  }
  return c;
}

double log_ncx2_pdf_2L(double x, int L, double noncentrality, double scale) {
  require_dof(L);
  require_nonnegative(noncentrality, "noncentrality");
  if (!(scale > 0.0)) throw DomainError("chi-square scale must be positive");
  if (!(x >= 0.0)) return kNegInf;
  if (x == 0.0) {
    return L == 1 ? -std::log(scale) - noncentrality / scale : kNegInf;
  }
  const double z = 2.0 * std::sqrt(x * noncentrality) / scale;
  return (L - 1) * std::log(x) - L * std::log(scale) - log_factorial(L - 1) -
         (x + noncentrality) / scale + log_bessel_i_normalized(L - 1, z);
}

}  // namespace oofsk::specfun
