// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#include "oofsk/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <vector>

#include "oofsk/detector.hpp"
#include "oofsk/errors.hpp"
#include "oofsk/quadrature.hpp"
#include "oofsk/specfun.hpp"

namespace oofsk::analytic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kExpansionLimitM = 32;

const quadrature::Options kInnerOptions{1e-14, 1e-12, 4000};
const quadrature::Options kOuterOptions{1e-13, 1e-9, 4000};

double signal_spread(int L, double xi, double scale) {
  return std::sqrt(L * scale * scale + 2.0 * xi * scale);
}

// Neumaier-compensated accumulator for the alternating binomial sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double log_binomial(int n, int k) {
  return specfun::log_factorial(n) - specfun::log_factorial(k) - specfun::log_factorial(n - k);
}

void require_independent(const SystemConfig& config) {
  if (config.rho != 0.0 && config.L > 1) {
    throw ConfigError("rho", "analytic error probabilities assume independent channels; "
                             "use the simulation engine for correlated fading");
  }
}

// 1 - P(L, tau)^M without cancellation.
double off_symbol_miss(int M, int L, double tau) {
  if (std::isinf(tau)) return 0.0;
  if (tau <= 0.0) return 1.0;
  return -std::expm1(M * specfun::log_chi2_cdf_2L(tau, L));
}

ErrorReport make_report(double v, ToneDetection tone, double tau, int M, int L, Method method) {
  ErrorReport report;
  report.method = method;
  report.pc1 = tone.correct;
  report.pc0 = pc0(M, L, tau);
  report.pe = v * tone.miss + (1.0 - v) * off_symbol_miss(M, L, tau);
  return report;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::DirectIntegral: return "direct_integral";
    case Method::Hypergeometric: return "hypergeometric";
    case Method::KnownConditional: return "known_conditional";
    case Method::KnownAveraged: return "known_averaged";
    case Method::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

ToneDetection tone_detection_integral(int M, int L, double xi, double sigma_y2, double tau) {
  if (std::isinf(tau)) return {0.0, 1.0};
  if (!(tau >= 0.0)) throw DomainError("threshold must be nonnegative");
  const int others = M - 1;
  auto log_density = [=](double x) { return specfun::log_ncx2_pdf_2L(x, L, xi, sigma_y2); };
  const double width = signal_spread(L, xi, sigma_y2);

  auto correct_integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    return std::exp(others * specfun::log_chi2_cdf_2L(x, L) + log_density(x));
  };
  const double correct =
      quadrature::integrate_to_infinity(correct_integrand, tau, width, kInnerOptions).value;
  if (correct < 0.5) return {correct, 1.0 - correct};

  // Complement: the tone is missed when it stays below tau or when it is
  // outgrown by at least one noise tone.
  auto density = [&](double x) { return x <= 0.0 && L > 1 ? 0.0 : std::exp(log_density(x)); };
  auto outgrown = [&](double x) {
    if (x <= 0.0) return 0.0;
    return -std::expm1(others * specfun::log_chi2_cdf_2L(x, L)) * std::exp(log_density(x));
  };
  double miss = quadrature::integrate_to_infinity(outgrown, tau, width, kInnerOptions).value;
  if (tau > 0.0) miss += quadrature::integrate(density, 0.0, tau, kInnerOptions).value;
  return {correct, miss};
}

double tone_detection_hypergeom(int M, int L, double xi, double sigma_y2, double tau) {
  if (M > kExpansionLimitM) return tone_detection_integral(M, L, xi, sigma_y2, tau).correct;
  if (std::isinf(tau)) return 0.0;
  if (!(tau >= 0.0)) throw DomainError("threshold must be nonnegative");

  const double log_s2 = std::log(sigma_y2);
  CompensatedSum total;
  for (int n = 0; n <= M - 1; ++n) {
    const std::vector<double> c = specfun::multinomial_coeffs(n, L);
    std::vector<double> log_c(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) log_c[i] = std::log(c[i]);

    // Integral over [0, inf) of x^i e^{-nx} f(x) in closed form.
    const double spread = 1.0 + n * sigma_y2;
    const double w = xi / (sigma_y2 * spread);
    const double log_common = -(xi / sigma_y2 - w) - L * std::log(spread);
    double log_closed = kNegInf;
    for (int i = 0; i < static_cast<int>(c.size()); ++i) {
      const double term = log_c[i] + i * (log_s2 - std::log(spread)) +
                          std::lgamma(static_cast<double>(i + L)) - std::lgamma(static_cast<double>(L)) +
                          log_common + specfun::log_confluent_hypergeometric_poly_neg(i, L, w);
      log_closed = specfun::log_add(log_closed, term);
    }

    // Residual over [0, tau] that the closed form over-counts.
    auto integrand = [&](double x) {
      if (x <= 0.0) return std::exp(specfun::log_ncx2_pdf_2L(0.0, L, xi, sigma_y2));
      const double log_x = std::log(x);
      double log_poly = kNegInf;
      for (std::size_t i = 0; i < log_c.size(); ++i) {
        log_poly = specfun::log_add(log_poly, log_c[i] + static_cast<double>(i) * log_x);
      }
      return std::exp(log_poly - n * x + specfun::log_ncx2_pdf_2L(x, L, xi, sigma_y2));
    };
    const double closed = std::exp(log_closed);
    double block = closed;
    if (tau > 0.0) {
      const double residual = quadrature::integrate(integrand, 0.0, tau, kInnerOptions).value;
      block = closed - residual;
      // Threshold beyond the bulk of the density: the difference would cancel,
      // so integrate the remaining tail directly.
      if (residual > 0.5 * closed) {
        const double width = signal_spread(L, xi, sigma_y2) / (1.0 + n * sigma_y2);
        block = quadrature::integrate_to_infinity(integrand, tau, width, kInnerOptions).value;
      }
    }

    const double weight = std::exp(log_binomial(M - 1, n));
    total.add((n % 2 == 0 ? weight : -weight) * block);
  }
  return total.value();
}

double pc1_unknown_integral(const SystemConfig& config) {
  config.validate();
  const double tau = detector::threshold_unknown(config);
  return tone_detection_integral(config.M, config.L, config.xi(), config.sigma_y2(), tau).correct;
}

double pc1_unknown_hypergeom(const SystemConfig& config) {
  config.validate();
  const double tau = detector::threshold_unknown(config);
  return tone_detection_hypergeom(config.M, config.L, config.xi(), config.sigma_y2(), tau);
}

double pc0(int M, int L, double tau) {
  if (M < 1) throw DomainError("M must be positive");
  if (std::isinf(tau)) return 1.0;
  return std::exp(M * specfun::log_chi2_cdf_2L(tau, L));
}

ErrorReport pe_unknown(const SystemConfig& config, Method method) {
  config.validate();
  require_independent(config);
  const double tau = detector::threshold_unknown(config);
  const double xi = config.xi();
  const double sigma_y2 = config.sigma_y2();
  switch (method) {
    case Method::DirectIntegral:
      return make_report(config.v, tone_detection_integral(config.M, config.L, xi, sigma_y2, tau),
                         tau, config.M, config.L, method);
    case Method::Hypergeometric: {
      const double pc1 = tone_detection_hypergeom(config.M, config.L, xi, sigma_y2, tau);
      ErrorReport r = make_report(config.v, {pc1, 1.0 - pc1}, tau, config.M, config.L, method);
      r.pe = 1.0 - (config.v * r.pc1 + (1.0 - config.v) * r.pc0);
      return r;
    }
    default:
      throw ConfigError("method", "pe_unknown supports the direct and hypergeometric routes only");
  }
}

ErrorReport pe_known_conditional(const SystemConfig& config, double chi) {
  config.validate();
  if (!(chi >= 0.0)) throw DomainError("chi must be nonnegative");
  const double xi = config.amplitude2() * chi;
  const double tau = detector::threshold_from_statistics(config.M, config.v, config.L, xi, 1.0);
  return make_report(config.v, tone_detection_integral(config.M, config.L, xi, 1.0, tau), tau,
                     config.M, config.L, Method::KnownConditional);
}

ErrorReport pe_known_average(const SystemConfig& config) {
  config.validate();
  require_independent(config);
  const double s2 = config.L * config.los_power();
  if (config.static_channel()) {
    ErrorReport r = pe_known_conditional(config, s2);
    r.method = Method::KnownAveraged;
    return r;
  }
  const double variance = config.diffuse_variance();

  struct Conditional {
    double miss1, miss0;
  };
  std::unordered_map<double, Conditional> memo;
  auto conditional = [&](double chi) -> const Conditional& {
    auto it = memo.find(chi);
    if (it != memo.end()) return it->second;
    const double xi = config.amplitude2() * chi;
    const double tau = detector::threshold_from_statistics(config.M, config.v, config.L, xi, 1.0);
    const ToneDetection tone = tone_detection_integral(config.M, config.L, xi, 1.0, tau);
    return memo.emplace(chi, Conditional{tone.miss, off_symbol_miss(config.M, config.L, tau)})
        .first->second;
  };
  auto weight = [&](double chi) {
    if (chi < 0.0) return 0.0;
    return std::exp(specfun::log_ncx2_pdf_2L(chi, config.L, s2, variance));
  };
  const double width = signal_spread(config.L, s2, variance);
  const double mean = config.L * variance + s2;

  auto average = [&](auto&& field) {
    auto integrand = [&](double chi) {
      const double w = weight(chi);
      return w == 0.0 ? 0.0 : field(conditional(chi)) * w;
    };
    // Split at the mean so a narrow law far from the origin is not stepped over.
    const double lower = std::max(0.0, mean - 40.0 * width);
    const double left = quadrature::integrate(integrand, lower, mean, kOuterOptions).value;
    return left +
           quadrature::integrate_to_infinity(integrand, mean, width, kOuterOptions, 1e-10).value;
  };

  ErrorReport report;
  report.method = Method::KnownAveraged;
  const double miss1 = average([](const Conditional& c) { return c.miss1; });
  const double miss0 = config.v < 1.0 ? average([](const Conditional& c) { return c.miss0; }) : 1.0;
  report.pc1 = 1.0 - miss1;
  report.pc0 = 1.0 - miss0;
  report.pe = config.v * miss1 + (1.0 - config.v) * miss0;
  return report;
}

ErrorReport pe_analytic(const SystemConfig& config) {
  return config.knowledge == ChannelKnowledge::DistributionOnly ? pe_unknown(config)
                                                                : pe_known_average(config);
}

double asymptotic_pe(double v, int M) {
  if (!(v > 0.0 && v <= 1.0)) throw DomainError("duty cycle must lie in (0, 1]");
  if (M < 1) throw DomainError("M must be positive");
  const double hinge = static_cast<double>(M) / (M + 1);
  if (v == hinge) {
    throw DomainError("low-SNR limit is not determined at v = M/(M+1)");
  }
  return v < hinge ? v : (M - v) / M;
}

double entropy_bits(double v, int M) {
  if (!(v > 0.0 && v <= 1.0)) throw DomainError("duty cycle must lie in (0, 1]");
  if (M < 1) throw DomainError("M must be positive");
  const double on = v * std::log2(M / v);
  const double off = v < 1.0 ? -(1.0 - v) * std::log2(1.0 - v) : 0.0;
  return on + off;
}

double ebn0_db(const SystemConfig& config) {
  return linear_to_db(config.snr / entropy_bits(config.v, config.M));
}

double snr_from_ebn0_db(double ebn0, double v, int M) {
  return entropy_bits(v, M) * db_to_linear(ebn0);
}

}  // namespace oofsk::analytic
