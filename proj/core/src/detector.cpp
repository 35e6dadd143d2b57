// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#include "oofsk/detector.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "oofsk/errors.hpp"

namespace oofsk::detector {

namespace {

constexpr int kMaxDoublings = 200;
constexpr int kMaxBisections = 200;
constexpr double kLogTolerance = 1e-12;

void require_statistics(int L, double xi, double sigma_y2) {
  if (L < 1) throw DomainError("L must be positive");
  if (!(xi >= 0.0)) throw DomainError("xi must be nonnegative");
  if (!(sigma_y2 >= 1.0)) throw DomainError("sigma_y^2 must be at least 1");
}

}  // namespace

specfun::LogValue log_g1(double x, const DetectorContext& ctx) {
  if (!(x > 0.0)) throw DomainError("g1 is defined for x > 0");
  if (!(ctx.xi > 0.0)) throw DomainError("g1 requires xi > 0");
  return {log_g1_limit(ctx) + log_g_normalized(x, ctx.L, ctx.xi, ctx.sigma_y2)};
}

double log_g1_limit(const DetectorContext& ctx) {
  if (!(ctx.xi > 0.0)) throw DomainError("g1 requires xi > 0");
  const int order = ctx.L - 1;
  return 0.5 * order * std::log(ctx.xi) - order * std::log(ctx.sigma_y2) -
         specfun::log_factorial(order);
}

double log_g_normalized(double x, int L, double xi, double sigma_y2) {
  require_statistics(L, xi, sigma_y2);
  const double tilt = 1.0 - 1.0 / sigma_y2;
  const double z = 2.0 * std::sqrt(x * xi) / sigma_y2;
  return x * tilt + specfun::log_bessel_i_normalized(L - 1, z);
}

double threshold_from_statistics(int M, double v, int L, double xi, double sigma_y2) {
  require_statistics(L, xi, sigma_y2);
  if (!(v > 0.0 && v <= 1.0)) throw DomainError("duty cycle must lie in (0, 1]");
  if (v == 1.0) return 0.0;

  // ln(T / g(0+))
  const double target = std::log(M * (1.0 - v) / v) + L * std::log(sigma_y2) + xi / sigma_y2;
  if (target <= 0.0) return 0.0;

  const double tilt = 1.0 - 1.0 / sigma_y2;
  if (xi == 0.0) {
    if (tilt == 0.0) return std::numeric_limits<double>::infinity();
    return target / tilt;
  }

  auto excess = [&](double x) { return log_g_normalized(x, L, xi, sigma_y2) - target; };

  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (excess(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > kMaxDoublings) {
      std::ostringstream msg;
      msg << "threshold bracket not found (M=" << M << ", v=" << v << ", L=" << L
          << ", xi=" << xi << ", sigma_y2=" << sigma_y2 << ")";
      throw NumericError(msg.str());
    }
  }

  for (int it = 0; it < kMaxBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = excess(mid);
    if (std::abs(f) <= kLogTolerance) return mid;
    (f < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double threshold_unknown(const SystemConfig& config) {
  config.validate();
  return threshold_from_statistics(config.M, config.v, config.L, config.xi(), config.sigma_y2());
}

double threshold_known(const SystemConfig& config, double xi) {
  config.validate();
  return threshold_from_statistics(config.M, config.v, config.L, xi, 1.0);
}

DetectorContext unknown_context(const SystemConfig& config) {
  return {ChannelKnowledge::DistributionOnly, config.L, config.xi(), config.sigma_y2(),
          threshold_unknown(config)};
}

DetectorContext known_context(const SystemConfig& config, double xi) {
  return {ChannelKnowledge::MagnitudeKnown, config.L, xi, 1.0, threshold_known(config, xi)};
}

int detect(std::span<const double> energies, double tau) noexcept {
  int best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < energies.size(); ++m) {
    if (energies[m] > best_value) {
      best_value = energies[m];
      best = static_cast<int>(m);
    }
  }
  if (best < 0 || !(best_value > tau)) return 0;
  return best + 1;
}

int detect(const model::EnergyVector& r, const DetectorContext& ctx) noexcept {
  return detect(std::span<const double>(r.r.data(), static_cast<std::size_t>(r.r.size())), ctx.tau);
}

}  // namespace oofsk::detector
