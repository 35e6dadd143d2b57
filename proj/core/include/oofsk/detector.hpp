// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#pragma once

#include <span>

#include "oofsk/model.hpp"
#include "oofsk/specfun.hpp"

namespace oofsk::detector {

/// Everything the MAP rule needs once the channel statistics are fixed.
/// MagnitudeKnown contexts always carry sigma_y2 == 1: known magnitudes are
/// the zero-variance special case of the distribution-only receiver.
struct DetectorContext {
  ChannelKnowledge mode = ChannelKnowledge::DistributionOnly;
  int L = 1;
  double xi = 0.0;
  double sigma_y2 = 1.0;
  double tau = 0.0;

  /// Exponential tilt A^2 sigma^2 / sigma_y^2 = 1 - 1/sigma_y^2.
  double tilt() const noexcept { return 1.0 - 1.0 / sigma_y2; }
};

/// ln g(x) with g(x) = x^{-(L-1)/2} exp(x * tilt) I_{L-1}(2 sqrt(x xi) / sigma_y^2).
/// Requires x > 0 and xi > 0 (DomainError otherwise).
specfun::LogValue log_g1(double x, const DetectorContext& ctx);

/// ln lim_{x->0} g(x) = ln[xi^{(L-1)/2} / (sigma_y^{2(L-1)} (L-1)!)].
double log_g1_limit(const DetectorContext& ctx);

/// ln[g(x) / g(0+)]; well defined for xi >= 0, where xi = 0 reduces g to the
/// pure exponential tilt.
double log_g_normalized(double x, int L, double xi, double sigma_y2);

/// MAP threshold tau solving g(tau) = T with
/// T = M(1-v) sigma_y^2 xi^{(L-1)/2} e^{xi/sigma_y^2} / (v (L-1)!), or 0 when T
/// is below g(0+). Bisection in log space, bracket grown by doubling.
/// For xi = 0 the ratio of central chi-square densities is used instead; if
/// that ratio is constant and never exceeds the prior odds the result is +inf
/// (a tone is never decided).
double threshold_from_statistics(int M, double v, int L, double xi, double sigma_y2);

/// Distribution-only threshold tau_1 for `config`.
double threshold_unknown(const SystemConfig& config);

/// Known-magnitude threshold tau_2 for noncentrality xi = A^2 sum |h_l|^2.
double threshold_known(const SystemConfig& config, double xi);

DetectorContext unknown_context(const SystemConfig& config);
DetectorContext known_context(const SystemConfig& config, double xi);

/// 1-based index of the largest energy (lowest index on ties) when it strictly
/// exceeds tau; otherwise 0, the off symbol.
int detect(std::span<const double> energies, double tau) noexcept;
int detect(const model::EnergyVector& r, const DetectorContext& ctx) noexcept;

}  // namespace oofsk::detector
