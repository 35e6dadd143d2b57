// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#pragma once

#include <functional>

namespace oofsk::quadrature {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b]. The
/// interval with the largest error estimate is bisected until the summed
/// estimate is within max(abs_tol, rel_tol*|I|) or sits at the roundoff floor.
/// Throws NumericError when the interval budget runs out first.
Result integrate(const Integrand& f, double a, double b, const Options& options = {});

/// Integral over [a, inf) for integrands with exponentially decaying tails.
/// Consecutive panels of doubling width (starting at `width`) are integrated
/// until the integrand has stayed below 1e-16 of its running maximum, and the
/// panel contributions below the relative tail tolerance, for three panels.
/// An integrand that is identically zero over 200 panels integrates to 0.
Result integrate_to_infinity(const Integrand& f, double a, double width,
                             const Options& options = {}, double tail_rel_tol = 1e-12);

}  // namespace oofsk::quadrature
