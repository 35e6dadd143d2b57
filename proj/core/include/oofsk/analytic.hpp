// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "oofsk/model.hpp"

namespace oofsk::analytic {

/// How an ErrorReport was produced.
enum class Method {
  DirectIntegral,  // quadrature of CDF^{M-1} times the signal-tone density
  Hypergeometric,  // binomial/multinomial expansion with Kummer closed forms
  KnownConditional,
  KnownAveraged,
  MonteCarlo,
};

std::string to_string(Method method);

/// Error and correct-detection probabilities. For analytic methods
/// pe == 1 - (v*pc1 + (1-v)*pc0) up to rounding and std_error is 0.
struct ErrorReport {
  double pe = 0.0;
  double pc1 = 0.0;
  double pc0 = 0.0;
  Method method = Method::DirectIntegral;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Correct-detection probability of a transmitted tone given the decision
/// statistics (signal tone energy ~ scaled noncentral chi-square with 2L
/// degrees of freedom, noncentrality xi, per-component scale sigma_y2) and
/// the threshold tau. `miss` is 1 - `correct`, computed without cancellation.
struct ToneDetection {
  double correct = 0.0;
  double miss = 1.0;
};

ToneDetection tone_detection_integral(int M, int L, double xi, double sigma_y2, double tau);

/// Same quantity through the finite binomial/multinomial expansion: closed
/// forms in F(-i, L; -z) for the integral over [0, inf) minus a residual
/// integral over [0, tau]. Falls back to the direct integral for M > 32.
double tone_detection_hypergeom(int M, int L, double xi, double sigma_y2, double tau);

double pc1_unknown_integral(const SystemConfig& config);
double pc1_unknown_hypergeom(const SystemConfig& config);

/// P(all M noise-only energies stay below tau) = P(L, tau)^M.
double pc0(int M, int L, double tau);

/// Distribution-only receiver. `method` selects the route for pc1
/// (DirectIntegral or Hypergeometric). Correlated channels are rejected.
ErrorReport pe_unknown(const SystemConfig& config, Method method = Method::DirectIntegral);

/// Known-magnitude receiver conditioned on chi = sum_l |h_l|^2.
ErrorReport pe_known_conditional(const SystemConfig& config, double chi);

/// Known-magnitude receiver averaged over the noncentral chi-square law of chi.
/// Independent channels only (ConfigError for rho != 0).
ErrorReport pe_known_average(const SystemConfig& config);

/// Analytic error probability for whichever receiver `config.knowledge` names.
ErrorReport pe_analytic(const SystemConfig& config);

/// Low-SNR limit of pe: v below the hinge M/(M+1), (M-v)/M above it.
/// DomainError at the hinge itself.
double asymptotic_pe(double v, int M);

/// Source entropy H(v) = v log2(M/v) + (1-v) log2(1/(1-v)) in bits/symbol.
double entropy_bits(double v, int M);

double ebn0_db(const SystemConfig& config);
double snr_from_ebn0_db(double ebn0_db, double v, int M);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace oofsk::analytic
