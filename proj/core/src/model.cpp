// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#include "oofsk/model.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>

#include "oofsk/errors.hpp"

namespace oofsk {

std::string to_string(ChannelKnowledge knowledge) {
  return knowledge == ChannelKnowledge::DistributionOnly ? "distribution" : "magnitude";
}

std::string to_string(ChannelPower power) {
  return power == ChannelPower::UnitTotal ? "total" : "diffuse";
}

double SystemConfig::los_power() const noexcept {
  if (power == ChannelPower::UnitDiffuse) return rician_K;
  if (std::isinf(rician_K)) return 1.0;
  return rician_K / (rician_K + 1.0);
}

double SystemConfig::diffuse_variance() const noexcept {
  if (power == ChannelPower::UnitDiffuse) return 1.0;
  if (std::isinf(rician_K)) return 0.0;
  return 1.0 / (rician_K + 1.0);
}

void SystemConfig::validate() const {
  if (M < 2) throw ConfigError("M", "number of tones must be at least 2");
  if (!(v > 0.0 && v <= 1.0)) throw ConfigError("v", "duty cycle must lie in (0, 1]");
  if (L < 1) throw ConfigError("L", "number of antennas must be at least 1");
  if (!(snr >= 0.0) || std::isinf(snr)) throw ConfigError("snr", "SNR must be finite and nonnegative");
  if (!(rician_K >= 0.0)) throw ConfigError("K", "Rician factor must be nonnegative");
  if (power == ChannelPower::UnitDiffuse && std::isinf(rician_K)) {
    throw ConfigError("K", "K = inf needs the unit-total channel power convention");
  }
  if (!(rho < 1.0)) throw ConfigError("rho", "correlation must be below 1");
  if (L > 1 && !(rho > -1.0 / (L - 1))) {
    throw ConfigError("rho", "correlation must exceed -1/(L-1) for a positive definite covariance");
  }
  if (std::isnan(rho)) throw ConfigError("rho", "correlation is NaN");
}

namespace model {

int draw_symbol(const SystemConfig& config, rng::RandomStream& rng) {
  const double u = rng.uniform();
  const double off = 1.0 - config.v;
  if (u < off) return 0;
  const int tone = 1 + static_cast<int>((u - off) / config.v * config.M);
  return std::min(tone, config.M);
}

ChannelModel::ChannelModel(const SystemConfig& config) {
  config.validate();
  mean_ = Eigen::VectorXcd::Constant(config.L, std::sqrt(config.los_power()));
  const double variance = config.diffuse_variance();
  random_ = variance > 0.0;
  if (!random_) {
    factor_ = Eigen::MatrixXd::Zero(config.L, config.L);
    return;
  }
  Eigen::MatrixXd covariance =
      Eigen::MatrixXd::Constant(config.L, config.L, variance * config.rho);
  covariance.diagonal().setConstant(variance);
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("rho", "channel covariance is not positive definite");
  }
  factor_ = llt.matrixL();
}

void ChannelModel::draw(rng::RandomStream& rng, Eigen::VectorXcd& h) const {
  h = mean_;
  if (!random_) return;
  const auto n = mean_.size();
  Eigen::VectorXcd w(n);
  for (Eigen::Index l = 0; l < n; ++l) w[l] = rng.complex_normal();
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index j = 0; j <= l; ++j) h[l] += factor_(l, j) * w[j];
  }
}

ChannelRealization ChannelModel::draw(rng::RandomStream& rng) const {
  ChannelRealization out;
  draw(rng, out.h);
  return out;
}

ChannelRealization draw_channel(const SystemConfig& config, rng::RandomStream& rng) {
  return ChannelModel(config).draw(rng);
}

void correlator_outputs(const SystemConfig& config, int symbol, const Eigen::VectorXcd& h,
                        rng::RandomStream& rng, CorrelatorMatrix& out, Noise noise) {
  if (symbol < 0 || symbol > config.M) {
    throw DomainError("symbol index " + std::to_string(symbol) + " outside 0..M");
  }
  out.y.resize(config.L, config.M);
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  if (noise == Noise::On) {
    for (Eigen::Index m = 0; m < out.y.cols(); ++m) {
      for (Eigen::Index l = 0; l < out.y.rows(); ++l) out.y(l, m) = rng.complex_normal();
    }
  } else {
    out.y.setZero();
  }
  if (symbol > 0) {
    const std::complex<double> rotation = std::polar(std::sqrt(config.amplitude2()), theta);
    out.y.col(symbol - 1) += rotation * h;
  }
}

CorrelatorMatrix correlator_outputs(const SystemConfig& config, int symbol,
                                    const ChannelRealization& h, rng::RandomStream& rng,
                                    Noise noise) {
  CorrelatorMatrix out;
  correlator_outputs(config, symbol, h.h, rng, out, noise);
  return out;
}

void combine_energies(const CorrelatorMatrix& y, EnergyVector& out) {
  out.r = y.y.cwiseAbs2().colwise().sum().transpose();
}

EnergyVector combine_energies(const CorrelatorMatrix& y) {
  EnergyVector out;
  combine_energies(y, out);
  return out;
}

double transmitted_energy(const SystemConfig& config, int symbol) noexcept {
  return symbol == 0 ? 0.0 : config.amplitude2();
}

}  // namespace model
}  // namespace oofsk
