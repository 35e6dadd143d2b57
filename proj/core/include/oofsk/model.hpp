// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>

#include "oofsk/random.hpp"

namespace oofsk {

enum class ChannelKnowledge { DistributionOnly, MagnitudeKnown };

std::string to_string(ChannelKnowledge knowledge);

/// How the Rician factor splits the per-antenna channel gain.
/// UnitTotal: |d|^2 + sigma^2 = 1, so |d|^2 = K/(K+1) and sigma^2 = 1/(K+1).
/// UnitDiffuse: sigma^2 = 1 and |d|^2 = K, so E|h|^2 = 1 + K.
enum class ChannelPower { UnitTotal, UnitDiffuse };

std::string to_string(ChannelPower power);

/// All parameters of the OOFSK link. Noise is normalized (T_s = N_0 = 1) so
/// `snr` is P*T_s/N_0 and the peak amplitude satisfies A^2 = snr / v. By
/// default each antenna carries |d|^2 + sigma^2 = 1 with K = |d|^2/sigma^2, and
/// K = +inf is the static (non-fading) channel. See ChannelPower for the
/// alternative split.
struct SystemConfig {
  int M = 8;
  double v = 1.0;
  int L = 1;
  double snr = 1.0;
  double rician_K = 1.0;
  double rho = 0.0;
  ChannelKnowledge knowledge = ChannelKnowledge::DistributionOnly;
  ChannelPower power = ChannelPower::UnitTotal;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  double amplitude2() const noexcept { return snr / v; }
  double los_power() const noexcept;
  double diffuse_variance() const noexcept;
  /// xi = A^2 sum_l |d_l|^2 (distribution-only noncentrality).
  double xi() const noexcept { return amplitude2() * L * los_power(); }
  /// sigma_y^2 = A^2 sigma^2 + 1.
  double sigma_y2() const noexcept { return amplitude2() * diffuse_variance() + 1.0; }
  bool static_channel() const noexcept { return diffuse_variance() == 0.0; }

  bool operator==(const SystemConfig&) const = default;
};

namespace model {

struct ChannelRealization {
  Eigen::VectorXcd h;
};

/// L x M correlator outputs; column m-1 holds tone m.
struct CorrelatorMatrix {
  Eigen::MatrixXcd y;
};

/// Combined energies; entry m-1 holds tone m.
struct EnergyVector {
  Eigen::VectorXd r;
};

/// 0 with probability 1-v, otherwise a tone in 1..M with probability v/M each.
int draw_symbol(const SystemConfig& config, rng::RandomStream& rng);

/// Rician channel sampler h = d + C w, with C the lower Cholesky factor of the
/// equi-correlated covariance sigma^2 [(1-rho) I + rho 11^T] and w i.i.d.
/// unit circular complex Gaussians. Means are real and equal across antennas.
class ChannelModel {
 public:
  explicit ChannelModel(const SystemConfig& config);

  void draw(rng::RandomStream& rng, Eigen::VectorXcd& h) const;
  ChannelRealization draw(rng::RandomStream& rng) const;

  const Eigen::VectorXcd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }

 private:
  Eigen::VectorXcd mean_;
  Eigen::MatrixXd factor_;
  bool random_ = true;
};

ChannelRealization draw_channel(const SystemConfig& config, rng::RandomStream& rng);

enum class Noise { On, Off };

/// y_{l,m} = A h_l e^{j theta} [m == symbol] + n_{l,m}; theta is uniform and
/// drawn first from `rng`, then the noise in column-major order.
void correlator_outputs(const SystemConfig& config, int symbol, const Eigen::VectorXcd& h,
                        rng::RandomStream& rng, CorrelatorMatrix& out, Noise noise = Noise::On);
CorrelatorMatrix correlator_outputs(const SystemConfig& config, int symbol,
                                    const ChannelRealization& h, rng::RandomStream& rng,
                                    Noise noise = Noise::On);

void combine_energies(const CorrelatorMatrix& y, EnergyVector& out);
EnergyVector combine_energies(const CorrelatorMatrix& y);

/// Energy radiated in one symbol interval: A^2 for a tone, 0 for the off symbol.
double transmitted_energy(const SystemConfig& config, int symbol) noexcept;

}  // namespace model
}  // namespace oofsk
