// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "oofsk/errors.hpp"
#include "oofsk/model.hpp"
#include "oofsk/specfun.hpp"

using namespace oofsk;
using namespace oofsk::model;
using rng::Purpose;
using rng::RandomStream;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One-sample Kolmogorov-Smirnov statistic.
template <typename Cdf>
double ks_statistic(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

// 1% critical value of the KS statistic for large n.
double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace

TEST(SystemConfig, DerivedQuantities) {
  SystemConfig c{8, 0.5, 2, 4.0, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(c.amplitude2(), 8.0);
  EXPECT_DOUBLE_EQ(c.los_power(), 0.5);
  EXPECT_DOUBLE_EQ(c.diffuse_variance(), 0.5);
  EXPECT_DOUBLE_EQ(c.xi(), 8.0);
  EXPECT_DOUBLE_EQ(c.sigma_y2(), 5.0);
  EXPECT_FALSE(c.static_channel());

  c.rician_K = kInf;
  EXPECT_EQ(c.los_power(), 1.0);
  EXPECT_EQ(c.diffuse_variance(), 0.0);
  EXPECT_TRUE(c.static_channel());
  EXPECT_EQ(c.sigma_y2(), 1.0);

  c.rician_K = 0.0;
  EXPECT_EQ(c.xi(), 0.0);
  EXPECT_EQ(c.diffuse_variance(), 1.0);
}

TEST(SystemConfig, UnitDiffuseConvention) {
  SystemConfig c{8, 1.0, 2, 1.0, 4.0, 0.0};
  c.power = ChannelPower::UnitDiffuse;
  EXPECT_EQ(c.los_power(), 4.0);
  EXPECT_EQ(c.diffuse_variance(), 1.0);
  EXPECT_EQ(c.sigma_y2(), 2.0);
  c.rician_K = 0.0;
  SystemConfig total = c;
  total.power = ChannelPower::UnitTotal;
  EXPECT_EQ(c.xi(), total.xi());
  EXPECT_EQ(c.sigma_y2(), total.sigma_y2());
  c.rician_K = kInf;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(SystemConfig, ValidationNamesTheField) {
  auto field_of = [](SystemConfig c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("ok");
  };
  const SystemConfig good{8, 0.5, 2, 1.0, 1.0, 0.0};
  EXPECT_EQ(field_of(good), "ok");
  auto with = [&](auto mutate) {
    SystemConfig c = good;
    mutate(c);
    return field_of(c);
  };
  EXPECT_EQ(with([](SystemConfig& c) { c.M = 1; }), "M");
  EXPECT_EQ(with([](SystemConfig& c) { c.v = 0.0; }), "v");
  EXPECT_EQ(with([](SystemConfig& c) { c.v = 1.5; }), "v");
  EXPECT_EQ(with([](SystemConfig& c) { c.L = 0; }), "L");
  EXPECT_EQ(with([](SystemConfig& c) { c.snr = -1.0; }), "snr");
  EXPECT_EQ(with([](SystemConfig& c) { c.snr = kInf; }), "snr");
  EXPECT_EQ(with([](SystemConfig& c) { c.rician_K = -0.1; }), "K");
  EXPECT_EQ(with([](SystemConfig& c) { c.rho = 1.0; }), "rho");
  EXPECT_EQ(with([](SystemConfig& c) { c.rho = -1.0; }), "rho");
  EXPECT_EQ(with([](SystemConfig& c) { c.L = 4, c.rho = -0.4; }), "rho");
  EXPECT_EQ(with([](SystemConfig& c) { c.L = 4, c.rho = -0.3; }), "ok");
  EXPECT_EQ(with([](SystemConfig& c) { c.L = 1, c.rho = -5.0; }), "ok");
}

TEST(DrawSymbol, NeverOffWhenDutyCycleIsOne) {
  const SystemConfig c{8, 1.0, 1, 1.0, 1.0, 0.0};
  for (std::uint64_t t = 0; t < 100'000; ++t) {
    RandomStream s(1, t, Purpose::Symbol);
    const int k = draw_symbol(c, s);
    ASSERT_GE(k, 1);
    ASSERT_LE(k, 8);
  }
}

TEST(DrawSymbol, Frequencies) {
  const int n = 1'000'000;
  {
    const SystemConfig c{8, 0.1, 1, 1.0, 1.0, 0.0};
    int off = 0;
    for (int t = 0; t < n; ++t) {
      RandomStream s(2, t, Purpose::Symbol);
      off += draw_symbol(c, s) == 0;
    }
    EXPECT_NEAR(off / double(n), 0.9, 0.001);
  }
  {
    const SystemConfig c{2, 0.5, 1, 1.0, 1.0, 0.0};
    int counts[3] = {0, 0, 0};
    for (int t = 0; t < n; ++t) {
      RandomStream s(3, t, Purpose::Symbol);
      ++counts[draw_symbol(c, s)];
    }
    EXPECT_NEAR(counts[1] / double(n), 0.25, 0.002);
    EXPECT_NEAR(counts[2] / double(n), 0.25, 0.002);
  }
}

TEST(DrawChannel, StaticChannelIsDeterministic) {
  const SystemConfig c{4, 1.0, 3, 1.0, kInf, 0.0};
  RandomStream s(1, 0, Purpose::Channel);
  const auto h = draw_channel(c, s);
  ASSERT_EQ(h.h.size(), 3);
  for (int l = 0; l < 3; ++l) EXPECT_EQ(h.h[l], std::complex<double>(1.0, 0.0));
}

TEST(DrawChannel, UnitAveragePower) {
  const SystemConfig c{4, 1.0, 2, 1.0, 1.0, 0.0};
  const ChannelModel model(c);
  Eigen::VectorXcd h;
  const int n = 1'000'000;
  double power = 0.0;
  std::complex<double> mean = 0.0;
  for (int t = 0; t < n; ++t) {
    RandomStream s(4, t, Purpose::Channel);
    model.draw(s, h);
    power += std::norm(h[0]);
    mean += h[1];
  }
  EXPECT_NEAR(power / n, 1.0, 0.005);
  EXPECT_NEAR(mean.real() / n, std::sqrt(0.5), 0.003);
  EXPECT_NEAR(mean.imag() / n, 0.0, 0.003);
}

TEST(DrawChannel, EquicorrelatedCovariance) {
  const SystemConfig c{4, 1.0, 2, 1.0, 0.125, 0.25};
  const ChannelModel model(c);
  Eigen::VectorXcd h;
  const int n = 1'000'000;
  std::complex<double> cross = 0.0;
  double var0 = 0.0, var1 = 0.0;
  const std::complex<double> d = model.mean()[0];
  for (int t = 0; t < n; ++t) {
    RandomStream s(5, t, Purpose::Channel);
    model.draw(s, h);
    const auto a = h[0] - d, b = h[1] - d;
    cross += a * std::conj(b);
    var0 += std::norm(a);
    var1 += std::norm(b);
  }
  const double rho = std::abs(cross) / std::sqrt(var0 * var1);
  EXPECT_NEAR(rho, 0.25, 0.01);
  EXPECT_NEAR(var0 / n, 1.0 / 1.125, 0.01);
  // Factor is lower triangular and reproduces the covariance.
  const Eigen::MatrixXd& C = model.factor();
  EXPECT_EQ(C(0, 1), 0.0);
  const Eigen::MatrixXd cov = C * C.transpose();
  EXPECT_NEAR(cov(0, 1), 0.25 / 1.125, 1e-15);
  EXPECT_NEAR(cov(1, 1), 1.0 / 1.125, 1e-15);
}

TEST(DrawChannel, RejectsIndefiniteCovariance) {
  const SystemConfig c{4, 1.0, 3, 1.0, 1.0, -0.6};
  EXPECT_THROW(ChannelModel{c}, ConfigError);
}

TEST(CorrelatorOutputs, NoiseFreeSignalColumn) {
  const SystemConfig c{4, 0.5, 2, 3.0, 1.0, 0.0};
  ChannelRealization h{Eigen::VectorXcd(2)};
  h.h << std::complex<double>(0.6, 0.8), std::complex<double>(-1.5, 0.0);
  RandomStream s(1, 0, Purpose::Noise);
  const auto y = correlator_outputs(c, 3, h, s, Noise::Off);
  ASSERT_EQ(y.y.rows(), 2);
  ASSERT_EQ(y.y.cols(), 4);
  for (int l = 0; l < 2; ++l) {
    for (int m = 0; m < 4; ++m) {
      const double expected = m == 2 ? c.amplitude2() * std::norm(h.h[l]) : 0.0;
      EXPECT_NEAR(std::norm(y.y(l, m)), expected, 1e-12);
    }
  }
  RandomStream s2(1, 0, Purpose::Noise);
  EXPECT_EQ(combine_energies(correlator_outputs(c, 0, h, s2, Noise::Off)).r.sum(), 0.0);
}

TEST(CorrelatorOutputs, RejectsBadSymbol) {
  const SystemConfig c{4, 0.5, 2, 3.0, 1.0, 0.0};
  ChannelRealization h{Eigen::VectorXcd::Ones(2)};
  RandomStream s(1, 0, Purpose::Noise);
  EXPECT_THROW(correlator_outputs(c, 5, h, s), DomainError);
  EXPECT_THROW(correlator_outputs(c, -1, h, s), DomainError);
}

TEST(CorrelatorOutputs, OffSymbolIsUnitNoise) {
  const SystemConfig c{3, 0.5, 2, 10.0, 1.0, 0.0};
  ChannelRealization h{Eigen::VectorXcd::Ones(2)};
  const int n = 200'000;
  Eigen::ArrayXXd power = Eigen::ArrayXXd::Zero(2, 3);
  for (int t = 0; t < n; ++t) {
    RandomStream s(6, t, Purpose::Noise);
    power += correlator_outputs(c, 0, h, s).y.array().abs2();
  }
  power /= n;
  for (int l = 0; l < 2; ++l) {
    for (int m = 0; m < 3; ++m) EXPECT_NEAR(power(l, m), 1.0, 0.01);
  }
}

TEST(CorrelatorOutputs, SignalColumnVariance) {
  const SystemConfig c{2, 1.0, 1, 4.0, 1.0, 0.0};
  const ChannelModel channel(c);
  const int n = 1'000'000;
  std::complex<double> sum = 0.0, derotated_sum = 0.0;
  double sum2 = 0.0, derotated_sum2 = 0.0;
  Eigen::VectorXcd h;
  CorrelatorMatrix y;
  for (int t = 0; t < n; ++t) {
    RandomStream cs(7, t, Purpose::Channel), ns(7, t, Purpose::Noise);
    RandomStream phase_copy = ns;
    channel.draw(cs, h);
    correlator_outputs(c, 1, h, ns, y);
    sum += y.y(0, 0);
    sum2 += std::norm(y.y(0, 0));
    // The carrier phase is the first draw of the noise stream.
    const double theta = 2.0 * std::numbers::pi * phase_copy.uniform();
    const std::complex<double> z = y.y(0, 0) * std::polar(1.0, -theta);
    derotated_sum += z;
    derotated_sum2 += std::norm(z);
  }
  const std::complex<double> mean = derotated_sum / double(n);
  const double conditional_variance = derotated_sum2 / n - std::norm(mean);
  EXPECT_NEAR(mean.real(), std::sqrt(c.amplitude2() * c.los_power()), 0.01);
  EXPECT_NEAR(conditional_variance / (c.amplitude2() * c.diffuse_variance() + 1.0), 1.0, 0.01);
  // The uniform carrier phase makes the column zero-mean, so its variance is
  // A^2 E|h|^2 + 1; the fluctuating part alone is A^2 sigma^2 + 1.
  EXPECT_NEAR(std::abs(sum) / n, 0.0, 0.01);
  EXPECT_NEAR(sum2 / n / (c.amplitude2() + 1.0), 1.0, 0.01);
}

TEST(CombineEnergies, Arithmetic) {
  CorrelatorMatrix y{Eigen::MatrixXcd::Zero(2, 3)};
  EXPECT_EQ(combine_energies(y).r, Eigen::VectorXd::Zero(3));
  y.y(0, 1) = {3.0, 4.0};
  const auto r = combine_energies(y);
  EXPECT_EQ(r.r[1], 25.0);
  EXPECT_EQ(r.r[0], 0.0);
}

TEST(CombineEnergies, OffSymbolMeanIsL) {
  const SystemConfig c{4, 0.5, 2, 1.0, 1.0, 0.0};
  ChannelRealization h{Eigen::VectorXcd::Ones(2)};
  const int n = 1'000'000;
  double sum = 0.0;
  for (int t = 0; t < n; ++t) {
    RandomStream s(8, t, Purpose::Noise);
    sum += combine_energies(correlator_outputs(c, 0, h, s)).r[2];
  }
  EXPECT_NEAR(sum / n, 2.0, 0.01);
}

TEST(CombineEnergies, NoiseOnlyEnergiesFollowCentralLaw) {
  for (int L : {1, 3}) {
    const SystemConfig c{4, 0.5, L, 1.0, 1.0, 0.0};
    ChannelRealization h{Eigen::VectorXcd::Ones(L)};
    std::vector<double> sample;
    for (int t = 0; t < 100'000; ++t) {
      RandomStream s(9, t, Purpose::Noise);
      sample.push_back(combine_energies(correlator_outputs(c, 2, h, s)).r[0]);
    }
    const double d = ks_statistic(sample, [L](double x) { return specfun::chi2_cdf_2L(x, L); });
    EXPECT_LT(d, ks_critical_1pct(sample.size())) << "L=" << L;
  }
}

TEST(CombineEnergies, SignalEnergyFollowsNoncentralLaw) {
  for (int L : {1, 2, 4}) {
    const SystemConfig c{4, 0.5, L, 2.0, 1.0, 0.0};
    const ChannelModel channel(c);
    Eigen::VectorXcd h;
    CorrelatorMatrix y;
    std::vector<double> sample;
    for (int t = 0; t < 100'000; ++t) {
      RandomStream cs(10, t, Purpose::Channel), ns(10, t, Purpose::Noise);
      channel.draw(cs, h);
      correlator_outputs(c, 1, h, ns, y);
      sample.push_back(combine_energies(y).r[0]);
    }
    // 2 R / sigma_y^2 is noncentral chi-square with 2L dof and noncentrality 2 xi / sigma_y^2.
    const double s2 = c.sigma_y2();
    const boost::math::non_central_chi_squared law(2.0 * L, 2.0 * c.xi() / s2);
    const double d = ks_statistic(sample, [&](double x) { return boost::math::cdf(law, 2.0 * x / s2); });
    EXPECT_LT(d, ks_critical_1pct(sample.size())) << "L=" << L;
  }
}

TEST(TransmittedEnergy, AverageEqualsSnr) {
  const SystemConfig c{8, 0.3, 1, 5.0, 1.0, 0.0};
  EXPECT_EQ(transmitted_energy(c, 0), 0.0);
  EXPECT_DOUBLE_EQ(transmitted_energy(c, 4), 5.0 / 0.3);
  const int n = 1'000'000;
  double total = 0.0;
  for (int t = 0; t < n; ++t) {
    RandomStream s(11, t, Purpose::Symbol);
    total += transmitted_energy(c, draw_symbol(c, s));
  }
  EXPECT_NEAR(total / n / c.snr, 1.0, 0.01);
}
