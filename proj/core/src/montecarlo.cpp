// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#include "oofsk/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <thread>

#include "oofsk/detector.hpp"
#include "oofsk/errors.hpp"
#include "oofsk/random.hpp"

namespace oofsk::montecarlo {

Tally& Tally::operator+=(const Tally& other) noexcept {
  trials += other.trials;
  errors += other.errors;
  tone_sent += other.tone_sent;
  tone_correct += other.tone_correct;
  off_sent += other.off_sent;
  off_correct += other.off_correct;
  return *this;
}

void Tally::record(const TrialOutcome& outcome) noexcept {
  ++trials;
  const bool correct = outcome.sent == outcome.decided;
  if (!correct) ++errors;
  if (outcome.sent == 0) {
    ++off_sent;
    off_correct += correct;
  } else {
    ++tone_sent;
    tone_correct += correct;
  }
}

double ThresholdCache::tau(double xi) {
  if (!(xi > 0.0)) return detector::threshold_known(config_, 0.0);
  const auto key = static_cast<std::int64_t>(std::llround(std::log(xi) * 1000.0));
  auto it = std::lower_bound(cache_.begin(), cache_.end(), key,
                             [](const auto& entry, std::int64_t k) { return entry.first < k; });
  if (it != cache_.end() && it->first == key) return it->second;
  const double tau = detector::threshold_known(config_, std::exp(static_cast<double>(key) / 1000.0));
  cache_.insert(it, {key, tau});
  return tau;
}

struct Simulator::Scratch {
  Eigen::VectorXcd h;
  model::CorrelatorMatrix y;
  model::EnergyVector r;
  ThresholdCache cache;
};

Simulator::Simulator(SimPlan plan) : plan_(std::move(plan)), channel_(plan_.config) {
  const SystemConfig& config = plan_.config;
  if (plan_.hooks.forced_symbol && (*plan_.hooks.forced_symbol < 0 || *plan_.hooks.forced_symbol > config.M)) {
    throw ConfigError("forced_symbol", "must lie in 0..M");
  }
  if (config.knowledge == ChannelKnowledge::DistributionOnly) {
    fixed_tau_ = detector::threshold_unknown(config);
  } else if (config.static_channel()) {
    // Every realization has the same magnitudes; use the exact threshold.
    const double chi = config.L * config.los_power();
    fixed_tau_ = detector::threshold_known(config, config.amplitude2() * chi);
  } else {
    per_trial_threshold_ = true;
  }
}

TrialOutcome Simulator::trial(std::uint64_t index, Scratch& s) const {
  const SystemConfig& config = plan_.config;
  rng::RandomStream symbol_stream(plan_.seed, index, rng::Purpose::Symbol);
  const int sent = plan_.hooks.forced_symbol ? *plan_.hooks.forced_symbol
                                             : model::draw_symbol(config, symbol_stream);
  rng::RandomStream channel_stream(plan_.seed, index, rng::Purpose::Channel);
  channel_.draw(channel_stream, s.h);
  rng::RandomStream noise_stream(plan_.seed, index, rng::Purpose::Noise);
  model::correlator_outputs(config, sent, s.h, noise_stream, s.y,
                            plan_.hooks.noise_free ? model::Noise::Off : model::Noise::On);
  model::combine_energies(s.y, s.r);
  const double tau =
      per_trial_threshold_ ? s.cache.tau(config.amplitude2() * s.h.squaredNorm()) : fixed_tau_;
  const int decided =
      detector::detect(std::span<const double>(s.r.r.data(), static_cast<std::size_t>(s.r.r.size())), tau);
  return {sent, decided};
}

TrialOutcome Simulator::trial(std::uint64_t index) const {
  Scratch scratch{{}, {}, {}, ThresholdCache(plan_.config)};
  return trial(index, scratch);
}

Tally Simulator::run_range(std::uint64_t first, std::uint64_t count) const {
  Scratch scratch{{}, {}, {}, ThresholdCache(plan_.config)};
  Tally tally;
  for (std::uint64_t t = first; t < first + count; ++t) tally.record(trial(t, scratch));
  return tally;
}

Tally Simulator::run_parallel(std::uint64_t first, std::uint64_t count, unsigned workers) const {
  const std::uint64_t batch = std::max<std::uint64_t>(plan_.batch, 1);
  const std::uint64_t chunks = (count + batch - 1) / batch;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(chunks, 1))));
  if (workers == 1) return run_range(first, count);

  std::vector<Tally> partial(chunks);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    Scratch scratch{{}, {}, {}, ThresholdCache(plan_.config)};
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      const std::uint64_t begin = first + c * batch;
      const std::uint64_t end = std::min(first + count, begin + batch);
      Tally local;
      for (std::uint64_t t = begin; t < end; ++t) local.record(trial(t, scratch));
      partial[c] = local;
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();

  Tally total;
  for (const auto& p : partial) total += p;
  return total;
}

analytic::ErrorReport to_report(const Tally& tally) {
  analytic::ErrorReport report;
  report.method = analytic::Method::MonteCarlo;
  report.trials = tally.trials;
  if (tally.trials == 0) return report;
  const double n = static_cast<double>(tally.trials);
  report.pe = static_cast<double>(tally.errors) / n;
  report.pc1 = tally.tone_sent ? static_cast<double>(tally.tone_correct) / tally.tone_sent : 0.0;
  report.pc0 = tally.off_sent ? static_cast<double>(tally.off_correct) / tally.off_sent : 0.0;
  report.std_error = std::sqrt(report.pe * (1.0 - report.pe) / n);
  return report;
}

analytic::ErrorReport run(const SimPlan& plan, unsigned workers) {
  const Simulator sim(plan);
  return to_report(sim.run_parallel(0, plan.n_trials, workers));
}

analytic::ErrorReport run_until(const SimPlan& plan, std::uint64_t min_errors,
                                std::uint64_t max_trials, unsigned workers) {
  const Simulator sim(plan);
  const std::uint64_t initial = std::min(plan.n_trials, max_trials);
  Tally tally = sim.run_parallel(0, initial, workers);
  while (tally.errors < min_errors && tally.trials < max_trials) {
    const std::uint64_t more = std::min(std::max<std::uint64_t>(tally.trials, 1), max_trials - tally.trials);
    tally += sim.run_parallel(tally.trials, more, workers);
  }
  return to_report(tally);
}

std::vector<TrialOutcome> Simulator::trace(std::uint64_t first, std::uint64_t count) const {
  Scratch scratch{{}, {}, {}, ThresholdCache(plan_.config)};
  std::vector<TrialOutcome> out;
  out.reserve(count);
  for (std::uint64_t t = first; t < first + count; ++t) out.push_back(trial(t, scratch));
  return out;
}

std::vector<TrialOutcome> trace(const SimPlan& plan, std::uint64_t first, std::uint64_t count) {
  return Simulator(plan).trace(first, count);
}

std::pair<double, double> confidence_interval(const analytic::ErrorReport& report, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  if (report.trials == 0) throw DomainError("confidence interval needs a simulated report");
  const boost::math::normal standard;
  const double z = boost::math::quantile(standard, 0.5 + 0.5 * level);
  const double n = static_cast<double>(report.trials);
  double half = z * std::sqrt(report.pe * (1.0 - report.pe) / n);
  if (half == 0.0) {
    // pe of exactly 0 or 1
    half = z * z / n;
  }
  return {std::max(0.0, report.pe - half), std::min(1.0, report.pe + half)};
}

}  // namespace oofsk::montecarlo
