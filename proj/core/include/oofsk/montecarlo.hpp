// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "oofsk/analytic.hpp"
#include "oofsk/model.hpp"

namespace oofsk::montecarlo {

/// Test hooks. `noise_free` drops the additive noise; `forced_symbol` replaces
/// the random source symbol.
struct SimHooks {
  bool noise_free = false;
  std::optional<int> forced_symbol;
};

/// A reproducible simulation request. Identical (config, n_trials, seed)
/// always yields the same tally, independent of `batch` and worker count.
struct SimPlan {
  SystemConfig config;
  std::uint64_t n_trials = 100'000;
  std::uint64_t seed = 1;
  std::uint64_t batch = 8192;
  SimHooks hooks;
};

struct TrialOutcome {
  int sent = 0;
  int decided = 0;

  bool operator==(const TrialOutcome&) const = default;
};

/// Integer tallies; merging is plain addition.
struct Tally {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  std::uint64_t tone_sent = 0;
  std::uint64_t tone_correct = 0;
  std::uint64_t off_sent = 0;
  std::uint64_t off_correct = 0;

  Tally& operator+=(const Tally& other) noexcept;
  void record(const TrialOutcome& outcome) noexcept;
  bool operator==(const Tally&) const = default;
};

/// Memoized known-magnitude thresholds keyed on ln(xi) rounded to 3 decimals.
/// The threshold stored under a key is computed at the key's own xi, so the
/// cache content never depends on the order of lookups.
class ThresholdCache {
 public:
  explicit ThresholdCache(const SystemConfig& config) : config_(config) {}
  double tau(double xi);
  std::size_t size() const noexcept { return cache_.size(); }

 private:
  SystemConfig config_;
  std::vector<std::pair<std::int64_t, double>> cache_;  // sorted by key
};

/// Runs trials. Trial t draws its symbol, channel and noise from Philox
/// streams keyed by (seed, t, purpose), so any subset of trials can be run
/// anywhere in any order.
class Simulator {
 public:
  explicit Simulator(SimPlan plan);

  TrialOutcome trial(std::uint64_t index) const;
  Tally run_range(std::uint64_t first, std::uint64_t count) const;
  std::vector<TrialOutcome> trace(std::uint64_t first, std::uint64_t count) const;

  /// Trials [first, first+count) split into `plan.batch` chunks over
  /// `workers` threads.
  Tally run_parallel(std::uint64_t first, std::uint64_t count, unsigned workers) const;

  const SimPlan& plan() const noexcept { return plan_; }
  /// Distribution-only threshold used for every trial in that mode.
  double fixed_threshold() const noexcept { return fixed_tau_; }

 private:
  struct Scratch;
  TrialOutcome trial(std::uint64_t index, Scratch& scratch) const;

  SimPlan plan_;
  model::ChannelModel channel_;
  double fixed_tau_ = 0.0;
  bool per_trial_threshold_ = false;
};

analytic::ErrorReport to_report(const Tally& tally);

analytic::ErrorReport run(const SimPlan& plan, unsigned workers = 1);

/// Extends the trial count (doubling, continuing the trial index sequence)
/// until at least `min_errors` errors are seen or `max_trials` is reached.
analytic::ErrorReport run_until(const SimPlan& plan, std::uint64_t min_errors,
                                std::uint64_t max_trials, unsigned workers = 1);

std::vector<TrialOutcome> trace(const SimPlan& plan, std::uint64_t first, std::uint64_t count);

/// Normal-approximation interval for pe, clipped to [0, 1].
std::pair<double, double> confidence_interval(const analytic::ErrorReport& report, double level);

}  // namespace oofsk::montecarlo
