// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oofsk/analytic.hpp"
#include "oofsk/model.hpp"

namespace oofsk::experiment {

enum class Engine { Analytic, Simulate, Both };
enum class SnrKind { SnrDb, EbN0Db };

std::string to_string(Engine engine);

/// A system configuration as written in config files: the SNR is kept in the
/// unit the user gave it in (symbol SNR or Eb/N0, both in dB) and resolved
/// against the duty cycle only when needed.
struct ExperimentConfig {
  SystemConfig system;
  SnrKind snr_kind = SnrKind::SnrDb;
  double snr_value_db = 0.0;
  Engine engine = Engine::Analytic;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;

  /// SystemConfig with `snr` set from the dB value; validated.
  SystemConfig resolve() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Applies one `key = value` setting. Keys: M, v, L, K, rho, snr_db, ebn0_db,
/// knowledge, channel_power, engine, trials, seed. Throws ConfigError naming the key.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Parses `key=value` lines with `#` comments. Exactly one of snr_db/ebn0_db
/// must be present.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config.
std::string format_config(const ExperimentConfig& config);
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(std::string_view json);

// --- sweeps ---------------------------------------------------------------

enum class Axis { EbN0Db, SnrDb, DutyCycle };

std::string to_string(Axis axis);

/// One curve of a sweep: the base config with a few settings overridden.
struct Curve {
  std::string id;
  std::vector<std::pair<std::string, std::string>> overrides;
};

struct SweepSpec {
  Axis axis = Axis::EbN0Db;
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  ExperimentConfig base;
  std::vector<Curve> curves;
  Engine engine = Engine::Analytic;
  std::string output_path;
  unsigned workers = 1;
  /// Simulation keeps doubling its trial count until this many errors are
  /// seen or max_trials is reached.
  std::uint64_t min_errors = 100;
  std::uint64_t max_trials = 4'000'000;

  std::vector<double> axis_values() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct SweepRow {
  double axis = 0.0;
  std::string curve_id;
  Engine engine = Engine::Analytic;  // Analytic or Simulate, never Both
  analytic::ErrorReport report;
};

/// Configuration of one (axis value, curve) cell.
ExperimentConfig cell_config(const SweepSpec& spec, const Curve& curve, double axis_value);

/// Rows in axis-major, curve-minor order; with Engine::Both the analytic row
/// precedes the simulated one. Analytic rows are skipped (Both) or rejected
/// (Analytic) for correlated channels.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr std::string_view kCsvHeader = "axis,curve_id,pe,pc1,pc0,stderr,engine";

std::string to_csv(std::span<const SweepRow> rows);
std::vector<SweepRow> parse_csv(std::string_view text);
void write_file(const std::string& path, std::string_view content);

/// Parses a sweep description: base config keys plus axis, start, stop,
/// points, output, workers, min_errors, max_trials and repeatable
/// `curve = <id>: key=value; key=value` lines.
SweepSpec parse_sweep(std::string_view text);

struct FigureOptions {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Built-in sweep number `number` (1..6). All presets use ChannelPower::UnitDiffuse.
SweepSpec figure_preset(int number, const FigureOptions& options = {});

// --- crossovers -----------------------------------------------------------

struct Crossover {
  std::vector<double> crossings;
  bool ambiguous = false;
};

/// Sign changes of log10(pe_a) - log10(pe_b) along the axis, located by linear
/// interpolation in (axis, log10 pe). Points where either pe is 0 are skipped.
Crossover crossover(std::span<const double> axis, std::span<const double> pe_a,
                    std::span<const double> pe_b);

/// Crossover between two curves of a sweep result for one engine.
Crossover crossover(std::span<const SweepRow> rows, std::string_view curve_a,
                    std::string_view curve_b, Engine engine = Engine::Analytic);

// --- single-point reports ---------------------------------------------------

struct PointReport {
  ExperimentConfig config;
  SystemConfig system;
  double tau = 0.0;
  double xi = 0.0;
  double sigma_y2 = 1.0;
  double entropy_bits = 0.0;
  double ebn0_db = 0.0;
  /// (label, report); label names the engine and receiver.
  std::vector<std::pair<std::string, analytic::ErrorReport>> results;
};

/// Evaluates `config` with its engine(s). With `both_receivers` the other
/// channel-knowledge receiver is evaluated as well.
PointReport report_point(const ExperimentConfig& config, unsigned workers = 1,
                         bool both_receivers = false);

std::string format_text(const PointReport& report);
std::string format_json(const PointReport& report);

}  // namespace oofsk::experiment
