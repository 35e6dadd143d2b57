// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#include "oofsk/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "oofsk/detector.hpp"
#include "oofsk/errors.hpp"
#include "oofsk/montecarlo.hpp"

namespace oofsk::experiment {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  const std::string text = lower(trim(value));
  if (text == "inf" || text == "infinity" || text == "+inf") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(value) + "'");
  }
  return out;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view value) {
  const std::string_view text = trim(value);
  Int out{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(value) + "'");
  }
  return out;
}

std::string format_number(double x, int digits) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, x);
  return buffer;
}

Engine parse_engine(std::string_view value) {
  const std::string text = lower(trim(value));
  if (text == "analytic") return Engine::Analytic;
  if (text == "simulate" || text == "simulation") return Engine::Simulate;
  if (text == "both") return Engine::Both;
  throw ConfigError("engine", "expected analytic, simulate or both, got '" + std::string(value) + "'");
}

ChannelKnowledge parse_knowledge(std::string_view value) {
  const std::string text = lower(trim(value));
  if (text == "distribution" || text == "distribution_only" || text == "unknown") {
    return ChannelKnowledge::DistributionOnly;
  }
  if (text == "magnitude" || text == "magnitude_known" || text == "known") {
    return ChannelKnowledge::MagnitudeKnown;
  }
  throw ConfigError("knowledge", "expected distribution or magnitude, got '" + std::string(value) + "'");
}

ChannelPower parse_power(std::string_view value) {
  const std::string text = lower(trim(value));
  if (text == "total" || text == "unit_total") return ChannelPower::UnitTotal;
  if (text == "diffuse" || text == "unit_diffuse") return ChannelPower::UnitDiffuse;
  throw ConfigError("channel_power", "expected total or diffuse, got '" + std::string(value) + "'");
}

Axis parse_axis(std::string_view value) {
  const std::string text = lower(trim(value));
  if (text == "ebn0_db" || text == "ebn0") return Axis::EbN0Db;
  if (text == "snr_db" || text == "snr") return Axis::SnrDb;
  if (text == "v" || text == "duty_cycle") return Axis::DutyCycle;
  throw ConfigError("axis", "expected ebn0_db, snr_db or v, got '" + std::string(value) + "'");
}

// Splits `key = value` lines, dropping comments and blanks. Each entry carries
// its line number for error messages.
struct Setting {
  std::string key;
  std::string value;
};

std::vector<Setting> split_settings(std::string_view text) {
  std::vector<Setting> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(number), "expected key=value, got '" + std::string(view) + "'");
    }
    out.push_back({std::string(trim(view.substr(0, eq))), std::string(trim(view.substr(eq + 1)))});
  }
  return out;
}

bool is_config_key(const std::string& key) {
  static const char* keys[] = {"M",         "v",      "L",      "K",     "rho",  "snr_db",
                               "ebn0_db",   "knowledge", "channel_power", "engine", "trials", "seed"};
  return std::any_of(std::begin(keys), std::end(keys), [&](const char* k) { return key == k; });
}

// Tracks that exactly one SNR key appears.
struct SnrTracker {
  int count = 0;
  void see(const std::string& key) {
    if (key == "snr_db" || key == "ebn0_db") ++count;
  }
  void check() const {
    if (count == 0) throw ConfigError("snr_db", "one of snr_db or ebn0_db is required");
    if (count > 1) throw ConfigError("snr_db", "give exactly one of snr_db or ebn0_db");
  }
};

}  // namespace

std::string to_string(Engine engine) {
  switch (engine) {
    case Engine::Analytic: return "analytic";
    case Engine::Simulate: return "simulate";
    case Engine::Both: return "both";
  }
  return "unknown";
}

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::EbN0Db: return "ebn0_db";
    case Axis::SnrDb: return "snr_db";
    case Axis::DutyCycle: return "v";
  }
  return "unknown";
}

SystemConfig ExperimentConfig::resolve() const {
  SystemConfig out = system;
  if (!std::isfinite(snr_value_db)) {
    throw ConfigError(snr_kind == SnrKind::SnrDb ? "snr_db" : "ebn0_db", "must be finite");
  }
  out.validate();
  out.snr = snr_kind == SnrKind::SnrDb ? analytic::db_to_linear(snr_value_db)
                                       : analytic::snr_from_ebn0_db(snr_value_db, out.v, out.M);
  out.validate();
  return out;
}

void apply_setting(ExperimentConfig& config, std::string_view key_view, std::string_view value) {
  const std::string key(trim(key_view));
  if (key == "M") {
    config.system.M = parse_integer<int>(key, value);
  } else if (key == "v") {
    config.system.v = parse_double(key, value);
  } else if (key == "L") {
    config.system.L = parse_integer<int>(key, value);
  } else if (key == "K") {
    config.system.rician_K = parse_double(key, value);
  } else if (key == "rho") {
    config.system.rho = parse_double(key, value);
  } else if (key == "snr_db") {
    config.snr_kind = SnrKind::SnrDb;
    config.snr_value_db = parse_double(key, value);
  } else if (key == "ebn0_db") {
    config.snr_kind = SnrKind::EbN0Db;
    config.snr_value_db = parse_double(key, value);
  } else if (key == "knowledge") {
    config.system.knowledge = parse_knowledge(value);
  } else if (key == "channel_power") {
    config.system.power = parse_power(value);
  } else if (key == "engine") {
    config.engine = parse_engine(value);
  } else if (key == "trials") {
    config.trials = parse_integer<std::uint64_t>(key, value);
    if (config.trials == 0) throw ConfigError("trials", "must be positive");
  } else if (key == "seed") {
    config.seed = parse_integer<std::uint64_t>(key, value);
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  SnrTracker snr;
  for (const auto& s : split_settings(text)) {
    snr.see(s.key);
    apply_setting(config, s.key, s.value);
  }
  snr.check();
  config.resolve();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "M=" << c.system.M << '\n'
      << "v=" << format_number(c.system.v, 17) << '\n'
      << "L=" << c.system.L << '\n'
      << "K=" << format_number(c.system.rician_K, 17) << '\n'
      << "rho=" << format_number(c.system.rho, 17) << '\n'
      << (c.snr_kind == SnrKind::SnrDb ? "snr_db=" : "ebn0_db=") << format_number(c.snr_value_db, 17) << '\n'
      << "knowledge=" << to_string(c.system.knowledge) << '\n'
      << "channel_power=" << to_string(c.system.power) << '\n'
      << "engine=" << to_string(c.engine) << '\n'
      << "trials=" << c.trials << '\n'
      << "seed=" << c.seed << '\n';
  return out.str();
}

namespace {

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["M"] = c.system.M;
  j["v"] = c.system.v;
  j["L"] = c.system.L;
  if (std::isinf(c.system.rician_K)) {
    j["K"] = "inf";
  } else {
    j["K"] = c.system.rician_K;
  }
  j["rho"] = c.system.rho;
  j[c.snr_kind == SnrKind::SnrDb ? "snr_db" : "ebn0_db"] = c.snr_value_db;
  j["knowledge"] = to_string(c.system.knowledge);
  j["channel_power"] = to_string(c.system.power);
  j["engine"] = to_string(c.engine);
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

ExperimentConfig config_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("json", e.what());
  }
  if (j.contains("config")) j = j["config"];
  if (!j.is_object()) throw ConfigError("json", "expected an object");
  ExperimentConfig config;
  SnrTracker snr;
  for (const auto& [key, value] : j.items()) {
    if (!is_config_key(key)) throw ConfigError(key, "unknown configuration key");
    snr.see(key);
    if (value.is_string()) {
      apply_setting(config, key, value.get<std::string>());
    } else if (value.is_number_integer() || value.is_number_unsigned()) {
      apply_setting(config, key, value.dump());
    } else if (value.is_number()) {
      apply_setting(config, key, format_number(value.get<double>(), 17));
    } else {
      throw ConfigError(key, "unsupported JSON value");
    }
  }
  snr.check();
  config.resolve();
  return config;
}

// --- sweeps ---------------------------------------------------------------

std::vector<double> SweepSpec::axis_values() const {
  std::vector<double> out(static_cast<std::size_t>(std::max(points, 0)));
  for (int i = 0; i < points; ++i) {
    out[i] = i == points - 1 ? stop : start + (stop - start) * i / (points - 1);
  }
  return out;
}

void SweepSpec::validate() const {
  if (points < 2) throw ConfigError("points", "a sweep needs at least 2 points");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw ConfigError("start", "range must be finite");
  if (start == stop) throw ConfigError("stop", "sweep endpoints must differ");
  if (axis == Axis::DutyCycle) {
    if (!(std::min(start, stop) > 0.0 && std::max(start, stop) <= 1.0)) {
      throw ConfigError("start", "duty-cycle range must lie within (0, 1]");
    }
  }
  if (workers == 0) throw ConfigError("workers", "must be positive");
  std::vector<std::string> seen;
  for (const auto& curve : curves) {
    if (std::find(seen.begin(), seen.end(), curve.id) != seen.end()) {
      throw ConfigError("curve", "duplicate curve id '" + curve.id + "'");
    }
    seen.push_back(curve.id);
  }
}

ExperimentConfig cell_config(const SweepSpec& spec, const Curve& curve, double axis_value) {
  ExperimentConfig config = spec.base;
  for (const auto& [key, value] : curve.overrides) apply_setting(config, key, value);
  switch (spec.axis) {
    case Axis::EbN0Db:
      config.snr_kind = SnrKind::EbN0Db;
      config.snr_value_db = axis_value;
      break;
    case Axis::SnrDb:
      config.snr_kind = SnrKind::SnrDb;
      config.snr_value_db = axis_value;
      break;
    case Axis::DutyCycle:
      config.system.v = axis_value;
      break;
  }
  config.resolve();
  return config;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<Curve> curves = spec.curves;
  if (curves.empty()) curves.push_back({"base", {}});

  struct Task {
    double axis;
    const Curve* curve;
    Engine engine;
    SystemConfig system;
  };
  std::vector<Task> tasks;
  for (double x : spec.axis_values()) {
    for (const auto& curve : curves) {
      const ExperimentConfig cell = cell_config(spec, curve, x);
      const SystemConfig system = cell.resolve();
      const bool correlated = system.L > 1 && system.rho != 0.0;
      if (spec.engine == Engine::Analytic && correlated) {
        throw ConfigError("rho", "curve '" + curve.id +
                                     "': the analytic engine supports independent channels only");
      }
      if (spec.engine != Engine::Simulate && !correlated) {
        tasks.push_back({x, &curve, Engine::Analytic, system});
      }
      if (spec.engine != Engine::Analytic) tasks.push_back({x, &curve, Engine::Simulate, system});
    }
  }

  std::vector<SweepRow> rows(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    rows[i] = {tasks[i].axis, tasks[i].curve->id, tasks[i].engine, {}};
  }

  // Analytic cells run concurrently, one per worker; simulations use the
  // workers internally and run one after another.
  std::atomic<std::size_t> next{0};
  auto analytic_worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      if (tasks[i].engine == Engine::Analytic) rows[i].report = analytic::pe_analytic(tasks[i].system);
    }
  };
  if (spec.workers <= 1) {
    analytic_worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < spec.workers; ++w) pool.emplace_back(analytic_worker);
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].engine != Engine::Simulate) continue;
    montecarlo::SimPlan plan;
    plan.config = tasks[i].system;
    plan.n_trials = spec.base.trials;
    plan.seed = spec.base.seed;
    rows[i].report = montecarlo::run_until(plan, spec.min_errors,
                                           std::max(spec.max_trials, spec.base.trials), spec.workers);
  }
  return rows;
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace

std::string to_csv(std::span<const SweepRow> rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : rows) {
    out += format_number(row.axis, 12);
    out += ',';
    out += csv_field(row.curve_id);
    for (double value : {row.report.pe, row.report.pc1, row.report.pc0, row.report.std_error}) {
      out += ',';
      out += format_number(value, 12);
    }
    out += ',';
    out += to_string(row.engine);
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> parse_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw ConfigError("csv", "unexpected header '" + std::string(line) + "'");
      header = false;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 7) throw ConfigError("csv", "expected 7 fields in '" + std::string(line) + "'");
    SweepRow row;
    row.axis = parse_double("axis", fields[0]);
    row.curve_id = fields[1];
    row.report.pe = parse_double("pe", fields[2]);
    row.report.pc1 = parse_double("pc1", fields[3]);
    row.report.pc0 = parse_double("pc0", fields[4]);
    row.report.std_error = parse_double("stderr", fields[5]);
    row.engine = parse_engine(fields[6]);
    row.report.method = row.engine == Engine::Simulate ? analytic::Method::MonteCarlo
                                                       : analytic::Method::DirectIntegral;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("output", "cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError("output", "failed writing '" + path + "'");
}

SweepSpec parse_sweep(std::string_view text) {
  SweepSpec spec;
  SnrTracker snr;
  for (const auto& s : split_settings(text)) {
    if (s.key == "axis") {
      spec.axis = parse_axis(s.value);
    } else if (s.key == "start") {
      spec.start = parse_double(s.key, s.value);
    } else if (s.key == "stop") {
      spec.stop = parse_double(s.key, s.value);
    } else if (s.key == "points") {
      spec.points = parse_integer<int>(s.key, s.value);
    } else if (s.key == "output") {
      spec.output_path = s.value;
    } else if (s.key == "workers") {
      spec.workers = parse_integer<unsigned>(s.key, s.value);
    } else if (s.key == "min_errors") {
      spec.min_errors = parse_integer<std::uint64_t>(s.key, s.value);
    } else if (s.key == "max_trials") {
      spec.max_trials = parse_integer<std::uint64_t>(s.key, s.value);
    } else if (s.key == "curve") {
      const auto colon = s.value.find(':');
      if (colon == std::string::npos) throw ConfigError("curve", "expected '<id>: key=value; ...'");
      Curve curve{std::string(trim(std::string_view(s.value).substr(0, colon))), {}};
      std::string_view rest = std::string_view(s.value).substr(colon + 1);
      while (!rest.empty()) {
        const auto semi = rest.find(';');
        const std::string_view item = trim(rest.substr(0, semi));
        rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ConfigError("curve", "expected key=value in '" + std::string(item) + "'");
        const std::string key(trim(item.substr(0, eq)));
        if (!is_config_key(key)) throw ConfigError(key, "unknown configuration key in curve '" + curve.id + "'");
        curve.overrides.emplace_back(key, std::string(trim(item.substr(eq + 1))));
      }
      spec.curves.push_back(std::move(curve));
    } else {
      snr.see(s.key);
      apply_setting(spec.base, s.key, s.value);
    }
  }
  spec.engine = spec.base.engine;
  // The axis supplies the SNR unless it sweeps the duty cycle.
  if (spec.axis == Axis::DutyCycle) snr.check();
  spec.validate();
  return spec;
}

namespace {

Curve make_curve(std::vector<std::pair<std::string, std::string>> overrides) {
  Curve curve;
  for (const auto& [key, value] : overrides) {
    if (!curve.id.empty()) curve.id += ';';
    curve.id += key + "=" + value;
  }
  curve.overrides = std::move(overrides);
  return curve;
}

}  // namespace

SweepSpec figure_preset(int number, const FigureOptions& options) {
  SweepSpec spec;
  spec.workers = options.workers;
  spec.base.trials = options.trials;
  spec.base.seed = options.seed;
  spec.max_trials = 4 * options.trials;
  const char* duty_cycles[] = {"0.1", "0.2", "0.5", "0.8", "1"};
  switch (number) {
    case 1:
    case 4:
      spec.axis = Axis::EbN0Db;
      spec.start = -10.0;
      spec.stop = 15.0;
      spec.points = 26;
      spec.base.system = {8, 1.0, 2, 1.0, 1.0, 0.0,
                          number == 1 ? ChannelKnowledge::DistributionOnly : ChannelKnowledge::MagnitudeKnown};
      spec.engine = Engine::Analytic;
      for (const char* L : {"2", "8"}) {
        for (const char* v : duty_cycles) spec.curves.push_back(make_curve({{"L", L}, {"v", v}}));
      }
      break;
    case 2:
      spec.axis = Axis::DutyCycle;
      spec.start = 0.02;
      spec.stop = 1.0;
      spec.points = 50;
      spec.base.system = {8, 1.0, 2, 1.0, 1.0, 0.0, ChannelKnowledge::DistributionOnly};
      spec.engine = Engine::Analytic;
      for (const char* K : {"1", "4"}) {
        for (const char* snr : {"0", "5"}) spec.curves.push_back(make_curve({{"K", K}, {"snr_db", snr}}));
      }
      break;
    case 3:
    case 5:
      spec.axis = Axis::SnrDb;
      spec.start = -5.0;
      spec.stop = 20.0;
      spec.points = 11;
      spec.base.system = {4, 1.0, 2, 1.0, 0.125, 0.0,
                          number == 3 ? ChannelKnowledge::DistributionOnly : ChannelKnowledge::MagnitudeKnown};
      spec.engine = Engine::Simulate;
      for (const char* v : {"0.2", "0.5", "0.8", "1"}) {
        for (const char* rho : {"0.25", "0"}) spec.curves.push_back(make_curve({{"v", v}, {"rho", rho}}));
      }
      break;
    case 6:
      spec.axis = Axis::EbN0Db;
      spec.start = -10.0;
      spec.stop = 15.0;
      spec.points = 26;
      spec.base.system = {8, 1.0, 2, 1.0, 0.0, 0.0, ChannelKnowledge::DistributionOnly};
      spec.engine = Engine::Analytic;
      for (const char* v : {"0.5", "0.1"}) {
        for (const char* knowledge : {"magnitude", "distribution"}) {
          spec.curves.push_back(make_curve({{"v", v}, {"knowledge", knowledge}}));
        }
      }
      break;
    default:
      throw ConfigError("figure", "figure number must be 1..6, got " + std::to_string(number));
  }
  // The presets put unit variance on the diffuse component.
  spec.base.system.power = ChannelPower::UnitDiffuse;
  spec.base.engine = spec.engine;
  return spec;
}

// --- crossovers -----------------------------------------------------------

Crossover crossover(std::span<const double> axis, std::span<const double> pe_a,
                    std::span<const double> pe_b) {
  if (axis.size() != pe_a.size() || axis.size() != pe_b.size()) {
    throw DomainError("crossover inputs must have equal lengths");
  }
  Crossover out;
  std::optional<std::pair<double, double>> last;  // (axis, difference) with nonzero difference
  std::optional<double> first_zero;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!(pe_a[i] > 0.0) || !(pe_b[i] > 0.0)) continue;
    const double d = std::log10(pe_a[i]) - std::log10(pe_b[i]);
    if (d == 0.0) {
      if (!first_zero) first_zero = axis[i];
      continue;
    }
    if (last && (last->second < 0.0) != (d < 0.0)) {
      if (first_zero) {
        out.crossings.push_back(*first_zero);
      } else {
        const double t = last->second / (last->second - d);
        out.crossings.push_back(last->first + t * (axis[i] - last->first));
      }
    }
    first_zero.reset();
    last = {axis[i], d};
  }
  out.ambiguous = out.crossings.size() > 1;
  return out;
}

Crossover crossover(std::span<const SweepRow> rows, std::string_view curve_a,
                    std::string_view curve_b, Engine engine) {
  std::vector<double> axis_a, pe_a, axis_b, pe_b;
  for (const auto& row : rows) {
    if (row.engine != engine) continue;
    if (row.curve_id == curve_a) {
      axis_a.push_back(row.axis);
      pe_a.push_back(row.report.pe);
    } else if (row.curve_id == curve_b) {
      axis_b.push_back(row.axis);
      pe_b.push_back(row.report.pe);
    }
  }
  if (axis_a.empty()) throw ConfigError("curve", "no rows for curve '" + std::string(curve_a) + "'");
  if (axis_b.empty()) throw ConfigError("curve", "no rows for curve '" + std::string(curve_b) + "'");
  if (axis_a != axis_b) throw ConfigError("curve", "curves are sampled on different axis points");
  return crossover(axis_a, pe_a, pe_b);
}

// --- single-point reports ---------------------------------------------------

PointReport report_point(const ExperimentConfig& config, unsigned workers, bool both_receivers) {
  PointReport report;
  report.config = config;
  report.system = config.resolve();
  const SystemConfig& system = report.system;
  report.entropy_bits = analytic::entropy_bits(system.v, system.M);
  report.ebn0_db = analytic::ebn0_db(system);
  if (system.knowledge == ChannelKnowledge::DistributionOnly) {
    report.xi = system.xi();
    report.sigma_y2 = system.sigma_y2();
    report.tau = detector::threshold_unknown(system);
  } else {
    // Known magnitudes: the threshold follows each realization; report it at
    // the mean channel gain E[chi] = L.
    report.xi = system.amplitude2() * system.L;
    report.sigma_y2 = 1.0;
    report.tau = detector::threshold_known(system, report.xi);
  }

  std::vector<SystemConfig> receivers{system};
  if (both_receivers) {
    SystemConfig other = system;
    other.knowledge = system.knowledge == ChannelKnowledge::DistributionOnly
                          ? ChannelKnowledge::MagnitudeKnown
                          : ChannelKnowledge::DistributionOnly;
    receivers.push_back(other);
  }
  const bool correlated = system.L > 1 && system.rho != 0.0;
  for (const auto& receiver : receivers) {
    const std::string suffix = "/" + to_string(receiver.knowledge);
    if (config.engine != Engine::Simulate) {
      if (correlated && config.engine == Engine::Analytic) {
        throw ConfigError("rho", "the analytic engine supports independent channels only");
      }
      if (!correlated) report.results.emplace_back("analytic" + suffix, analytic::pe_analytic(receiver));
    }
    if (config.engine != Engine::Analytic) {
      montecarlo::SimPlan plan;
      plan.config = receiver;
      plan.n_trials = config.trials;
      plan.seed = config.seed;
      report.results.emplace_back("simulate" + suffix, montecarlo::run(plan, workers));
    }
  }
  return report;
}

std::string format_text(const PointReport& r) {
  std::ostringstream out;
  const SystemConfig& s = r.system;
  out << "M=" << s.M << " v=" << format_number(s.v, 6) << " L=" << s.L
      << " K=" << format_number(s.rician_K, 6) << " rho=" << format_number(s.rho, 6)
      << " knowledge=" << to_string(s.knowledge) << " channel_power=" << to_string(s.power) << '\n';
  out << "snr_db=" << format_number(analytic::linear_to_db(s.snr), 8)
      << " ebn0_db=" << format_number(r.ebn0_db, 8)
      << " H(v)=" << format_number(r.entropy_bits, 8) << " bits\n";
  out << "tau=" << format_number(r.tau, 10) << " xi=" << format_number(r.xi, 10)
      << " sigma_y2=" << format_number(r.sigma_y2, 10) << '\n';
  for (const auto& [label, e] : r.results) {
    out << label << ": pe=" << format_number(e.pe, 10) << " pc1=" << format_number(e.pc1, 10)
        << " pc0=" << format_number(e.pc0, 10);
    if (e.method == analytic::Method::MonteCarlo) {
      out << " stderr=" << format_number(e.std_error, 4) << " trials=" << e.trials;
    }
    out << " (" << analytic::to_string(e.method) << ")\n";
  }
  return out.str();
}

std::string format_json(const PointReport& r) {
  nlohmann::ordered_json j;
  j["config"] = config_json(r.config);
  auto number = [](double x) -> nlohmann::ordered_json {
    if (std::isfinite(x)) return x;
    return format_number(x, 17);
  };
  j["derived"] = {{"snr", r.system.snr},
                  {"snr_db", analytic::linear_to_db(r.system.snr)},
                  {"ebn0_db", r.ebn0_db},
                  {"entropy_bits", r.entropy_bits},
                  {"amplitude2", r.system.amplitude2()},
                  {"tau", number(r.tau)},
                  {"xi", r.xi},
                  {"sigma_y2", r.sigma_y2}};
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (const auto& [label, e] : r.results) {
    results.push_back({{"label", label},
                       {"method", analytic::to_string(e.method)},
                       {"pe", e.pe},
                       {"pc1", e.pc1},
                       {"pc0", e.pc0},
                       {"stderr", e.std_error},
                       {"trials", e.trials}});
  }
  j["results"] = std::move(results);
  return j.dump(2);
}

}  // namespace oofsk::experiment
