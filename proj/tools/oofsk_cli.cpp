// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

// oofsk: batch front-end for OOFSK error-rate sweeps.
//
//   oofsk point -c point.cfg [--json] [--set key=value ...]
//   oofsk sweep -c sweep.cfg [-o curves.csv]
//   oofsk figure 1 -o fig1.csv [--trials N --seed S --workers W]
//   oofsk crossover --csv fig1.csv --a "L=2;v=1" --b "L=2;v=0.8"
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oofsk/errors.hpp"
#include "oofsk/experiment.hpp"

namespace ex = oofsk::experiment;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw oofsk::ConfigError("input", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    ex::write_file(path, content);
  }
}

ex::Engine engine_from_name(const std::string& name) {
  ex::ExperimentConfig scratch;
  ex::apply_setting(scratch, "engine", name);
  return scratch.engine;
}

struct PointArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  bool json = false;
  bool both_receivers = false;
  unsigned workers = 1;
};

int run_point(const PointArgs& args) {
  ex::ExperimentConfig config;
  if (args.config_path.ends_with(".json")) {
    config = ex::config_from_json(read_text(args.config_path));
  } else {
    config = ex::load_config(args.config_path);
  }
  for (const auto& item : args.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw oofsk::ConfigError(item, "--set expects key=value");
    ex::apply_setting(config, item.substr(0, eq), item.substr(eq + 1));
  }
  const ex::PointReport report = ex::report_point(config, args.workers, args.both_receivers);
  std::cout << (args.json ? ex::format_json(report) + "\n" : ex::format_text(report));
  return 0;
}

struct SweepArgs {
  std::string config_path;
  std::string output;
  unsigned workers = 0;
};

int run_sweep(const SweepArgs& args) {
  ex::SweepSpec spec = ex::parse_sweep(read_text(args.config_path));
  if (args.workers > 0) spec.workers = args.workers;
  const std::string output = args.output.empty() ? spec.output_path : args.output;
  const auto rows = ex::run_sweep(spec);
  emit(output, ex::to_csv(rows));
  return 0;
}

struct FigureArgs {
  int number = 1;
  std::string output;
  ex::FigureOptions options;
  std::string engine;
};

int run_figure(const FigureArgs& args) {
  ex::SweepSpec spec = ex::figure_preset(args.number, args.options);
  if (!args.engine.empty()) {
    spec.engine = engine_from_name(args.engine);
    spec.base.engine = spec.engine;
  }
  const auto rows = ex::run_sweep(spec);
  emit(args.output, ex::to_csv(rows));
  return 0;
}

struct CrossoverArgs {
  std::string csv_path;
  std::string curve_a;
  std::string curve_b;
  std::string engine = "analytic";
};

int run_crossover(const CrossoverArgs& args) {
  const auto rows = ex::parse_csv(read_text(args.csv_path));
  const ex::Crossover result = ex::crossover(rows, args.curve_a, args.curve_b, engine_from_name(args.engine));
  if (result.crossings.empty()) {
    std::cout << "no crossing\n";
    return 0;
  }
  for (double x : result.crossings) std::printf("%.6g\n", x);
  if (result.ambiguous) std::cerr << "warning: " << result.crossings.size() << " crossings found\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OOFSK error-rate calculator and simulator"};
  app.require_subcommand(1);

  PointArgs point;
  auto* point_cmd = app.add_subcommand("point", "Evaluate one configuration");
  point_cmd->add_option("-c,--config", point.config_path, "key=value or JSON config file")->required();
  point_cmd->add_option("--set", point.overrides, "Override a config key (key=value)");
  point_cmd->add_flag("--json", point.json, "Emit JSON");
  point_cmd->add_flag("--both-receivers", point.both_receivers,
                      "Also evaluate the other channel-knowledge receiver");
  point_cmd->add_option("-w,--workers", point.workers, "Simulation threads")->check(CLI::PositiveNumber);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a sweep description and write CSV");
  sweep_cmd->add_option("-c,--config", sweep.config_path, "Sweep description file")->required();
  sweep_cmd->add_option("-o,--output", sweep.output, "CSV path ('-' for stdout)");
  sweep_cmd->add_option("-w,--workers", sweep.workers, "Worker threads")->check(CLI::PositiveNumber);

  FigureArgs figure;
  auto* figure_cmd = app.add_subcommand("figure", "Write the CSV behind one of the six figures");
  figure_cmd->add_option("number", figure.number, "Figure number 1..6")->required()->check(CLI::Range(1, 6));
  figure_cmd->add_option("-o,--output", figure.output, "CSV path ('-' for stdout)");
  figure_cmd->add_option("--trials", figure.options.trials, "Trials per simulated point")
      ->check(CLI::PositiveNumber);
  figure_cmd->add_option("--seed", figure.options.seed, "Simulation seed");
  figure_cmd->add_option("-w,--workers", figure.options.workers, "Worker threads")->check(CLI::PositiveNumber);
  figure_cmd->add_option("--engine", figure.engine, "analytic, simulate or both");

  CrossoverArgs cross;
  auto* cross_cmd = app.add_subcommand("crossover", "Locate where two curves of a sweep CSV cross");
  cross_cmd->add_option("--csv", cross.csv_path, "Sweep CSV")->required();
  cross_cmd->add_option("--a", cross.curve_a, "First curve id")->required();
  cross_cmd->add_option("--b", cross.curve_b, "Second curve id")->required();
  cross_cmd->add_option("--engine", cross.engine, "Rows to use: analytic or simulate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*point_cmd) return run_point(point);
    if (*sweep_cmd) return run_sweep(sweep);
    if (*figure_cmd) return run_figure(figure);
    if (*cross_cmd) return run_crossover(cross);
  } catch (const oofsk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const oofsk::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const oofsk::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
