// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: run experiment configs and presets, list presets,
// turn trial tables into plot data, and decode signal files directly.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "jointcs/analysis.hpp"
#include "jointcs/decode.hpp"
#include "jointcs/experiment.hpp"
#include "jointcs/sensing.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kEnsembleFailure = 2;
constexpr int kRuntimeFailure = 3;

jointcs::ExperimentConfig resolve_config(const std::string& what) {
  if (std::filesystem::exists(what)) return jointcs::load_config(what);
  for (const auto& name : jointcs::preset_names()) {
    if (name == what) return jointcs::preset(name);
  }
  throw std::invalid_argument("'" + what + "' is neither a config file nor a preset name");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void print_rows(const jointcs::ResultTable& table) {
  std::cout << table.sweep << "\talgorithm\ttrials";
  for (const auto& m : table.metrics) std::cout << '\t' << m << "\t(se)";
  std::cout << "\tseconds\n";
  for (const auto& r : table.rows) {
    std::cout << fmt(r.sweep_value) << '\t' << r.algorithm << '\t' << r.trials;
    for (const auto& m : table.metrics) {
      if (m == "recovery") std::cout << '\t' << fmt(r.recovery_mean) << '\t' << fmt(r.recovery_se);
      if (m == "mse") std::cout << '\t' << fmt(r.mse_mean) << '\t' << fmt(r.mse_se);
      if (m == "transform_error") std::cout << '\t' << fmt(r.transform_error) << '\t' << fmt(r.transform_error_se);
    }
    std::cout << '\t' << fmt(r.wall_seconds) << '\n';
  }
}

// "-2,0,2" -> {-2, 0, 2}
std::vector<int> parse_offsets(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw std::invalid_argument("empty offset list");
  return out;
}

struct DecodeArgs {
  std::string dictionary = "image";
  int width = 32;
  int height = 32;
  int length = 1000;
  std::vector<std::string> signals;
  std::string algorithm = "jt";
  long sparsity = 5;
  long measurements = 150;
  std::string shifts = "-2,0,2";
  std::uint64_t seed = 1;
  std::string output;
};

int run_decode(const DecodeArgs& a) {
  using namespace jointcs;
  DictionarySpec spec;
  if (a.dictionary == "image") {
    spec.variant = DictionaryVariant::kGaussian2D;
    spec.width = a.width;
    spec.height = a.height;
  } else if (a.dictionary == "trace") {
    spec.variant = DictionaryVariant::kGabor1D;
    spec.length = a.length;
  } else {
    spec.path = a.dictionary;
  }
  const Dictionary dict = build_dictionary(spec);

  std::vector<Eigen::VectorXd> signals;
  for (const auto& path : a.signals) {
    signals.push_back(read_signal_csv(path));
    if (signals.back().size() != dict.signal_length()) {
      throw std::invalid_argument(path + ": length does not match the dictionary");
    }
  }
  const auto views = static_cast<Index>(signals.size());

  std::vector<TransformKind> kinds;
  const auto offsets = parse_offsets(a.shifts);
  if (dict.variant() == DictionaryVariant::kGaussian2D) {
    for (int dx : offsets) {
      for (int dy : offsets) kinds.push_back(Translation2D{dx, dy});
    }
  } else {
    for (int dt : offsets) kinds.push_back(Translation1D{dt});
  }
  const auto candidates = CandidateSet::uniform(dict, views, kinds);

  auto ms = measure_ensemble(sample_view_matrices(a.measurements, dict.signal_length(), views, a.seed), signals);
  DecodeResult result;
  if (a.algorithm == "jt") {
    result = jt_decode(ms, dict, a.sparsity, candidates);
  } else if (a.algorithm == "gjt") {
    result = gjt_decode(ms, dict, a.sparsity, candidates);
  } else if (a.algorithm == "it") {
    result = independent_threshold_decode(ms, dict, a.sparsity);
  } else {
    throw std::invalid_argument("unknown algorithm '" + a.algorithm + "'");
  }

  if (result.transforms.views() > 0) std::cout << "transforms " << result.transforms.describe() << '\n';
  for (Index j = 0; j < views; ++j) {
    const auto& y = signals[static_cast<std::size_t>(j)];
    const auto& yhat = result.reconstructions[static_cast<std::size_t>(j)];
    std::cout << "view " << j << " support";
    for (Index i : result.supports[static_cast<std::size_t>(j)]) std::cout << ' ' << i;
    std::cout << " mse " << fmt((y - yhat).squaredNorm() / static_cast<double>(y.size()))
              << (result.rank_deficient[static_cast<std::size_t>(j)] ? " rank-deficient" : "") << '\n';
    if (!a.output.empty()) {
      std::filesystem::create_directories(a.output);
      std::ofstream out(std::filesystem::path(a.output) / ("reconstruction_" + std::to_string(j) + ".csv"));
      out.precision(17);
      for (Index i = 0; i < yhat.size(); ++i) out << yhat(i) << '\n';
    }
  }
  std::cout << "mean mse " << fmt(mse(signals, result.reconstructions)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint decoding of correlated compressed signals"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment config file or a bundled preset");
  std::string target;
  unsigned threads = 0;
  std::string output;
  long trials = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  run->add_option("config", target, "Config file path or preset name")->required();
  run->add_option("-t,--threads", threads, "Worker threads (results do not depend on it)");
  run->add_option("-o,--output", output, "Output directory (overrides the config)");
  run->add_option("--trials", trials, "Override the trial count");
  run->add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t& s) { seed = s; seed_given = true; }, "Override the master seed");

  auto* presets = app.add_subcommand("presets", "Inspect bundled presets");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "List preset names");
  auto* show = presets->add_subcommand("show", "Print a preset as a config file");
  std::string preset_name;
  show->add_option("name", preset_name)->required();
  auto* write = presets->add_subcommand("write", "Write every preset to <dir>/<name>.json");
  std::string preset_dir;
  write->add_option("dir", preset_dir)->required();

  auto* plots = app.add_subcommand("emit-plots", "Write per-metric plot data from a trials.csv");
  std::string table_path;
  std::string plot_dir;
  plots->add_option("table", table_path, "trials.csv written by 'run'")->required()->check(CLI::ExistingFile);
  plots->add_option("dir", plot_dir, "Output directory (default: next to the table)");

  auto* decode = app.add_subcommand("decode", "Compress and decode signal files, one CSV per view");
  DecodeArgs dargs;
  decode->add_option("-d,--dictionary", dargs.dictionary, "image, trace, or a saved dictionary file");
  decode->add_option("--width", dargs.width, "Image width for the image dictionary");
  decode->add_option("--height", dargs.height, "Image height for the image dictionary");
  decode->add_option("--length", dargs.length, "Signal length for the trace dictionary");
  decode->add_option("signals", dargs.signals, "Single-column CSV per view")->required()->check(CLI::ExistingFile);
  decode->add_option("-a,--algorithm", dargs.algorithm, "jt, gjt or it")
      ->check(CLI::IsMember({"jt", "gjt", "it"}));
  decode->add_option("-S,--sparsity", dargs.sparsity, "Atoms per signal");
  decode->add_option("-M,--measurements", dargs.measurements, "Measurements per view");
  decode->add_option("--shifts", dargs.shifts, "Candidate translation offsets, e.g. -2,0,2");
  decode->add_option("--seed", dargs.seed, "Sensing seed");
  decode->add_option("-o,--output", dargs.output, "Directory for reconstruction CSVs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      auto cfg = resolve_config(target);
      if (threads > 0) cfg.threads = threads;
      if (!output.empty()) cfg.output_dir = output;
      if (trials > 0) cfg.trials = trials;
      if (seed_given) cfg.seed = seed;
      const auto table = jointcs::run_experiment(cfg);
      print_rows(table);
      for (const auto& p : jointcs::persist_results(table, cfg, cfg.output_dir)) {
        std::cerr << "wrote " << p.string() << '\n';
      }
    } else if (presets->parsed()) {
      if (presets->got_subcommand("list")) {
        for (const auto& name : jointcs::preset_names()) std::cout << name << '\n';
      } else if (show->parsed()) {
        std::cout << jointcs::serialize_config(jointcs::preset(preset_name));
      } else if (write->parsed()) {
        std::filesystem::create_directories(preset_dir);
        for (const auto& name : jointcs::preset_names()) {
          const auto path = std::filesystem::path(preset_dir) / (name + ".json");
          jointcs::write_text(path, jointcs::serialize_config(jointcs::preset(name)));
          std::cerr << "wrote " << path.string() << '\n';
        }
      }
    } else if (plots->parsed()) {
      const auto table = jointcs::read_trials_csv(table_path);
      const auto dir = plot_dir.empty() ? std::filesystem::path(table_path).parent_path() : std::filesystem::path(plot_dir);
      for (const auto& p : jointcs::emit_plot_data(table, dir)) std::cout << p.string() << '\n';
    } else if (decode->parsed()) {
      return run_decode(dargs);
    }
  } catch (const jointcs::EnsembleGenerationError& e) {
    std::cerr << "ensemble generation failed: " << e.what() << '\n';
    return kEnsembleFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return 0;
}
