// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "jointcs/correlation.hpp"
#include "jointcs/dictionary.hpp"
#include "jointcs/ensemble.hpp"
#include "jointcs/result_table.hpp"

namespace jointcs {

enum class ExperimentKind {
  kTransformErrorVsM,  // JT vs GJT transform estimation over an M sweep
  kRecoveryVsJ,        // GJT vs independent thresholding over a J sweep
  kTwoView1D,          // JT vs independent thresholding on two 1D views
};

enum class Algorithm { kJT, kGJT, kIT };
enum class SensingMode { kGaussian, kIdentity };

const char* to_string(ExperimentKind kind);
const char* to_string(Algorithm algorithm);

/// How to build the dictionary. For gaussian2d, thetas are k pi / theta_divisions
/// for k = 0..theta_divisions (the last one only with theta_include_pi) unless
/// `thetas` lists explicit radians. Translations run over
/// offset, offset + stride, ... on both axes. A nonempty `path` loads a saved
/// dictionary instead.
struct DictionarySpec {
  DictionaryVariant variant = DictionaryVariant::kGaussian2D;
  std::string path;

  int width = 32;
  int height = 32;
  int theta_divisions = 6;
  bool theta_include_pi = true;
  std::vector<double> thetas;
  std::vector<double> sxs{2.0, 4.0};
  std::vector<double> sys{0.5, 1.0};
  int translation_offset = 1;
  int translation_stride = 2;

  int length = 1000;
  int t_start = 1;
  int t_step = 10;
  std::vector<double> scales{4.0, 8.0, 16.0};
  std::vector<double> omegas{2.0, 4.0, 6.0, 8.0, 10.0};
  bool include_negated = true;
};

Dictionary build_dictionary(const DictionarySpec& spec);

/// Per-view candidate transforms. `per_view[v]` serves view v + 1; views not
/// covered fall back to `uniform`.
struct CandidateSpec {
  std::vector<TransformKind> uniform;
  std::vector<std::vector<TransformKind>> per_view;
};

CandidateSet build_candidates(const CandidateSpec& spec, const Dictionary& dict, Index views);

struct ExperimentConfig {
  std::string name;
  ExperimentKind kind = ExperimentKind::kRecoveryVsJ;
  DictionarySpec dictionary;
  Index sparsity = 5;
  std::vector<Index> views{4};
  std::vector<Index> measurements{150};
  CandidateSpec candidates;
  std::vector<Algorithm> algorithms;  // empty: the kind's default pair
  Index trials = 1;
  std::uint64_t seed = 1;
  std::string output_dir = "results";

  CoefficientRule coefficient_rule = CoefficientRule::kShared;
  double magnitude_min = 0.5;
  double magnitude_max = 1.5;
  bool enforce_conditions = true;
  Index max_attempts = 10000;
  SensingMode sensing = SensingMode::kGaussian;
  /// Reuse one ensemble per sweep point so only the sensing draw varies
  /// between trials (probability conditional on the signals).
  bool fixed_ensemble = false;
  /// External signals, one single-column CSV per view (two-view runs only).
  std::vector<std::string> signal_csv;
  /// Worker threads for trials. Results do not depend on it.
  unsigned threads = 1;

  std::vector<Algorithm> effective_algorithms() const;
};

/// Throws std::invalid_argument on unknown keys, bad enums, or empty ranges.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical JSON; parse_config(serialize_config(c)) == c field by field.
std::string serialize_config(const ExperimentConfig& config);
/// FNV-1a over the canonical JSON, ignoring output_dir and threads.
std::uint64_t config_hash(const ExperimentConfig& config);

std::vector<std::string> preset_names();
/// Throws std::invalid_argument for an unknown name.
ExperimentConfig preset(std::string_view name);

/// Raised (and mapped to a nonzero CLI exit) when an ensemble cannot be drawn.
using ExperimentError = EnsembleGenerationError;

ResultTable run_transform_error_experiment(const ExperimentConfig& config);
ResultTable run_recovery_vs_j_experiment(const ExperimentConfig& config);
ResultTable run_two_view_1d_experiment(const ExperimentConfig& config);
/// Dispatches on config.kind.
ResultTable run_experiment(const ExperimentConfig& config);

/// Writes trials.csv, results.csv and summary.json under `dir`.
std::vector<std::filesystem::path> persist_results(const ResultTable& table, const ExperimentConfig& config,
                                                   const std::filesystem::path& dir);

}  // namespace jointcs
