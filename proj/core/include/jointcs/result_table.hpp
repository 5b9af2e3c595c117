// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace jointcs {

/// One decoder run on one trial. Quantities that do not apply are NaN
/// (recovery on external signals) or -1 (transform_correct for IT).
struct TrialRecord {
  double sweep_value = 0.0;
  Eigen::Index trial = 0;
  std::string algorithm;
  double recovery_rate = 0.0;
  double mse = 0.0;
  int transform_correct = -1;
  bool rank_deficient = false;
  double eta = 0.0;
  Eigen::Index attempts = 0;
  std::uint64_t trial_seed = 0;
};

/// Aggregate over the trials of one (sweep value, algorithm) pair.
/// Standard errors are sample standard deviation / sqrt(n).
struct ResultRow {
  double sweep_value = 0.0;
  std::string algorithm;
  Eigen::Index trials = 0;
  double recovery_mean = 0.0;
  double recovery_se = 0.0;
  double mse_mean = 0.0;
  double mse_se = 0.0;
  double transform_error = 0.0;
  double transform_error_se = 0.0;
  double wall_seconds = 0.0;  // summary.json only, never in CSV
};

struct ResultTable {
  std::string experiment;
  std::string sweep;                  // "M" or "J"
  std::vector<std::string> metrics;   // subset of recovery, mse, transform_error
  std::vector<TrialRecord> trials;
  std::vector<ResultRow> rows;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

/// Rebuilds `rows` from `trials`, keeping first-seen (sweep value, algorithm)
/// order and any wall times already present.
void aggregate(ResultTable& table);

std::string trials_csv(const ResultTable& table);
std::string results_csv(const ResultTable& table);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Parses a trials.csv written by trials_csv and re-aggregates it.
ResultTable read_trials_csv(const std::filesystem::path& path);

/// One tab-separated file per metric (<metric>.tsv) with columns
/// sweep_value, series, mean, stderr. Throws on an empty table.
std::vector<std::filesystem::path> emit_plot_data(const ResultTable& table, const std::filesystem::path& dir);

}  // namespace jointcs
