// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include "jointcs/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "jointcs/analysis.hpp"
#include "jointcs/decode.hpp"
#include "jointcs/rng.hpp"
#include "jointcs/sensing.hpp"
#include "json_io.hpp"

namespace jointcs {
namespace {

using detail::json;

// Stream ids under the master seed. Sweep points use their own index.
constexpr std::uint64_t kEnsembleStream = 0x656e73656d626c65ULL;
constexpr std::uint64_t kFixedEnsemble = 0x6669786564ULL;
constexpr std::uint64_t kTruthStream = 1;
constexpr std::uint64_t kSignalStream = 2;
constexpr std::uint64_t kSensingStream = 3;

struct SweepPoint {
  Index views = 1;
  Index measurements = 1;
  double value = 0.0;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers. Every index runs;
// afterwards the exception of the lowest failing index, if any, is rethrown,
// so the outcome does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> points;
  if (cfg.kind == ExperimentKind::kRecoveryVsJ) {
    for (Index j : cfg.views) points.push_back({j, cfg.measurements.front(), static_cast<double>(j)});
  } else {
    for (Index m : cfg.measurements) points.push_back({cfg.views.front(), m, static_cast<double>(m)});
  }
  return points;
}

TransformVector draw_truth(const CandidateSet& candidates, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::vector<Index> choice(static_cast<std::size_t>(candidates.views()), 0);
  for (Index v = 1; v < candidates.views(); ++v) {
    const auto n = candidates.candidates(v).size();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    choice[static_cast<std::size_t>(v)] = static_cast<Index>(pick(rng));
  }
  return candidates.vector_from_choice(choice);
}

SignalEnsemble load_external(const ExperimentConfig& cfg, const Dictionary& dict) {
  std::vector<Eigen::VectorXd> signals;
  for (const auto& path : cfg.signal_csv) signals.push_back(read_signal_csv(path));
  for (std::size_t j = 0; j < signals.size(); ++j) {
    if (signals[j].size() != dict.signal_length()) {
      throw std::invalid_argument("ingested signal " + cfg.signal_csv[j] + " has " +
                                  std::to_string(signals[j].size()) + " samples; the dictionary expects " +
                                  std::to_string(dict.signal_length()));
    }
  }
  return external_ensemble(std::move(signals));
}

std::vector<SensingMatrix> sensing_for(const ExperimentConfig& cfg, Index m, Index n, Index views,
                                       std::uint64_t seed) {
  if (cfg.sensing == SensingMode::kIdentity) {
    if (m != n) {
      throw std::invalid_argument("identity sensing requires M = N (got M = " + std::to_string(m) +
                                  ", N = " + std::to_string(n) + ")");
    }
    return std::vector<SensingMatrix>(static_cast<std::size_t>(views), identity_sensing(n));
  }
  return sample_view_matrices(m, n, views, seed);
}

DecodeResult decode_with(Algorithm algorithm, const MeasurementSet& ms, const Dictionary& dict, Index s,
                         const CandidateSet& candidates) {
  switch (algorithm) {
    case Algorithm::kJT: return jt_decode(ms, dict, s, candidates);
    case Algorithm::kGJT: return gjt_decode(ms, dict, s, candidates);
    case Algorithm::kIT: return independent_threshold_decode(ms, dict, s);
  }
  throw std::logic_error("decode_with: unknown algorithm");
}

std::vector<std::string> metrics_for(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::kTransformErrorVsM: return {"transform_error"};
    case ExperimentKind::kRecoveryVsJ: return {"recovery", "mse"};
    case ExperimentKind::kTwoView1D:
      if (!cfg.signal_csv.empty()) return {"mse"};
      return {"mse", "recovery"};
  }
  return {};
}

ResultTable run(const ExperimentConfig& cfg) {
  const Dictionary dict = build_dictionary(cfg.dictionary);
  const auto algorithms = cfg.effective_algorithms();
  const auto points = sweep_points(cfg);
  const bool external = !cfg.signal_csv.empty();
  const Index trials = cfg.trials;
  const Index n = dict.signal_length();

  std::map<Index, CandidateSet> candidates;
  for (const auto& p : points) {
    if (!candidates.count(p.views)) candidates.emplace(p.views, build_candidates(cfg.candidates, dict, p.views));
  }

  // Ensembles do not depend on M, so an M sweep reuses one ensemble per trial
  // across its points; a J sweep draws per point.
  const bool shared_across_points = cfg.kind != ExperimentKind::kRecoveryVsJ;
  struct EnsembleJob {
    Index views;
    std::uint64_t seed;
  };
  std::vector<EnsembleJob> jobs;
  std::map<std::pair<Index, std::uint64_t>, std::size_t> job_index;
  std::vector<std::size_t> job_of(points.size() * static_cast<std::size_t>(trials));
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    std::uint64_t root = derive_seed(cfg.seed, kEnsembleStream);
    if (!shared_across_points) root = derive_seed(root, pi + 1);
    for (Index t = 0; t < trials; ++t) {
      const std::uint64_t seed =
          derive_seed(root, cfg.fixed_ensemble ? kFixedEnsemble : static_cast<std::uint64_t>(t));
      const auto key = std::make_pair(points[pi].views, external ? 0 : seed);
      auto [it, inserted] = job_index.try_emplace(key, jobs.size());
      if (inserted) jobs.push_back({key.first, key.second});
      job_of[pi * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)] = it->second;
    }
  }

  std::vector<SignalEnsemble> ensembles(jobs.size());
  if (external) {
    const auto loaded = load_external(cfg, dict);
    for (auto& e : ensembles) e = loaded;
  } else {
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
      const auto& cands = candidates.at(jobs[i].views);
      EnsembleOptions options;
      options.sparsity = cfg.sparsity;
      options.rule = cfg.coefficient_rule;
      options.magnitude_min = cfg.magnitude_min;
      options.magnitude_max = cfg.magnitude_max;
      options.max_attempts = cfg.max_attempts;
      options.enforce_conditions = cfg.enforce_conditions;
      options.seed = derive_seed(jobs[i].seed, kSignalStream);
      const auto truth = draw_truth(cands, derive_seed(jobs[i].seed, kTruthStream));
      ensembles[i] = generate_ensemble(dict, truth, options);
    });
  }

  struct Slot {
    std::vector<TrialRecord> records;
    std::vector<double> seconds;
  };
  std::vector<Slot> slots(job_of.size());
  parallel_for(slots.size(), cfg.threads, [&](std::size_t idx) {
    const std::size_t pi = idx / static_cast<std::size_t>(trials);
    const Index t = static_cast<Index>(idx % static_cast<std::size_t>(trials));
    const auto& point = points[pi];
    const auto& ensemble = ensembles[job_of[idx]];
    const auto& cands = candidates.at(point.views);
    const std::uint64_t trial_seed = derive_seed(derive_seed(cfg.seed, pi), static_cast<std::uint64_t>(t));

    auto matrices = sensing_for(cfg, point.measurements, n, point.views, derive_seed(trial_seed, kSensingStream));
    const auto ms = measure_ensemble(std::move(matrices), ensemble.signals);

    Slot& slot = slots[idx];
    for (Algorithm algorithm : algorithms) {
      const auto start = std::chrono::steady_clock::now();
      const auto result = decode_with(algorithm, ms, dict, cfg.sparsity, cands);
      slot.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());

      TrialRecord r;
      r.sweep_value = point.value;
      r.trial = t;
      r.algorithm = to_string(algorithm);
      r.recovery_rate = external ? std::nan("") : recovery_rate(ensemble.supports, result.supports, cfg.sparsity);
      r.mse = mse(ensemble.signals, result.reconstructions);
      if (algorithm != Algorithm::kIT && !external) r.transform_correct = result.transforms == ensemble.transforms;
      r.rank_deficient = result.any_rank_deficient();
      r.eta = ensemble.eta;
      r.attempts = ensemble.attempts;
      r.trial_seed = trial_seed;
      slot.records.push_back(std::move(r));
    }
  });

  ResultTable table;
  table.experiment = cfg.name;
  table.sweep = cfg.kind == ExperimentKind::kRecoveryVsJ ? "J" : "M";
  table.metrics = metrics_for(cfg);
  table.config_hash = config_hash(cfg);
  table.seed = cfg.seed;
  std::map<std::pair<double, std::string>, double> walls;
  for (const auto& slot : slots) {
    for (std::size_t a = 0; a < slot.records.size(); ++a) {
      walls[{slot.records[a].sweep_value, slot.records[a].algorithm}] += slot.seconds[a];
      table.trials.push_back(slot.records[a]);
    }
  }
  aggregate(table);
  for (auto& row : table.rows) row.wall_seconds = walls[{row.sweep_value, row.algorithm}];
  return table;
}

void require_kind(const ExperimentConfig& cfg, ExperimentKind kind) {
  if (cfg.kind != kind) {
    throw std::invalid_argument(std::string("config describes a ") + to_string(cfg.kind) + " experiment, not " +
                                to_string(kind));
  }
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

ResultTable run_transform_error_experiment(const ExperimentConfig& config) {
  require_kind(config, ExperimentKind::kTransformErrorVsM);
  if (config.dictionary.variant != DictionaryVariant::kGaussian2D) {
    throw std::invalid_argument("transform-error-vs-M needs a 2D dictionary");
  }
  return run(config);
}

ResultTable run_recovery_vs_j_experiment(const ExperimentConfig& config) {
  require_kind(config, ExperimentKind::kRecoveryVsJ);
  return run(config);
}

ResultTable run_two_view_1d_experiment(const ExperimentConfig& config) {
  require_kind(config, ExperimentKind::kTwoView1D);
  return run(config);
}

ResultTable run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::kTransformErrorVsM: return run_transform_error_experiment(config);
    case ExperimentKind::kRecoveryVsJ: return run_recovery_vs_j_experiment(config);
    case ExperimentKind::kTwoView1D: return run_two_view_1d_experiment(config);
  }
  throw std::logic_error("run_experiment: unknown kind");
}

std::vector<std::filesystem::path> persist_results(const ResultTable& table, const ExperimentConfig& config,
                                                   const std::filesystem::path& dir) {
  const auto trials_path = dir / "trials.csv";
  const auto results_path = dir / "results.csv";
  const auto summary_path = dir / "summary.json";
  write_text(trials_path, trials_csv(table));
  write_text(results_path, results_csv(table));

  // NaN has no JSON spelling; such fields become null.
  auto number = [](double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); };
  json rows = json::array();
  double total = 0.0;
  for (const auto& r : table.rows) {
    rows.push_back(json{{"sweep_value", r.sweep_value},
                        {"algorithm", r.algorithm},
                        {"trials", r.trials},
                        {"recovery_mean", number(r.recovery_mean)},
                        {"recovery_se", number(r.recovery_se)},
                        {"mse_mean", number(r.mse_mean)},
                        {"mse_se", number(r.mse_se)},
                        {"transform_error", number(r.transform_error)},
                        {"transform_error_se", number(r.transform_error_se)},
                        {"wall_seconds", r.wall_seconds}});
    total += r.wall_seconds;
  }
  json summary{{"experiment", table.experiment},
               {"sweep", table.sweep},
               {"metrics", table.metrics},
               {"config_hash", hex(table.config_hash)},
               {"master_seed", table.seed},
               {"config", json::parse(serialize_config(config))},
               {"rows", rows},
               {"decode_wall_seconds", total}};
  write_text(summary_path, summary.dump(2) + "\n");
  return {trials_path, results_path, summary_path};
}

}  // namespace jointcs
