// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include "jointcs/result_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "text_io.hpp"

namespace jointcs {
namespace {

constexpr const char* kTrialColumns =
    "experiment,sweep,sweep_value,trial,algorithm,recovery_rate,mse,transform_correct,"
    "rank_deficient,eta,attempts,trial_seed,config_hash,master_seed";

struct Stats {
  double mean = 0.0;
  double se = 0.0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  const auto n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

std::uint64_t parse_hex(std::string_view text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 16);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad hex field '" + std::string(text) + "'");
  }
  return v;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

void aggregate(ResultTable& table) {
  std::vector<std::pair<double, std::string>> order;
  std::map<std::pair<double, std::string>, std::vector<const TrialRecord*>> groups;
  for (const auto& t : table.trials) {
    auto key = std::make_pair(t.sweep_value, t.algorithm);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&t);
  }
  std::map<std::pair<double, std::string>, double> walls;
  for (const auto& r : table.rows) walls[{r.sweep_value, r.algorithm}] = r.wall_seconds;

  table.rows.clear();
  for (const auto& key : order) {
    const auto& members = groups[key];
    std::vector<double> rec;
    std::vector<double> err;
    std::vector<double> wrong;
    for (const auto* t : members) {
      rec.push_back(t->recovery_rate);
      err.push_back(t->mse);
      if (t->transform_correct >= 0) wrong.push_back(t->transform_correct ? 0.0 : 1.0);
    }
    ResultRow row;
    row.sweep_value = key.first;
    row.algorithm = key.second;
    row.trials = static_cast<Eigen::Index>(members.size());
    const auto r = stats_of(rec);
    const auto m = stats_of(err);
    row.recovery_mean = r.mean;
    row.recovery_se = r.se;
    row.mse_mean = m.mean;
    row.mse_se = m.se;
    if (wrong.empty()) {
      row.transform_error = std::nan("");
      row.transform_error_se = std::nan("");
    } else {
      const auto w = stats_of(wrong);
      row.transform_error = w.mean;
      row.transform_error_se = w.se;
    }
    if (auto it = walls.find(key); it != walls.end()) row.wall_seconds = it->second;
    table.rows.push_back(std::move(row));
  }
}

std::string trials_csv(const ResultTable& table) {
  std::ostringstream os;
  os << "# metrics=" << join(table.metrics, ';') << '\n';
  os << kTrialColumns << '\n';
  const auto hash = hex(table.config_hash);
  for (const auto& t : table.trials) {
    os << table.experiment << ',' << table.sweep << ',' << detail::format_double(t.sweep_value) << ','
       << t.trial << ',' << t.algorithm << ',' << detail::format_double(t.recovery_rate) << ','
       << detail::format_double(t.mse) << ',' << t.transform_correct << ',' << (t.rank_deficient ? 1 : 0)
       << ',' << detail::format_double(t.eta) << ',' << t.attempts << ',' << t.trial_seed << ',' << hash
       << ',' << table.seed << '\n';
  }
  return os.str();
}

std::string results_csv(const ResultTable& table) {
  std::ostringstream os;
  os << "experiment,sweep,sweep_value,algorithm,trials,recovery_mean,recovery_se,mse_mean,mse_se,"
        "transform_error,transform_error_se,config_hash,master_seed\n";
  const auto hash = hex(table.config_hash);
  for (const auto& r : table.rows) {
    os << table.experiment << ',' << table.sweep << ',' << detail::format_double(r.sweep_value) << ','
       << r.algorithm << ',' << r.trials << ',' << detail::format_double(r.recovery_mean) << ','
       << detail::format_double(r.recovery_se) << ',' << detail::format_double(r.mse_mean) << ','
       << detail::format_double(r.mse_se) << ',' << detail::format_double(r.transform_error) << ','
       << detail::format_double(r.transform_error_se) << ',' << hash << ',' << table.seed << '\n';
  }
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ResultTable read_trials_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_trials_csv: cannot open " + path.string());
  ResultTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# metrics=", 0) == 0) {
      const auto list = std::string_view(line).substr(10);
      if (!list.empty()) {
        for (auto m : detail::split(list, ';')) table.metrics.emplace_back(m);
      }
      continue;
    }
    if (line.front() == '#') continue;
    if (!header_seen) {
      if (line != kTrialColumns) throw std::runtime_error("read_trials_csv: unexpected header in " + path.string());
      header_seen = true;
      continue;
    }
    const auto f = detail::split(line, ',');
    if (f.size() != 14) throw std::runtime_error("read_trials_csv: wrong field count");
    table.experiment = std::string(f[0]);
    table.sweep = std::string(f[1]);
    TrialRecord t;
    t.sweep_value = detail::parse_double(f[2]);
    t.trial = detail::parse_int(f[3]);
    t.algorithm = std::string(f[4]);
    t.recovery_rate = detail::parse_double(f[5]);
    t.mse = detail::parse_double(f[6]);
    t.transform_correct = static_cast<int>(detail::parse_int(f[7]));
    t.rank_deficient = detail::parse_int(f[8]) != 0;
    t.eta = detail::parse_double(f[9]);
    t.attempts = detail::parse_int(f[10]);
    t.trial_seed = static_cast<std::uint64_t>(std::stoull(std::string(f[11])));
    table.config_hash = parse_hex(f[12]);
    table.seed = static_cast<std::uint64_t>(std::stoull(std::string(f[13])));
    table.trials.push_back(std::move(t));
  }
  if (!header_seen) throw std::runtime_error("read_trials_csv: no header in " + path.string());
  aggregate(table);
  return table;
}

std::vector<std::filesystem::path> emit_plot_data(const ResultTable& table, const std::filesystem::path& dir) {
  if (table.rows.empty()) throw std::invalid_argument("emit_plot_data: empty table");
  std::vector<std::filesystem::path> written;
  for (const auto& metric : table.metrics) {
    std::ostringstream os;
    os << "# " << table.experiment << ' ' << metric << " vs " << table.sweep << '\n';
    os << "sweep_value\tseries\tmean\tstderr\n";
    bool any = false;
    for (const auto& r : table.rows) {
      double mean = 0.0;
      double se = 0.0;
      if (metric == "recovery") {
        mean = r.recovery_mean;
        se = r.recovery_se;
      } else if (metric == "mse") {
        mean = r.mse_mean;
        se = r.mse_se;
      } else if (metric == "transform_error") {
        if (std::isnan(r.transform_error)) continue;
        mean = r.transform_error;
        se = r.transform_error_se;
      } else {
        throw std::invalid_argument("emit_plot_data: unknown metric '" + metric + "'");
      }
      os << detail::format_double(r.sweep_value) << '\t' << r.algorithm << '\t' << detail::format_double(mean)
         << '\t' << detail::format_double(se) << '\n';
      any = true;
    }
    if (!any) continue;
    const auto path = dir / (metric + ".tsv");
    write_text(path, os.str());
    written.push_back(path);
  }
  return written;
}

}  // namespace jointcs
