// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "jointcs/experiment.hpp"
#include "json_io.hpp"

namespace jointcs {
namespace {

using detail::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!keys.count(item.key())) {
      throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
    }
  }
}

// Scalars are accepted where a list is expected: "views": 4 == "views": [4].
template <typename T>
std::vector<T> list_of(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

ExperimentKind kind_from_string(const std::string& s) {
  if (s == "transform-error-vs-M") return ExperimentKind::kTransformErrorVsM;
  if (s == "recovery-vs-J") return ExperimentKind::kRecoveryVsJ;
  if (s == "two-view-1d") return ExperimentKind::kTwoView1D;
  throw std::invalid_argument("config: unknown experiment '" + s + "'");
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "jt") return Algorithm::kJT;
  if (s == "gjt") return Algorithm::kGJT;
  if (s == "it") return Algorithm::kIT;
  throw std::invalid_argument("config: unknown algorithm '" + s + "'");
}

DictionaryVariant variant_from_string(const std::string& s) {
  if (s == "gaussian2d") return DictionaryVariant::kGaussian2D;
  if (s == "gabor1d") return DictionaryVariant::kGabor1D;
  if (s == "custom") return DictionaryVariant::kCustom;
  throw std::invalid_argument("config: unknown dictionary variant '" + s + "'");
}

const char* to_string(CoefficientRule rule) {
  return rule == CoefficientRule::kShared ? "shared" : "independent";
}

const char* to_string(SensingMode mode) { return mode == SensingMode::kGaussian ? "gaussian" : "identity"; }

DictionarySpec parse_dictionary(const json& j) {
  reject_unknown_keys(j,
                      {"variant", "path", "width", "height", "theta_divisions", "theta_include_pi", "thetas", "sx",
                       "sy", "translation_offset", "translation_stride", "length", "t_start", "t_step", "scales",
                       "omegas", "include_negated"},
                      "dictionary");
  DictionarySpec d;
  if (j.contains("variant")) d.variant = variant_from_string(j.at("variant").get<std::string>());
  d.path = j.value("path", d.path);
  d.width = j.value("width", d.width);
  d.height = j.value("height", d.height);
  d.theta_divisions = j.value("theta_divisions", d.theta_divisions);
  d.theta_include_pi = j.value("theta_include_pi", d.theta_include_pi);
  if (j.contains("thetas")) d.thetas = list_of<double>(j.at("thetas"));
  if (j.contains("sx")) d.sxs = list_of<double>(j.at("sx"));
  if (j.contains("sy")) d.sys = list_of<double>(j.at("sy"));
  d.translation_offset = j.value("translation_offset", d.translation_offset);
  d.translation_stride = j.value("translation_stride", d.translation_stride);
  d.length = j.value("length", d.length);
  d.t_start = j.value("t_start", d.t_start);
  d.t_step = j.value("t_step", d.t_step);
  if (j.contains("scales")) d.scales = list_of<double>(j.at("scales"));
  if (j.contains("omegas")) d.omegas = list_of<double>(j.at("omegas"));
  d.include_negated = j.value("include_negated", d.include_negated);
  if (d.variant == DictionaryVariant::kCustom && d.path.empty()) {
    throw std::invalid_argument("config: a custom dictionary needs a path");
  }
  return d;
}

json dictionary_to_json(const DictionarySpec& d) {
  return json{{"variant", to_string(d.variant)},
              {"path", d.path},
              {"width", d.width},
              {"height", d.height},
              {"theta_divisions", d.theta_divisions},
              {"theta_include_pi", d.theta_include_pi},
              {"thetas", d.thetas},
              {"sx", d.sxs},
              {"sy", d.sys},
              {"translation_offset", d.translation_offset},
              {"translation_stride", d.translation_stride},
              {"length", d.length},
              {"t_start", d.t_start},
              {"t_step", d.t_step},
              {"scales", d.scales},
              {"omegas", d.omegas},
              {"include_negated", d.include_negated}};
}

std::vector<TransformKind> parse_kinds(const json& j) {
  std::vector<TransformKind> kinds;
  for (const auto& item : j) kinds.push_back(detail::transform_kind_from_json(item));
  return kinds;
}

json kinds_to_json(const std::vector<TransformKind>& kinds) {
  json out = json::array();
  for (const auto& k : kinds) out.push_back(detail::to_json(k));
  return out;
}

json config_to_json(const ExperimentConfig& c, bool for_hash) {
  json algorithms = json::array();
  for (auto a : c.algorithms) algorithms.push_back(to_string(a));
  json per_view = json::array();
  for (const auto& list : c.candidates.per_view) per_view.push_back(kinds_to_json(list));
  json j{{"name", c.name},
         {"experiment", to_string(c.kind)},
         {"dictionary", dictionary_to_json(c.dictionary)},
         {"sparsity", c.sparsity},
         {"views", c.views},
         {"measurements", c.measurements},
         {"candidates", json{{"uniform", kinds_to_json(c.candidates.uniform)}, {"per_view", per_view}}},
         {"algorithms", algorithms},
         {"trials", c.trials},
         {"seed", c.seed},
         {"coefficient_rule", to_string(c.coefficient_rule)},
         {"magnitude_min", c.magnitude_min},
         {"magnitude_max", c.magnitude_max},
         {"enforce_conditions", c.enforce_conditions},
         {"max_attempts", c.max_attempts},
         {"sensing", to_string(c.sensing)},
         {"fixed_ensemble", c.fixed_ensemble},
         {"signal_csv", c.signal_csv}};
  if (!for_hash) {
    j["output_dir"] = c.output_dir;
    j["threads"] = c.threads;
  }
  return j;
}

void validate(const ExperimentConfig& c) {
  if (c.views.empty()) throw std::invalid_argument("config: 'views' must not be empty");
  if (c.measurements.empty()) throw std::invalid_argument("config: 'measurements' must not be empty");
  if (c.sparsity < 1) throw std::invalid_argument("config: 'sparsity' must be >= 1");
  if (c.trials < 1) throw std::invalid_argument("config: 'trials' must be >= 1");
  if (c.max_attempts < 1) throw std::invalid_argument("config: 'max_attempts' must be >= 1");
  for (Index v : c.views) {
    if (v < 1) throw std::invalid_argument("config: view counts must be >= 1");
  }
  for (Index m : c.measurements) {
    if (m < 1) throw std::invalid_argument("config: measurement counts must be >= 1");
  }
  switch (c.kind) {
    case ExperimentKind::kTransformErrorVsM:
      if (c.views.size() != 1) throw std::invalid_argument("config: transform-error-vs-M takes a single view count");
      break;
    case ExperimentKind::kRecoveryVsJ:
      if (c.measurements.size() != 1) {
        throw std::invalid_argument("config: recovery-vs-J takes a single measurement count");
      }
      break;
    case ExperimentKind::kTwoView1D:
      if (c.views != std::vector<Index>{2}) throw std::invalid_argument("config: two-view-1d requires views = 2");
      if (c.measurements.size() != 1) {
        throw std::invalid_argument("config: two-view-1d takes a single measurement count");
      }
      if (!c.signal_csv.empty() && c.signal_csv.size() != 2) {
        throw std::invalid_argument("config: signal_csv needs exactly one file per view");
      }
      break;
  }
  if (c.kind != ExperimentKind::kTwoView1D && !c.signal_csv.empty()) {
    throw std::invalid_argument("config: signal_csv is only supported by two-view-1d");
  }
  if (!(c.magnitude_min > 0.0) || c.magnitude_max < c.magnitude_min) {
    throw std::invalid_argument("config: need 0 < magnitude_min <= magnitude_max");
  }
  if (c.candidates.uniform.empty() && c.candidates.per_view.empty()) {
    throw std::invalid_argument("config: no candidate transforms given");
  }
  for (const auto& list : c.candidates.per_view) {
    if (list.empty()) throw std::invalid_argument("config: empty per-view candidate list");
  }
  if (c.threads < 1) throw std::invalid_argument("config: 'threads' must be >= 1");

  // parameter grids of a generated dictionary; a loaded one brings its own
  const auto& d = c.dictionary;
  if (d.path.empty()) {
    if (d.variant == DictionaryVariant::kGaussian2D) {
      if (d.sxs.empty() || d.sys.empty()) throw std::invalid_argument("config: empty 'sx' or 'sy' range");
      if (d.thetas.empty() && d.theta_divisions < 1) {
        throw std::invalid_argument("config: need 'thetas' or theta_divisions >= 1");
      }
      if (d.translation_stride < 1) throw std::invalid_argument("config: translation_stride must be >= 1");
    } else if (d.variant == DictionaryVariant::kGabor1D) {
      if (d.scales.empty() || d.omegas.empty()) throw std::invalid_argument("config: empty 'scales' or 'omegas' range");
      if (d.t_step < 1) throw std::invalid_argument("config: t_step must be >= 1");
    }
  }
}

std::vector<TransformKind> shifts_2d(std::initializer_list<int> offsets) {
  std::vector<TransformKind> kinds;
  for (int dx : offsets) {
    for (int dy : offsets) kinds.push_back(Translation2D{dx, dy});
  }
  return kinds;
}

ExperimentConfig image_base(int side, Index sparsity) {
  ExperimentConfig c;
  c.dictionary.variant = DictionaryVariant::kGaussian2D;
  c.dictionary.width = side;
  c.dictionary.height = side;
  c.sparsity = sparsity;
  c.candidates.uniform = shifts_2d({-2, 0, 2});
  c.seed = 20260101;
  return c;
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kTransformErrorVsM: return "transform-error-vs-M";
    case ExperimentKind::kRecoveryVsJ: return "recovery-vs-J";
    case ExperimentKind::kTwoView1D: return "two-view-1d";
  }
  return "unknown";
}

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kJT: return "jt";
    case Algorithm::kGJT: return "gjt";
    case Algorithm::kIT: return "it";
  }
  return "unknown";
}

std::vector<Algorithm> ExperimentConfig::effective_algorithms() const {
  if (!algorithms.empty()) return algorithms;
  switch (kind) {
    case ExperimentKind::kTransformErrorVsM: return {Algorithm::kJT, Algorithm::kGJT};
    case ExperimentKind::kRecoveryVsJ: return {Algorithm::kGJT, Algorithm::kIT};
    case ExperimentKind::kTwoView1D: return {Algorithm::kJT, Algorithm::kIT};
  }
  return {};
}

Dictionary build_dictionary(const DictionarySpec& spec) {
  if (!spec.path.empty()) return load_dictionary(spec.path);
  if (spec.variant == DictionaryVariant::kGabor1D) {
    Gabor1DGrid grid;
    grid.length = spec.length;
    grid.t_start = spec.t_start;
    grid.t_step = spec.t_step;
    grid.scales = spec.scales;
    grid.omegas = spec.omegas;
    grid.include_negated = spec.include_negated;
    return build_gabor_1d_dictionary(grid);
  }
  if (spec.variant != DictionaryVariant::kGaussian2D) {
    throw std::invalid_argument("build_dictionary: custom dictionaries must be loaded from a path");
  }
  if (spec.translation_stride < 1 || spec.translation_offset < 0) {
    throw std::invalid_argument("build_dictionary: bad translation lattice");
  }
  Gaussian2DGrid grid;
  grid.width = spec.width;
  grid.height = spec.height;
  if (!spec.thetas.empty()) {
    grid.thetas = spec.thetas;
  } else {
    if (spec.theta_divisions < 1) throw std::invalid_argument("build_dictionary: theta_divisions must be >= 1");
    const int last = spec.theta_include_pi ? spec.theta_divisions : spec.theta_divisions - 1;
    for (int k = 0; k <= last; ++k) grid.thetas.push_back(k * std::numbers::pi / spec.theta_divisions);
  }
  grid.sxs = spec.sxs;
  grid.sys = spec.sys;
  for (int ty = spec.translation_offset; ty < spec.height; ty += spec.translation_stride) {
    for (int tx = spec.translation_offset; tx < spec.width; tx += spec.translation_stride) {
      grid.translations.emplace_back(tx, ty);
    }
  }
  return build_gaussian_2d_dictionary(grid);
}

CandidateSet build_candidates(const CandidateSpec& spec, const Dictionary& dict, Index views) {
  if (views < 1) throw std::invalid_argument("build_candidates: views must be >= 1");
  if (spec.per_view.empty()) return CandidateSet::uniform(dict, views, spec.uniform);
  std::vector<std::vector<TransformKind>> lists;
  for (Index v = 1; v < views; ++v) {
    const auto i = static_cast<std::size_t>(v - 1);
    if (i < spec.per_view.size()) {
      lists.push_back(spec.per_view[i]);
    } else if (!spec.uniform.empty()) {
      lists.push_back(spec.uniform);
    } else {
      throw std::invalid_argument("build_candidates: no candidates for view " + std::to_string(v));
    }
  }
  return CandidateSet::per_view(dict, lists);
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown_keys(j,
                      {"name", "experiment", "dictionary", "sparsity", "views", "measurements", "candidates",
                       "algorithms", "trials", "seed", "output_dir", "coefficient_rule", "magnitude_min",
                       "magnitude_max", "enforce_conditions", "max_attempts", "sensing", "fixed_ensemble",
                       "signal_csv", "threads"},
                      "config");
  if (!j.contains("experiment")) throw std::invalid_argument("config: 'experiment' is required");
  if (!j.contains("seed")) throw std::invalid_argument("config: 'seed' is required");

  try {
    ExperimentConfig c;
    c.kind = kind_from_string(j.at("experiment").get<std::string>());
    c.name = j.value("name", std::string(to_string(c.kind)));
    if (j.contains("dictionary")) c.dictionary = parse_dictionary(j.at("dictionary"));
    c.sparsity = j.value("sparsity", c.sparsity);
    if (j.contains("views")) c.views = list_of<Index>(j.at("views"));
    if (j.contains("measurements")) c.measurements = list_of<Index>(j.at("measurements"));
    if (j.contains("candidates")) {
      const auto& cj = j.at("candidates");
      if (cj.is_array()) {
        c.candidates.uniform = parse_kinds(cj);
      } else {
        reject_unknown_keys(cj, {"uniform", "per_view"}, "candidates");
        if (cj.contains("uniform")) c.candidates.uniform = parse_kinds(cj.at("uniform"));
        if (cj.contains("per_view")) {
          for (const auto& list : cj.at("per_view")) c.candidates.per_view.push_back(parse_kinds(list));
        }
      }
    }
    if (j.contains("algorithms")) {
      for (const auto& a : list_of<std::string>(j.at("algorithms"))) c.algorithms.push_back(algorithm_from_string(a));
    }
    c.trials = j.value("trials", c.trials);
    c.seed = j.at("seed").get<std::uint64_t>();
    c.output_dir = j.value("output_dir", c.output_dir);
    if (j.contains("coefficient_rule")) {
      const auto rule = j.at("coefficient_rule").get<std::string>();
      if (rule == "shared") {
        c.coefficient_rule = CoefficientRule::kShared;
      } else if (rule == "independent") {
        c.coefficient_rule = CoefficientRule::kIndependent;
      } else {
        throw std::invalid_argument("config: unknown coefficient_rule '" + rule + "'");
      }
    }
    c.magnitude_min = j.value("magnitude_min", c.magnitude_min);
    c.magnitude_max = j.value("magnitude_max", c.magnitude_max);
    c.enforce_conditions = j.value("enforce_conditions", c.enforce_conditions);
    c.max_attempts = j.value("max_attempts", c.max_attempts);
    if (j.contains("sensing")) {
      const auto mode = j.at("sensing").get<std::string>();
      if (mode == "gaussian") {
        c.sensing = SensingMode::kGaussian;
      } else if (mode == "identity") {
        c.sensing = SensingMode::kIdentity;
      } else {
        throw std::invalid_argument("config: unknown sensing mode '" + mode + "'");
      }
    }
    c.fixed_ensemble = j.value("fixed_ensemble", c.fixed_ensemble);
    if (j.contains("signal_csv")) c.signal_csv = list_of<std::string>(j.at("signal_csv"));
    c.threads = j.value("threads", c.threads);
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& config) { return config_to_json(config, false).dump(2) + "\n"; }

std::uint64_t config_hash(const ExperimentConfig& config) {
  const std::string text = config_to_json(config, true).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> preset_names() {
  return {"transform-sweep", "transform-sweep-desk", "view-sweep", "view-sweep-desk", "two-view-traces", "smoke"};
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  if (name == "transform-sweep") {
    // transform estimation at full scale: 32x32 images, |T| = 9^3
    c = image_base(32, 5);
    c.kind = ExperimentKind::kTransformErrorVsM;
    c.views = {4};
    c.measurements = {40, 60, 80, 100, 120, 150};
    c.trials = 20;
    c.max_attempts = 500000;
  } else if (name == "transform-sweep-desk") {
    c = image_base(16, 3);
    c.kind = ExperimentKind::kTransformErrorVsM;
    c.views = {4};
    c.measurements = {10, 20, 30, 40, 60};
    c.trials = 20;
  } else if (name == "view-sweep") {
    c = image_base(32, 5);
    c.kind = ExperimentKind::kRecoveryVsJ;
    c.views = {1, 2, 5, 10, 15, 20, 25, 30};
    c.measurements = {150};
    c.trials = 10;
    c.max_attempts = 500000;
  } else if (name == "view-sweep-desk") {
    c = image_base(16, 3);
    c.kind = ExperimentKind::kRecoveryVsJ;
    c.views = {2, 5, 10, 20};
    c.measurements = {60};
    c.trials = 10;
  } else if (name == "two-view-traces") {
    // synthetic stand-in for the two-trace experiment: shifted 1D ensembles
    c.kind = ExperimentKind::kTwoView1D;
    c.dictionary.variant = DictionaryVariant::kGabor1D;
    c.dictionary.length = 1000;
    c.sparsity = 50;
    c.views = {2};
    c.measurements = {150};
    c.candidates.uniform = {Translation1D{-10}, Translation1D{0}, Translation1D{10}};
    c.trials = 200;
    c.enforce_conditions = false;
    c.seed = 20260101;
  } else if (name == "smoke") {
    c = image_base(8, 2);
    c.kind = ExperimentKind::kTransformErrorVsM;
    c.views = {3};
    c.measurements = {16, 32};
    c.trials = 3;
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  c.name = std::string(name);
  c.output_dir = "results/" + c.name;
  c.algorithms = c.effective_algorithms();
  validate(c);
  return c;
}

}  // namespace jointcs
