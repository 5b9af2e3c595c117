// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nlohmann/json.hpp>

#include "jointcs/correlation.hpp"

namespace jointcs::detail {

using nlohmann::json;

inline json to_json(const TransformKind& kind) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, IdentityTransform>) {
          return json{{"kind", "identity"}};
        } else if constexpr (std::is_same_v<K, Translation2D>) {
          return json{{"kind", "shift2d"}, {"dx", k.dx}, {"dy", k.dy}};
        } else if constexpr (std::is_same_v<K, Translation1D>) {
          return json{{"kind", "shift1d"}, {"dt", k.dt}};
        } else {
          return json{{"kind", "custom"}, {"label", k.label}};
        }
      },
      kind);
}

// Accepts {"kind": ...} objects, or bare offset arrays: [dx, dy] / [dt].
inline TransformKind transform_kind_from_json(const json& j) {
  if (j.is_array()) {
    if (j.size() == 2) return Translation2D{j.at(0).get<int>(), j.at(1).get<int>()};
    if (j.size() == 1) return Translation1D{j.at(0).get<int>()};
    throw std::invalid_argument("translation offsets must have one or two entries");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "identity") return IdentityTransform{};
  if (kind == "shift2d") return Translation2D{j.at("dx").get<int>(), j.at("dy").get<int>()};
  if (kind == "shift1d") return Translation1D{j.at("dt").get<int>()};
  if (kind == "custom") return CustomTransform{j.value("label", std::string{})};
  throw std::invalid_argument("unknown transform kind '" + kind + "'");
}

}  // namespace jointcs::detail
