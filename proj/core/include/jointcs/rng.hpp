// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace jointcs {

using Rng = std::mt19937_64;

/// Derives an independent child seed from a parent seed and a stream id.
/// Used everywhere a master seed fans out into per-trial and per-view streams.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream);

Rng make_rng(std::uint64_t seed);

}  // namespace jointcs
