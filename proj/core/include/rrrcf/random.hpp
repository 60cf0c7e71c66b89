/*
 * Copyright 2026 The rrrcf Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

namespace rrrcf {

// Engine used by every tree. Its textual state is persisted in archives.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed for the `stream`-th child of `master`. Distinct streams of the same
// master give statistically independent engines.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double unit_uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n) for n >= 1.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

}  // namespace rrrcf
