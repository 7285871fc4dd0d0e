//
// Copyright 2026 The coda-augment Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef CODA_RNG_H_
#define CODA_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace coda {

// std::uniform_int_distribution is implementation defined, so all draws go
// through the helpers below to keep seeded output identical across standard
// libraries.
using Rng = std::mt19937_64;

// 64-bit FNV-1a.
uint64_t StableHash(std::string_view text);

uint64_t SplitMix64(uint64_t x);

// Derives an independent stream seed from a parent seed and a key.
uint64_t DeriveSeed(uint64_t parent, std::string_view key);

// Uniform integer in [0, bound). bound must be positive.
size_t UniformIndex(Rng& rng, size_t bound);

// Uniform real in [0, 1).
double UniformReal(Rng& rng);

// Draws `count` distinct indices from [0, population) without replacement.
// The returned order is itself uniformly random.
std::vector<size_t> SampleWithoutReplacement(Rng& rng, size_t population,
                                             size_t count);

}  // namespace coda

#endif  // CODA_RNG_H_
