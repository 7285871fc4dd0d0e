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

#include "coda/rng.h"

#include <cassert>
#include <numeric>

namespace coda {

uint64_t StableHash(std::string_view text) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t parent, std::string_view key) {
  return SplitMix64(SplitMix64(parent) ^ StableHash(key));
}

size_t UniformIndex(Rng& rng, size_t bound) {
  assert(bound > 0);
  const uint64_t range = static_cast<uint64_t>(bound);
  // Rejection sampling removes the modulo bias.
  const uint64_t limit = Rng::max() - (Rng::max() % range);
  uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return static_cast<size_t>(draw % range);
}

double UniformReal(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<size_t> SampleWithoutReplacement(Rng& rng, size_t population,
                                             size_t count) {
  assert(count <= population);
  std::vector<size_t> pool(population);
  std::iota(pool.begin(), pool.end(), size_t{0});
  for (size_t i = 0; i < count; ++i) {
    const size_t j = i + UniformIndex(rng, population - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace coda
