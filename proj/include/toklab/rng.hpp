// Copyright 2026 The Toklab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOKLAB_RNG_HPP_
#define TOKLAB_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace toklab {

// splitmix64. Chosen because it is a few lines in any language, which keeps
// seeded splits and corruption reproducible across implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish index in [0, bound). Plain modulo so that other
  // implementations can reproduce the exact sequence.
  size_t Below(size_t bound) { return static_cast<size_t>(Next() % bound); }

 private:
  uint64_t state_;
};

// First output of a generator seeded with x.
inline uint64_t Mix64(uint64_t x) { return SplitMix64(x).Next(); }

// In-place Fisher-Yates: for i = n-1 .. 1, swap(a[i], a[Next() % (i+1)]).
template <typename T>
void FisherYates(std::span<T> items, SplitMix64& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = rng.Below(i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

inline uint64_t Fnv1a64(std::string_view data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ceil(fraction * n), robust to binary representation error (0.3 * 10 is
// 3.0000000000000004 in doubles and must still give 3).
size_t CeilFraction(double fraction, size_t n);

}  // namespace toklab

#endif  // TOKLAB_RNG_HPP_
