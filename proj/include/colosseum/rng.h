// Copyright 2026 The Colosseum Authors
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

#ifndef COLOSSEUM_RNG_H_
#define COLOSSEUM_RNG_H_

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace colosseum {

// Counter-based random stream. The i-th draw is a pure function of
// (key, i), so a stream can be copied, stored inside a game state and
// replayed exactly. Named substreams are derived by hashing a label into
// the key.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next(); }

  uint64_t next();

  // Uniform integer in [0, n). n must be positive.
  uint64_t uniform_int(uint64_t n);
  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }

  Rng derive(std::string_view label) const;
  Rng derive(uint64_t index) const;

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

  // Fisher-Yates; portable across standard libraries unlike std::shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

uint64_t mix64(uint64_t x);
uint64_t hash_label(std::string_view label);

}  // namespace colosseum

#endif  // COLOSSEUM_RNG_H_
