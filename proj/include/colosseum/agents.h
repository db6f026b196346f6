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

#ifndef COLOSSEUM_AGENTS_H_
#define COLOSSEUM_AGENTS_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "colosseum/game.h"
#include "colosseum/rng.h"

namespace colosseum {

// A decision rule. act() must return one of `legal` and may only draw
// randomness from `rng`, so a seeded stream reproduces its choices.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  virtual Action act(const Observation& obs, std::span<const Action> legal,
                     Rng& rng) const = 0;
  // Frozen copy for opponent pools. Stateless policies return themselves.
  virtual std::shared_ptr<const Policy> freeze() const = 0;
};

using PolicyPtr = std::shared_ptr<const Policy>;

class RandomPolicy final : public Policy,
                           public std::enable_shared_from_this<RandomPolicy> {
 public:
  std::string name() const override { return "random"; }
  Action act(const Observation& obs, std::span<const Action> legal,
             Rng& rng) const override;
  PolicyPtr freeze() const override { return shared_from_this(); }
};

// Always the first legal action. Deterministic; handy as a server bot.
class FirstLegalPolicy final
    : public Policy,
      public std::enable_shared_from_this<FirstLegalPolicy> {
 public:
  std::string name() const override { return "first"; }
  Action act(const Observation& obs, std::span<const Action> legal,
             Rng& rng) const override;
  PolicyPtr freeze() const override { return shared_from_this(); }
};

// Hand-coded Tron driver: forward while clear, otherwise a random clear
// side, otherwise forward. With probability epsilon it ignores all of that
// and picks uniformly among forward/left/right.
Action scripted_tron_act(const Observation& obs, std::span<const Action> legal,
                         double epsilon, Rng& rng);

class ScriptedTronPolicy final
    : public Policy,
      public std::enable_shared_from_this<ScriptedTronPolicy> {
 public:
  explicit ScriptedTronPolicy(double epsilon);

  double epsilon() const { return epsilon_; }
  std::string name() const override;
  Action act(const Observation& obs, std::span<const Action> legal,
             Rng& rng) const override;
  PolicyPtr freeze() const override { return shared_from_this(); }

 private:
  double epsilon_;
};

// Resolves "random", "first" and "scripted:eps=<p>". Throws GameError for
// anything else.
PolicyPtr make_policy(std::string_view spec);

}  // namespace colosseum

#endif  // COLOSSEUM_AGENTS_H_
