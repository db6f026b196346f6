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

#include "colosseum/agents.h"

#include <algorithm>
#include <cstdio>
#include <vector>

#include "colosseum/tron.h"

namespace colosseum {

namespace {

void require_legal(std::span<const Action> legal) {
  if (legal.empty()) throw GameError("policy: no legal actions");
}

}  // namespace

Action RandomPolicy::act(const Observation&, std::span<const Action> legal,
                         Rng& rng) const {
  require_legal(legal);
  return legal[rng.uniform_int(legal.size())];
}

Action FirstLegalPolicy::act(const Observation&, std::span<const Action> legal,
                             Rng&) const {
  require_legal(legal);
  return legal.front();
}

Action scripted_tron_act(const Observation& obs, std::span<const Action> legal,
                         double epsilon, Rng& rng) {
  require_legal(legal);
  static constexpr Action kMoves[3] = {kForward, kLeft, kRight};
  if (rng.bernoulli(epsilon)) return kMoves[rng.uniform_int(3)];
  const auto clear = tron_clearance(obs);
  if (clear[kForward]) return kForward;
  std::vector<Action> sides;
  if (clear[kLeft]) sides.push_back(kLeft);
  if (clear[kRight]) sides.push_back(kRight);
  if (sides.empty()) return kForward;
  return sides[rng.uniform_int(sides.size())];
}

ScriptedTronPolicy::ScriptedTronPolicy(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw GameError("scripted policy: epsilon must be in [0, 1]");
  }
}

std::string ScriptedTronPolicy::name() const {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "scripted:eps=%g", epsilon_);
  return buf;
}

Action ScriptedTronPolicy::act(const Observation& obs,
                               std::span<const Action> legal, Rng& rng) const {
  return scripted_tron_act(obs, legal, epsilon_, rng);
}

PolicyPtr make_policy(std::string_view spec) {
  if (spec == "random") return std::make_shared<RandomPolicy>();
  if (spec == "first") return std::make_shared<FirstLegalPolicy>();
  constexpr std::string_view kScripted = "scripted:eps=";
  if (spec.substr(0, kScripted.size()) == kScripted) {
    std::string value(spec.substr(kScripted.size()));
    size_t used = 0;
    double eps = 0.0;
    try {
      eps = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw GameError("bad epsilon in agent '" + std::string(spec) + "'");
    }
    return std::make_shared<ScriptedTronPolicy>(eps);
  }
  throw GameError("unknown agent '" + std::string(spec) + "'");
}

}  // namespace colosseum
