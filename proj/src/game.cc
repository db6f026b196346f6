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

#include "colosseum/game.h"

#include <algorithm>

#include "colosseum/blokus.h"
#include "colosseum/kuhn.h"
#include "colosseum/matrix_game.h"
#include "colosseum/rng.h"
#include "colosseum/tictactoe.h"
#include "colosseum/tron.h"

namespace colosseum {

namespace {

constexpr std::pair<EnvKind, std::string_view> kEnvNames[] = {
    {EnvKind::kTicTacToe, "tictactoe"}, {EnvKind::kTron, "tron"},
    {EnvKind::kBlokus, "blokus"},       {EnvKind::kMatrix, "matrix"},
    {EnvKind::kRps, "rps"},             {EnvKind::kKuhn, "kuhn"},
};

}  // namespace

std::string_view env_name(EnvKind kind) {
  for (const auto& [k, name] : kEnvNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

EnvKind parse_env_kind(std::string_view name) {
  for (const auto& [k, n] : kEnvNames) {
    if (n == name) return k;
  }
  throw GameError("unknown environment '" + std::string(name) + "'");
}

json to_json(const EnvConfig& config) {
  return {{"env", env_name(config.env)},
          {"players", config.players},
          {"params", config.params.is_null() ? json::object() : config.params},
          {"seed", config.seed}};
}

EnvConfig env_config_from_json(const json& j) {
  EnvConfig c;
  try {
    c.env = parse_env_kind(j.at("env").get<std::string>());
    c.players = j.at("players").get<int>();
    c.params = j.value("params", json::object());
    c.seed = j.value("seed", uint64_t{0});
  } catch (const json::exception& e) {
    throw GameError(std::string("bad environment config: ") + e.what());
  }
  if (!c.params.is_object()) throw GameError("bad environment config: params");
  return c;
}

json to_json(const RankRecord& record) {
  return {{"ranks", record.ranks}, {"total_reward", record.total_reward}};
}

RankRecord rank_record_from_json(const json& j) {
  return {j.at("ranks").get<std::vector<int>>(),
          j.at("total_reward").get<std::vector<double>>()};
}

std::string State::action_to_string(Action action) const {
  return std::to_string(action);
}

void State::check_player(PlayerId player) const {
  if (player < 0 || player >= num_players()) {
    throw GameError("unknown player " + std::to_string(player));
  }
}

void State::validate_joint_action(const JointAction& actions) const {
  if (is_terminal()) throw GameError("step on terminal state");
  const auto expected = current_players();
  for (PlayerId p : expected) {
    if (!actions.count(p)) {
      throw IllegalActionError(p, "missing action for player " + std::to_string(p));
    }
  }
  for (const auto& [p, a] : actions) {
    if (!std::count(expected.begin(), expected.end(), p)) {
      throw IllegalActionError(p, "player " + std::to_string(p) + " cannot act now");
    }
    const auto legal = legal_actions(p);
    if (!std::count(legal.begin(), legal.end(), a)) {
      throw IllegalActionError(p, "illegal action " + std::to_string(a) +
                                      " for player " + std::to_string(p));
    }
  }
}

StatePtr new_game(const EnvConfig& requested) {
  // Brace-initialised configs can carry null params; treat them as empty.
  EnvConfig config = requested;
  if (config.params.is_null()) config.params = json::object();
  if (!config.params.is_object()) throw GameError("bad environment config: params");
  switch (config.env) {
    case EnvKind::kTicTacToe:
      return new_tictactoe(config);
    case EnvKind::kTron:
      return new_tron(config);
    case EnvKind::kBlokus:
      return new_blokus(config);
    case EnvKind::kMatrix:
      return new_matrix_game(config);
    case EnvKind::kRps:
      return new_rps(config);
    case EnvKind::kKuhn:
      return new_kuhn(config);
  }
  throw GameError("unknown environment");
}

uint64_t state_hash(const State& state) {
  return hash_label(state.to_json().dump());
}

}  // namespace colosseum
