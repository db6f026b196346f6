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

#ifndef COLOSSEUM_GAME_H_
#define COLOSSEUM_GAME_H_

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace colosseum {

using json = nlohmann::json;

using PlayerId = int;
// Environment-specific action code. Each environment documents its encoding
// and provides action_to_string for display.
using Action = int;
using JointAction = std::map<PlayerId, Action>;
using Observation = json;

enum class EnvKind { kTicTacToe, kTron, kBlokus, kMatrix, kRps, kKuhn };

std::string_view env_name(EnvKind kind);
EnvKind parse_env_kind(std::string_view name);

// Raised for invalid configurations and misuse of a state (terminal queries,
// unknown players).
class GameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by step() when a joint action is missing a player or contains an
// illegal move. The server uses player() to decide whom to penalize.
class IllegalActionError : public GameError {
 public:
  IllegalActionError(PlayerId player, const std::string& what)
      : GameError(what), player_(player) {}
  PlayerId player() const { return player_; }

 private:
  PlayerId player_;
};

struct EnvConfig {
  EnvKind env = EnvKind::kTicTacToe;
  int players = 2;
  // Environment-specific parameters (board size, observation mode, payoffs).
  json params = json::object();
  uint64_t seed = 0;
};

json to_json(const EnvConfig& config);
EnvConfig env_config_from_json(const json& j);

// Final placement of every player. Ranks are 1-based; tied players share the
// worst rank their block spans (see apply_tie_rounding).
struct RankRecord {
  std::vector<int> ranks;
  std::vector<double> total_reward;

  bool operator==(const RankRecord&) const = default;
};

json to_json(const RankRecord& record);
RankRecord rank_record_from_json(const json& j);

class State;
using StatePtr = std::shared_ptr<const State>;

struct StepResult {
  StatePtr next_state;
  // One entry per player; zero for players that did not act.
  std::vector<double> rewards;
  bool terminal = false;
  std::vector<PlayerId> eliminated;
};

// Immutable snapshot of one match. step() never mutates; it returns a fresh
// state, so any StatePtr can be shared across threads.
class State {
 public:
  virtual ~State() = default;

  virtual EnvKind kind() const = 0;
  virtual int num_players() const = 0;
  virtual bool is_terminal() const = 0;
  virtual bool is_simultaneous() const = 0;

  // Players expected in the next joint action. Throws on terminal states.
  virtual std::vector<PlayerId> current_players() const = 0;
  virtual std::vector<Action> legal_actions(PlayerId player) const = 0;
  virtual StepResult step(const JointAction& actions) const = 0;
  virtual Observation observe(PlayerId player) const = 0;
  // Throws unless terminal.
  virtual RankRecord rankings() const = 0;
  virtual std::vector<PlayerId> eliminated() const = 0;

  // Schema-tagged encoding of the full state.
  virtual json to_json() const = 0;
  virtual std::string action_to_string(Action action) const;
  virtual std::string render() const = 0;

  const std::vector<double>& returns() const { return returns_; }

 protected:
  // Checks keys == current_players() and each action against legal_actions.
  void validate_joint_action(const JointAction& actions) const;
  void check_player(PlayerId player) const;

  std::vector<double> returns_;
};

StatePtr new_game(const EnvConfig& config);

// Stable content hash of a state (FNV over the canonical encoding).
uint64_t state_hash(const State& state);

inline constexpr int kStateSchemaVersion = 1;

}  // namespace colosseum

#endif  // COLOSSEUM_GAME_H_
