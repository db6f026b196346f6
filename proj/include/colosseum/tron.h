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

#ifndef COLOSSEUM_TRON_H_
#define COLOSSEUM_TRON_H_

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "colosseum/game.h"

namespace colosseum {

// Light-cycle arena. The outer ring of the rows x cols grid is wall; players
// leave a trail behind every move and die on entering any non-open cell.
//
// Actions: 0 forward, 1 turn left, 2 turn right.

enum TronMove : Action { kForward = 0, kLeft = 1, kRight = 2 };

// Clockwise from north.
enum class Heading : int { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

enum class TronMode { kSimultaneous, kSequential };
enum class TronView { kFull, kWindow };

struct TronConfig {
  int rows = 15;
  int cols = 15;
  int players = 4;
  TronMode mode = TronMode::kSimultaneous;
  TronView view = TronView::kFull;
  int window = 3;
};

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

struct Spawn {
  Cell cell;
  Heading heading;
};

// Grid cell contents.
struct TronCell {
  enum Kind : uint8_t { kOpen, kWall, kTrail, kHead };
  Kind kind = kOpen;
  int8_t owner = -1;
  bool operator==(const TronCell&) const = default;
};

struct TronPlayer {
  Cell pos;
  Heading heading = Heading::kNorth;
  bool alive = true;
  std::optional<int> crash_step;
};

struct TronArena {
  TronConfig config;
  std::vector<TronCell> grid;
  std::vector<TronPlayer> players;
  int step_count = 0;
  PlayerId to_move = 0;  // sequential mode only
  bool terminal = false;

  const TronCell& at(int r, int c) const { return grid[r * config.cols + c]; }
  TronCell& at(int r, int c) { return grid[r * config.cols + c]; }
  int alive_count() const;
};

Heading turn(Heading h, Action move);
Cell advance(Cell c, Heading h);

// Evenly spaced by angle on the circle of radius min(rows, cols) / 3 around
// the arena centre, each facing the centre. Player 0 starts due north.
std::vector<Spawn> spawn_positions(int rows, int cols, int players);

TronArena tron_new(const TronConfig& config);

struct TronStepOutcome {
  TronArena arena;
  std::vector<double> rewards;
  bool terminal = false;
};

inline constexpr double kTronSurviveReward = 1.0;
inline constexpr double kTronCrashReward = -1.0;
inline constexpr double kTronWinBonus = 10.0;

// Movers are every alive player (simultaneous) or to_move (sequential).
TronStepOutcome tron_step(const TronArena& arena, const JointAction& actions);

// Serialization alphabet: '.' open, '#' wall, '0'-'9' heads, 'a'-'j' trails.
char tron_cell_char(const TronCell& cell);
std::vector<std::string> tron_rows(const TronArena& arena);

// Egocentric crop: (2w+1)^2 centred on the player, rotated so the heading
// points up, padded with wall outside the arena.
std::vector<std::string> tron_window(const TronArena& arena, PlayerId player,
                                     int w);
Observation tron_observe(const TronArena& arena, PlayerId player,
                         TronView view, int w);

// Whether the cells reached by forward/left/right are open, read from either
// observation flavour.
std::array<bool, 3> tron_clearance(const Observation& obs);

class TronState final : public State {
 public:
  explicit TronState(TronArena arena, std::vector<double> returns = {});

  const TronArena& arena() const { return arena_; }

  EnvKind kind() const override { return EnvKind::kTron; }
  int num_players() const override { return arena_.config.players; }
  bool is_terminal() const override { return arena_.terminal; }
  bool is_simultaneous() const override {
    return arena_.config.mode == TronMode::kSimultaneous;
  }
  std::vector<PlayerId> current_players() const override;
  std::vector<Action> legal_actions(PlayerId player) const override;
  StepResult step(const JointAction& actions) const override;
  Observation observe(PlayerId player) const override;
  RankRecord rankings() const override;
  std::vector<PlayerId> eliminated() const override;
  json to_json() const override;
  std::string action_to_string(Action action) const override;
  std::string render() const override;

 private:
  TronArena arena_;
};

TronConfig tron_config_from(const EnvConfig& config);
StatePtr new_tron(const EnvConfig& config);

// Replay file: one header line then one joint-action line per step.
//   tron-replay v1 rows=15 cols=15 players=4 seed=7 mode=simultaneous
//   0:F 1:L 2:R 3:F
struct TronReplay {
  TronConfig config;
  uint64_t seed = 0;
  std::vector<JointAction> steps;
};

void write_tron_replay(std::ostream& out, const TronReplay& replay);
// Throws GameError naming the 1-based line of the first malformed line.
TronReplay read_tron_replay(std::istream& in);

}  // namespace colosseum

#endif  // COLOSSEUM_TRON_H_
