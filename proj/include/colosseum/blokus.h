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

#ifndef COLOSSEUM_BLOKUS_H_
#define COLOSSEUM_BLOKUS_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "colosseum/game.h"

namespace colosseum {

inline constexpr int kBlokusSize = 20;
inline constexpr int kNumPieces = 21;
inline constexpr int kMaxOrientations = 8;
inline constexpr int kBlokusPieceCells = 89;

// Action code = ((piece * 8 + orientation) * 20 + row) * 20 + col, where
// (row, col) is the top-left of the orientation's bounding box.
inline constexpr Action kBlokusPass =
    kNumPieces * kMaxOrientations * kBlokusSize * kBlokusSize;

struct Orientation {
  // Sorted (row, col) offsets with min row and min col equal to 0.
  std::vector<std::pair<int, int>> cells;
  int height = 0;
  int width = 0;
  // Bit c of rows[r] set iff (r, c) is covered.
  std::array<uint32_t, 5> rows{};
};

struct Piece {
  std::string name;
  int size = 0;
  std::vector<std::pair<int, int>> base;
  std::vector<Orientation> orientations;
};

// The 21 free polyominoes of sizes 1 to 5, orientations deduplicated across
// all rotations and reflections.
const std::vector<Piece>& blokus_pieces();

// All eight rotations/reflections of a cell set, normalized and deduplicated.
std::vector<Orientation> orientations_of(
    const std::vector<std::pair<int, int>>& cells);

struct Placement {
  int piece = 0;
  int orientation = 0;
  int row = 0;
  int col = 0;
  bool operator==(const Placement&) const = default;
  auto operator<=>(const Placement&) const = default;
};

Action encode_placement(const Placement& placement);
Placement decode_placement(Action action);
std::vector<std::pair<int, int>> placement_cells(const Placement& placement);

using BitRows = std::array<uint32_t, kBlokusSize>;

struct BlokusBoard {
  int players = 4;
  // -1 empty or owner index, row-major.
  std::array<int8_t, kBlokusSize * kBlokusSize> cells;
  std::array<BitRows, 4> owned{};
  BitRows occupied{};
  // Bit i set iff piece i is still in hand.
  std::array<uint32_t, 4> remaining{};
  std::array<int, 4> control{};
  std::array<bool, 4> passed{};
  PlayerId to_move = 0;
  bool terminal = false;

  int at(int r, int c) const { return cells[r * kBlokusSize + c]; }
  bool has_pieces_on_board(PlayerId p) const;
};

// Start corners for players 0..3: (0,0), (0,19), (19,19), (19,0).
std::pair<int, int> blokus_start_corner(PlayerId player);

BlokusBoard blokus_new(int players);

// Legality predicate for a single placement by `player`.
bool is_legal_placement(const BlokusBoard& board, PlayerId player,
                        const Placement& placement);

// Sorted, duplicate-free list of legal placements; empty means the player
// must pass.
std::vector<Placement> enumerate_placements(const BlokusBoard& board,
                                            PlayerId player);

struct BlokusStepOutcome {
  BlokusBoard board;
  std::vector<double> rewards;
  bool terminal = false;
};

// A passing player has no placement now and, since the board only fills up,
// never will again; it is skipped for the rest of the game.
BlokusStepOutcome blokus_step(const BlokusBoard& board, PlayerId player,
                              Action action);

class BlokusState final : public State {
 public:
  explicit BlokusState(BlokusBoard board, std::vector<double> returns = {});

  const BlokusBoard& board() const { return board_; }

  EnvKind kind() const override { return EnvKind::kBlokus; }
  int num_players() const override { return board_.players; }
  bool is_terminal() const override { return board_.terminal; }
  bool is_simultaneous() const override { return false; }
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
  BlokusBoard board_;
};

StatePtr new_blokus(const EnvConfig& config);

}  // namespace colosseum

#endif  // COLOSSEUM_BLOKUS_H_
