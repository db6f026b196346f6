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

#ifndef COLOSSEUM_TICTACTOE_H_
#define COLOSSEUM_TICTACTOE_H_

#include <optional>
#include <string>
#include <vector>

#include "colosseum/game.h"

namespace colosseum {

// N-player tic-tac-toe: three in a row in any of the eight directions wins,
// everybody else loses. Action code = row * cols + col.
struct TttBoard {
  int rows = 3;
  int cols = 3;
  int players = 2;
  // -1 empty, otherwise the owning player's index.
  std::vector<int> cells;
  PlayerId to_move = 0;
  int moves = 0;
  std::optional<PlayerId> winner;
  bool terminal = false;

  int at(int r, int c) const { return cells[r * cols + c]; }
};

// Symbols by player index: X O Y Z, then letters from A.
char ttt_symbol(PlayerId player);

TttBoard ttt_new(int players, int rows, int cols);
bool has_three_in_row(const TttBoard& board, PlayerId player);

struct TttStepOutcome {
  TttBoard board;
  std::vector<double> rewards;
  bool terminal = false;
};

TttStepOutcome ttt_step(const TttBoard& board, PlayerId player, int row,
                        int col);

class TicTacToeState final : public State {
 public:
  explicit TicTacToeState(TttBoard board, std::vector<double> returns = {});

  const TttBoard& board() const { return board_; }

  EnvKind kind() const override { return EnvKind::kTicTacToe; }
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
  TttBoard board_;
};

StatePtr new_tictactoe(const EnvConfig& config);

}  // namespace colosseum

#endif  // COLOSSEUM_TICTACTOE_H_
