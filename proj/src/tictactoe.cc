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

#include "colosseum/tictactoe.h"

#include <algorithm>

#include "colosseum/ranking.h"

namespace colosseum {

namespace {

// Four line directions; the other four are their negations.
constexpr int kDirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};

bool in_bounds(const TttBoard& b, int r, int c) {
  return r >= 0 && r < b.rows && c >= 0 && c < b.cols;
}

int run_length(const TttBoard& b, int r, int c, int dr, int dc, int p) {
  int n = 0;
  for (r += dr, c += dc; in_bounds(b, r, c) && b.at(r, c) == p;
       r += dr, c += dc) {
    ++n;
  }
  return n;
}

bool completes_line(const TttBoard& b, int r, int c, int p) {
  for (const auto& d : kDirs) {
    if (1 + run_length(b, r, c, d[0], d[1], p) +
            run_length(b, r, c, -d[0], -d[1], p) >=
        3) {
      return true;
    }
  }
  return false;
}

}  // namespace

char ttt_symbol(PlayerId player) {
  static constexpr char kFirst[] = {'X', 'O', 'Y', 'Z'};
  if (player < 4) return kFirst[player];
  return static_cast<char>('A' + (player - 4));
}

TttBoard ttt_new(int players, int rows, int cols) {
  if (players < 2 || players > 26) {
    throw GameError("tictactoe: players must be in [2, 26]");
  }
  if (rows < 3 || cols < 3) throw GameError("tictactoe: board must be >= 3x3");
  TttBoard b;
  b.rows = rows;
  b.cols = cols;
  b.players = players;
  b.cells.assign(static_cast<size_t>(rows) * cols, -1);
  return b;
}

bool has_three_in_row(const TttBoard& board, PlayerId player) {
  for (int r = 0; r < board.rows; ++r) {
    for (int c = 0; c < board.cols; ++c) {
      if (board.at(r, c) != player) continue;
      for (const auto& d : kDirs) {
        if (run_length(board, r, c, d[0], d[1], player) >= 2) return true;
      }
    }
  }
  return false;
}

TttStepOutcome ttt_step(const TttBoard& board, PlayerId player, int row,
                        int col) {
  if (board.terminal) throw GameError("tictactoe: game is over");
  if (player != board.to_move) {
    throw IllegalActionError(player, "tictactoe: not this player's turn");
  }
  if (!in_bounds(board, row, col)) {
    throw IllegalActionError(player, "tictactoe: cell out of bounds");
  }
  if (board.at(row, col) != -1) {
    throw IllegalActionError(player, "tictactoe: cell occupied");
  }
  TttStepOutcome out{board, std::vector<double>(board.players, 0.0), false};
  TttBoard& b = out.board;
  b.cells[row * b.cols + col] = player;
  ++b.moves;
  if (completes_line(b, row, col, player)) {
    b.winner = player;
    b.terminal = true;
    std::fill(out.rewards.begin(), out.rewards.end(), -1.0);
    out.rewards[player] = 1.0;
  } else if (b.moves == b.rows * b.cols) {
    b.terminal = true;
  } else {
    b.to_move = (player + 1) % b.players;
  }
  out.terminal = b.terminal;
  return out;
}

TicTacToeState::TicTacToeState(TttBoard board, std::vector<double> returns)
    : board_(std::move(board)) {
  returns_ = returns.empty() ? std::vector<double>(board_.players, 0.0)
                             : std::move(returns);
}

std::vector<PlayerId> TicTacToeState::current_players() const {
  if (board_.terminal) throw GameError("current_players on terminal state");
  return {board_.to_move};
}

std::vector<Action> TicTacToeState::legal_actions(PlayerId player) const {
  if (board_.terminal) throw GameError("legal_actions on terminal state");
  if (player != board_.to_move) {
    throw GameError("tictactoe: player is not to move");
  }
  std::vector<Action> actions;
  for (int i = 0; i < static_cast<int>(board_.cells.size()); ++i) {
    if (board_.cells[i] == -1) actions.push_back(i);
  }
  return actions;
}

StepResult TicTacToeState::step(const JointAction& actions) const {
  validate_joint_action(actions);
  const auto& [player, action] = *actions.begin();
  auto out = ttt_step(board_, player, action / board_.cols,
                      action % board_.cols);
  std::vector<double> returns = returns_;
  for (int p = 0; p < board_.players; ++p) returns[p] += out.rewards[p];
  auto next =
      std::make_shared<TicTacToeState>(std::move(out.board), std::move(returns));
  StepResult result{next, std::move(out.rewards), out.terminal,
                    next->eliminated()};
  return result;
}

Observation TicTacToeState::observe(PlayerId player) const {
  check_player(player);
  json rows = json::array();
  for (int r = 0; r < board_.rows; ++r) {
    std::string line;
    for (int c = 0; c < board_.cols; ++c) {
      int v = board_.at(r, c);
      line.push_back(v < 0 ? '.' : ttt_symbol(v));
    }
    rows.push_back(line);
  }
  return {{"board", rows},
          {"symbol", std::string(1, ttt_symbol(player))},
          {"to_move", board_.to_move},
          {"terminal", board_.terminal}};
}

RankRecord TicTacToeState::rankings() const {
  if (!board_.terminal) throw GameError("rankings on non-terminal state");
  TieBlocks blocks;
  if (board_.winner) {
    blocks.push_back({*board_.winner});
    std::vector<PlayerId> losers;
    for (int p = 0; p < board_.players; ++p) {
      if (p != *board_.winner) losers.push_back(p);
    }
    blocks.push_back(losers);
  } else {
    std::vector<PlayerId> all(board_.players);
    for (int p = 0; p < board_.players; ++p) all[p] = p;
    blocks.push_back(all);
  }
  return {apply_tie_rounding(blocks, board_.players), returns_};
}

std::vector<PlayerId> TicTacToeState::eliminated() const {
  if (!board_.terminal) return {};
  std::vector<PlayerId> all(board_.players);
  for (int p = 0; p < board_.players; ++p) all[p] = p;
  return all;
}

json TicTacToeState::to_json() const {
  json j = observe(board_.to_move);
  j.erase("symbol");
  return {{"schema", "colosseum.state"},
          {"v", kStateSchemaVersion},
          {"env", "tictactoe"},
          {"rows", board_.rows},
          {"cols", board_.cols},
          {"players", board_.players},
          {"board", j["board"]},
          {"to_move", board_.to_move},
          {"moves", board_.moves},
          {"winner", board_.winner ? json(*board_.winner) : json(nullptr)},
          {"terminal", board_.terminal},
          {"returns", returns_}};
}

std::string TicTacToeState::action_to_string(Action action) const {
  return "(" + std::to_string(action / board_.cols) + "," +
         std::to_string(action % board_.cols) + ")";
}

std::string TicTacToeState::render() const {
  std::string out;
  for (const auto& row : observe(0)["board"]) {
    out += row.get<std::string>();
    out += '\n';
  }
  return out;
}

StatePtr new_tictactoe(const EnvConfig& config) {
  int rows_default = config.players >= 4 ? 6 : config.players == 3 ? 5 : 3;
  int rows = config.params.value("rows", rows_default);
  int cols = config.params.value("cols", rows);
  return std::make_shared<TicTacToeState>(ttt_new(config.players, rows, cols));
}

}  // namespace colosseum
