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

#include <gtest/gtest.h>

#include <functional>

#include "colosseum/rng.h"
#include "rollouts.h"
#include "ttt_oracle.h"

namespace colosseum {
namespace {

StatePtr game(int players, int rows, int cols) {
  return new_game({EnvKind::kTicTacToe, players,
                   {{"rows", rows}, {"cols", cols}}, 7});
}

StatePtr play(StatePtr s, std::initializer_list<int> cells) {
  for (int c : cells) s = s->step({{s->current_players()[0], c}}).next_state;
  return s;
}

TEST(TicTacToe, InitialBoardIsEmpty) {
  auto s = game(3, 5, 5);
  const auto& b = dynamic_cast<const TicTacToeState&>(*s).board();
  EXPECT_EQ(b.cells, std::vector<int>(25, -1));
  EXPECT_EQ(s->current_players(), std::vector<PlayerId>{0});
  EXPECT_EQ(s->legal_actions(0).size(), 25u);
  EXPECT_FALSE(s->is_terminal());
}

TEST(TicTacToe, Symbols) {
  EXPECT_EQ(ttt_symbol(0), 'X');
  EXPECT_EQ(ttt_symbol(1), 'O');
  EXPECT_EQ(ttt_symbol(2), 'Y');
  EXPECT_EQ(ttt_symbol(3), 'Z');
}

TEST(TicTacToe, DiagonalRun) {
  TttBoard b = ttt_new(2, 3, 3);
  EXPECT_FALSE(has_three_in_row(b, 0));
  b.cells[0] = b.cells[4] = b.cells[8] = 0;
  EXPECT_TRUE(has_three_in_row(b, 0));
  EXPECT_FALSE(has_three_in_row(b, 1));
}

TEST(TicTacToe, RunDetectionMatchesEightDirectionScan) {
  Rng rng(99);
  for (int trial = 0; trial < 20000; ++trial) {
    const int rows = 3 + static_cast<int>(rng.uniform_int(4));
    const int cols = 3 + static_cast<int>(rng.uniform_int(4));
    const int players = 2 + static_cast<int>(rng.uniform_int(3));
    TttBoard b = ttt_new(players, rows, cols);
    for (int& c : b.cells) {
      c = static_cast<int>(rng.uniform_int(players + 1)) - 1;
    }
    for (int p = 0; p < players; ++p) {
      ASSERT_EQ(has_three_in_row(b, p),
                oracle::scan_three(b.cells, rows, cols, p));
    }
  }
}

TEST(TicTacToe, RegularMoveRewardsZero) {
  auto s = game(3, 5, 5);
  auto r = s->step({{0, 12}});
  EXPECT_EQ(r.rewards, (std::vector<double>{0, 0, 0}));
  EXPECT_FALSE(r.terminal);
  EXPECT_EQ(r.next_state->current_players(), std::vector<PlayerId>{1});
}

TEST(TicTacToe, WinningMoveThreePlayers) {
  // X takes the top row of a 5x5 board; O and Y play elsewhere.
  auto s = play(game(3, 5, 5), {0, 10, 20, 1, 11, 22});
  auto r = s->step({{0, 2}});
  EXPECT_TRUE(r.terminal);
  EXPECT_EQ(r.rewards, (std::vector<double>{1, -1, -1}));
  EXPECT_EQ(r.next_state->rankings().ranks, (std::vector<int>{1, 3, 3}));
}

TEST(TicTacToe, SecondPlayerWinRanks) {
  // O completes a column on 4x4 with three players.
  auto s = play(game(3, 4, 4), {0, 1, 2, 3, 5, 6, 12});
  auto r = s->step({{1, 9}});
  ASSERT_TRUE(r.terminal);
  EXPECT_EQ(r.next_state->rankings().ranks, (std::vector<int>{3, 1, 3}));
  EXPECT_EQ(r.next_state->returns(), (std::vector<double>{-1, 1, -1}));
}

TEST(TicTacToe, FullBoardWithoutLineIsDraw) {
  // X O X / X O O / O X X, filled in an order that never completes a line.
  auto s = play(game(2, 3, 3), {0, 1, 2, 4, 3, 5, 7, 6});
  auto r = s->step({{0, 8}});
  EXPECT_TRUE(r.terminal);
  EXPECT_EQ(r.rewards, (std::vector<double>{0, 0}));
  EXPECT_EQ(r.next_state->rankings().ranks, (std::vector<int>{2, 2}));
}

TEST(TicTacToe, IllegalMoves) {
  auto s = play(game(2, 3, 3), {4});
  EXPECT_THROW(s->step({{1, 4}}), IllegalActionError);
  EXPECT_THROW(s->step({{0, 0}}), GameError);
  EXPECT_THROW(s->step({{1, 9}}), IllegalActionError);
  EXPECT_THROW(s->step({}), GameError);
}

TEST(TicTacToe, ObservationIsWholeBoard) {
  auto s = play(game(3, 4, 4), {5, 6});
  auto o0 = s->observe(0), o2 = s->observe(2);
  EXPECT_EQ(o0["board"], o2["board"]);
  EXPECT_EQ(o0["board"].size(), 4u);
}

// Exhaustive walk through the library's own transitions.
oracle::TttLeafCount walk(const StatePtr& s) {
  oracle::TttLeafCount n;
  const PlayerId p = s->current_players()[0];
  for (Action a : s->legal_actions(p)) {
    auto r = s->step({{p, a}});
    if (r.terminal) {
      bool won = false;
      for (double x : r.rewards) won = won || x != 0.0;
      (won ? n.wins : n.draws)++;
    } else {
      auto sub = walk(r.next_state);
      n.wins += sub.wins;
      n.draws += sub.draws;
    }
  }
  return n;
}

TEST(TicTacToe, GameTreeLeavesMatchOracle) {
  auto lib = walk(game(2, 3, 3));
  auto ref = oracle::count_ttt_leaves(2, 3, 3);
  EXPECT_EQ(lib.wins, ref.wins);
  EXPECT_EQ(lib.draws, ref.draws);
  // Well-known totals for classic tic-tac-toe.
  EXPECT_EQ(lib.total(), 255168);
  EXPECT_EQ(lib.draws, 46080);
}

TEST(TicTacToe, ThreePlayerGameTreeLeavesMatchOracle) {
  auto lib = walk(game(3, 3, 3));
  auto ref = oracle::count_ttt_leaves(3, 3, 3);
  EXPECT_EQ(lib.wins, ref.wins);
  EXPECT_EQ(lib.draws, ref.draws);
}

// Can `target` force a win from `s`, with everyone else cooperating
// against them? Uses only library transitions.
bool library_forces(const StatePtr& s, PlayerId target) {
  const PlayerId p = s->current_players()[0];
  bool any = false, all = true;
  for (Action a : s->legal_actions(p)) {
    auto r = s->step({{p, a}});
    bool ok = r.terminal ? r.rewards[target] > 0
                         : library_forces(r.next_state, target);
    any = any || ok;
    all = all && ok;
  }
  return p == target ? any : all;
}

// None exists for three players on 3x3; 3x4 is the smallest board with one.
TEST(TicTacToe, KingMakerPositionExists) {
  auto km = oracle::find_king_maker(3, 3, 4);
  ASSERT_GE(km.to_move, 0) << "no king-maker position found";
  TttBoard b = ttt_new(3, 3, 4);
  b.cells = km.cells;
  b.to_move = km.to_move;
  for (int c : km.cells) b.moves += c != -1;
  auto s = std::make_shared<TicTacToeState>(b);
  // The mover cannot force a win, but each of its two moves hands a forced
  // win to a different opponent.
  EXPECT_FALSE(library_forces(s, km.to_move));
  auto a = s->step({{km.to_move, km.move_a}});
  auto c = s->step({{km.to_move, km.move_b}});
  ASSERT_FALSE(a.terminal);
  ASSERT_FALSE(c.terminal);
  EXPECT_NE(km.winner_a, km.winner_b);
  EXPECT_TRUE(library_forces(a.next_state, km.winner_a));
  EXPECT_TRUE(library_forces(c.next_state, km.winner_b));
}

TEST(TicTacToe, RolloutsAgreeWithOracle) {
  auto st = oracle::check_rollouts(EnvKind::kTicTacToe, 500, 1);
  EXPECT_EQ(st.discrepancies, 0) << st.first;
}

}  // namespace
}  // namespace colosseum
