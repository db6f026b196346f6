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

#include "ttt_oracle.h"

#include <map>
#include <sstream>

namespace colosseum::oracle {

bool scan_three(const std::vector<int>& cells, int rows, int cols,
                int player) {
  static const int kDirs[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                  {0, 1},   {1, -1},  {1, 0},  {1, 1}};
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      for (const auto& d : kDirs) {
        int k = 0;
        for (; k < 3; ++k) {
          int rr = r + k * d[0], cc = c + k * d[1];
          if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) break;
          if (cells[rr * cols + cc] != player) break;
        }
        if (k == 3) return true;
      }
    }
  }
  return false;
}

std::string check_ttt_transition(const TttBoard& before, PlayerId player,
                                 int action, const TttBoard& after,
                                 const std::vector<double>& rewards,
                                 bool terminal) {
  std::ostringstream why;
  const int n = before.players;
  const int size = before.rows * before.cols;
  if (before.terminal) return "move on a finished board";
  if (player != before.to_move) return "wrong player accepted";
  if (action < 0 || action >= size) return "out-of-range cell accepted";
  if (before.cells[action] != -1) return "occupied cell accepted";

  std::vector<int> cells = before.cells;
  cells[action] = player;
  if (after.cells != cells) return "board differs from a single mark";
  const bool won = scan_three(cells, before.rows, before.cols, player);
  bool full = true;
  for (int v : cells) full = full && v != -1;
  const bool end = won || full;
  if (terminal != end || after.terminal != end) {
    why << "terminal flag " << terminal << " expected " << end;
    return why.str();
  }
  if (static_cast<int>(rewards.size()) != n) return "reward vector size";
  for (int p = 0; p < n; ++p) {
    double want = won ? (p == player ? 1.0 : -1.0) : 0.0;
    if (rewards[p] != want) {
      why << "reward[" << p << "] = " << rewards[p] << " expected " << want;
      return why.str();
    }
  }
  if (won && (!after.winner || *after.winner != player)) return "winner unset";
  if (!won && after.winner) return "spurious winner";
  if (!end && after.to_move != (player + 1) % n) return "turn did not pass";
  return {};
}

namespace {

struct LeafCounter {
  int players, rows, cols;
  std::vector<int> cells;
  TttLeafCount count;

  void walk(int mover, int placed) {
    for (int i = 0; i < rows * cols; ++i) {
      if (cells[i] != -1) continue;
      cells[i] = mover;
      if (scan_three(cells, rows, cols, mover)) {
        ++count.wins;
      } else if (placed + 1 == rows * cols) {
        ++count.draws;
      } else {
        walk((mover + 1) % players, placed + 1);
      }
      cells[i] = -1;
    }
  }
};

// Outcome classes for king-maker analysis.
struct Analyzer {
  int players, rows, cols;
  std::map<std::pair<std::vector<int>, int>, bool> can_win_memo;
  std::map<std::tuple<std::vector<int>, int, int>, bool> force_memo;

  int winner_of(const std::vector<int>& cells) const {
    for (int p = 0; p < players; ++p) {
      if (scan_three(cells, rows, cols, p)) return p;
    }
    return -1;
  }
  static bool full(const std::vector<int>& cells) {
    for (int v : cells) {
      if (v == -1) return false;
    }
    return true;
  }

  // Some continuation ends with `who` winning.
  bool can_win(std::vector<int>& cells, int mover, int who) {
    auto key = std::make_pair(cells, mover * 16 + who);
    if (auto it = can_win_memo.find(key); it != can_win_memo.end()) {
      return it->second;
    }
    bool result = false;
    for (size_t i = 0; i < cells.size() && !result; ++i) {
      if (cells[i] != -1) continue;
      cells[i] = mover;
      int w = winner_of(cells);
      if (w >= 0) {
        result = w == who;
      } else if (!full(cells)) {
        result = can_win(cells, (mover + 1) % players, who);
      }
      cells[i] = -1;
    }
    can_win_memo[key] = result;
    return result;
  }

  // `who` wins whatever the others do.
  bool forces(std::vector<int>& cells, int mover, int who) {
    auto key = std::make_tuple(cells, mover, who);
    if (auto it = force_memo.find(key); it != force_memo.end()) {
      return it->second;
    }
    bool any = false, all = true;
    for (size_t i = 0; i < cells.size(); ++i) {
      if (cells[i] != -1) continue;
      cells[i] = mover;
      bool ok;
      int w = winner_of(cells);
      if (w >= 0) {
        ok = w == who;
      } else if (full(cells)) {
        ok = false;
      } else {
        ok = forces(cells, (mover + 1) % players, who);
      }
      cells[i] = -1;
      any = any || ok;
      all = all && ok;
    }
    bool result = mover == who ? any : all;
    force_memo[key] = result;
    return result;
  }
};

}  // namespace

TttLeafCount count_ttt_leaves(int players, int rows, int cols) {
  LeafCounter lc{players, rows, cols,
                 std::vector<int>(rows * cols, -1), {}};
  lc.walk(0, 0);
  return lc.count;
}

KingMaker find_king_maker(int players, int rows, int cols) {
  Analyzer an{players, rows, cols, {}, {}};
  KingMaker out;
  // Breadth-first over reachable non-terminal positions.
  std::vector<std::pair<std::vector<int>, int>> frontier = {
      {std::vector<int>(rows * cols, -1), 0}};
  std::map<std::vector<int>, bool> seen;
  while (!frontier.empty()) {
    std::vector<std::pair<std::vector<int>, int>> next;
    for (auto& [cells, mover] : frontier) {
      if (!an.can_win(cells, mover, mover)) {
        std::map<int, int> decider;  // forced winner -> move
        for (int i = 0; i < rows * cols; ++i) {
          if (cells[i] != -1) continue;
          cells[i] = mover;
          int nextp = (mover + 1) % players;
          if (an.winner_of(cells) < 0 && !Analyzer::full(cells)) {
            for (int q = 0; q < players; ++q) {
              if (q != mover && an.forces(cells, nextp, q)) {
                decider.emplace(q, i);
              }
            }
          }
          cells[i] = -1;
        }
        if (decider.size() >= 2) {
          auto a = decider.begin(), b = std::next(decider.begin());
          out.cells = cells;
          out.to_move = mover;
          out.winner_a = a->first;
          out.move_a = a->second;
          out.winner_b = b->first;
          out.move_b = b->second;
          return out;
        }
      }
      for (int i = 0; i < rows * cols; ++i) {
        if (cells[i] != -1) continue;
        cells[i] = mover;
        if (an.winner_of(cells) < 0 && !Analyzer::full(cells) &&
            !seen[cells]) {
          seen[cells] = true;
          next.emplace_back(cells, (mover + 1) % players);
        }
        cells[i] = -1;
      }
    }
    frontier.swap(next);
  }
  return out;
}

}  // namespace colosseum::oracle
