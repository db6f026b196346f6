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

#include "blokus_oracle.h"

#include <algorithm>
#include <sstream>

namespace colosseum::oracle {

namespace {

constexpr int kN = 20;

CellSet from_picture(const std::vector<std::string>& rows) {
  CellSet out;
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    for (int c = 0; c < static_cast<int>(rows[r].size()); ++c) {
      if (rows[r][c] == 'X') out.emplace_back(r, c);
    }
  }
  return out;
}

CellSet normalized(CellSet cells) {
  int mr = 1 << 20, mc = 1 << 20;
  for (auto [r, c] : cells) {
    mr = std::min(mr, r);
    mc = std::min(mc, c);
  }
  for (auto& [r, c] : cells) {
    r -= mr;
    c -= mc;
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

std::vector<CellSet> all_orientations(const CellSet& shape) {
  std::set<CellSet> seen;
  for (int mirror = 0; mirror < 2; ++mirror) {
    for (int quarter = 0; quarter < 4; ++quarter) {
      CellSet t;
      for (auto [r, c] : shape) {
        int x = r, y = mirror ? -c : c;
        for (int q = 0; q < quarter; ++q) {
          int nx = y, ny = -x;
          x = nx;
          y = ny;
        }
        t.emplace_back(x, y);
      }
      seen.insert(normalized(t));
    }
  }
  return {seen.begin(), seen.end()};
}

int owner(const std::vector<int>& grid, int r, int c) {
  if (r < 0 || r >= kN || c < 0 || c >= kN) return -2;
  return grid[r * kN + c];
}

std::vector<int> grid_of(const BlokusBoard& b) {
  std::vector<int> g(kN * kN);
  for (int i = 0; i < kN * kN; ++i) g[i] = b.cells[i];
  return g;
}

std::pair<int, int> corner_of(int player) {
  static const std::pair<int, int> kCorners[4] = {
      {0, 0}, {0, kN - 1}, {kN - 1, kN - 1}, {kN - 1, 0}};
  return kCorners[player];
}

// Library piece index for a reference name.
int library_index(const std::string& name) {
  const auto& pieces = blokus_pieces();
  for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
    if (pieces[i].name == name) return i;
  }
  return -1;
}

}  // namespace

bool legal_with(const std::vector<int>& grid, int player,
                std::pair<int, int> corner, bool has_own,
                const CellSet& cells);

namespace {

// Scans every anchor of every orientation of every piece in hand.
template <typename Fn>
void for_each_candidate(const BlokusBoard& board, int player, Fn&& fn) {
  const auto grid = grid_of(board);
  const auto corner = corner_of(player);
  bool has_own = false;
  for (int v : grid) has_own = has_own || v == player;
  CellSet cells;
  for (const auto& piece : reference_pieces()) {
    int idx = library_index(piece.name);
    if (idx < 0 || !(board.remaining[player] >> idx & 1u)) continue;
    for (const auto& o : piece.orientations) {
      for (int r = 0; r < kN; ++r) {
        for (int c = 0; c < kN; ++c) {
          cells.clear();
          for (auto [dr, dc] : o) cells.emplace_back(r + dr, c + dc);
          if (legal_with(grid, player, corner, has_own, cells)) {
            if (!fn(piece.name, cells)) return;
          }
        }
      }
    }
  }
}

}  // namespace

const std::vector<RefPiece>& reference_pieces() {
  static const std::vector<RefPiece> pieces = [] {
    const std::vector<std::pair<std::string, std::vector<std::string>>> art = {
        {"I1", {"X"}},
        {"I2", {"XX"}},
        {"I3", {"XXX"}},
        {"V3", {"XX", "X."}},
        {"I4", {"XXXX"}},
        {"L4", {"XXX", "X.."}},
        {"O4", {"XX", "XX"}},
        {"T4", {"XXX", ".X."}},
        {"Z4", {"XX.", ".XX"}},
        {"F", {".XX", "XX.", ".X."}},
        {"I", {"XXXXX"}},
        {"L", {"XXXX", "X..."}},
        {"N", {"XX..", ".XXX"}},
        {"P", {"XX", "XX", "X."}},
        {"T", {"XXX", ".X.", ".X."}},
        {"U", {"X.X", "XXX"}},
        {"V", {"X..", "X..", "XXX"}},
        {"W", {"X..", "XX.", ".XX"}},
        {"X", {".X.", "XXX", ".X."}},
        {"Y", {"XXXX", ".X.."}},
        {"Z", {"XX.", ".X.", ".XX"}},
    };
    std::vector<RefPiece> out;
    for (const auto& [name, rows] : art) {
      RefPiece p{name, from_picture(rows), {}};
      p.orientations = all_orientations(p.shape);
      out.push_back(std::move(p));
    }
    return out;
  }();
  return pieces;
}

bool legal_with(const std::vector<int>& grid, int player,
                std::pair<int, int> corner, bool has_own,
                const CellSet& cells) {
  bool touches_corner = false, diagonal = false;
  for (auto [r, c] : cells) {
    if (owner(grid, r, c) != -1) return false;
    if (owner(grid, r - 1, c) == player || owner(grid, r + 1, c) == player ||
        owner(grid, r, c - 1) == player || owner(grid, r, c + 1) == player) {
      return false;
    }
    if (owner(grid, r - 1, c - 1) == player ||
        owner(grid, r - 1, c + 1) == player ||
        owner(grid, r + 1, c - 1) == player ||
        owner(grid, r + 1, c + 1) == player) {
      diagonal = true;
    }
    if (std::make_pair(r, c) == corner) touches_corner = true;
  }
  return has_own ? diagonal : touches_corner;
}

bool ref_legal(const std::vector<int>& grid, int player,
               std::pair<int, int> corner, const CellSet& cells) {
  bool has_own = false;
  for (int v : grid) has_own = has_own || v == player;
  return legal_with(grid, player, corner, has_own, cells);
}

std::set<RefPlacement> ref_enumerate(const BlokusBoard& board, int player) {
  std::set<RefPlacement> out;
  for_each_candidate(board, player,
                     [&](const std::string& name, const CellSet& cells) {
                       out.emplace(name, cells);
                       return true;
                     });
  return out;
}

bool ref_any_placement(const BlokusBoard& board, int player) {
  // Any legal placement puts some cell on an empty square that is diagonal
  // to an own cell (or on the start corner), so only those squares need to
  // be tried under each cell of each orientation.
  const auto grid = grid_of(board);
  const auto corner = corner_of(player);
  bool has_own = false;
  for (int v : grid) has_own = has_own || v == player;
  std::vector<std::pair<int, int>> spots;
  if (!has_own) {
    spots.push_back(corner);
  } else {
    for (int r = 0; r < kN; ++r) {
      for (int c = 0; c < kN; ++c) {
        if (owner(grid, r, c) != -1) continue;
        if (owner(grid, r - 1, c - 1) == player ||
            owner(grid, r - 1, c + 1) == player ||
            owner(grid, r + 1, c - 1) == player ||
            owner(grid, r + 1, c + 1) == player) {
          spots.emplace_back(r, c);
        }
      }
    }
  }
  CellSet cells;
  for (const auto& piece : reference_pieces()) {
    int idx = library_index(piece.name);
    if (idx < 0 || !(board.remaining[player] >> idx & 1u)) continue;
    for (const auto& o : piece.orientations) {
      for (auto [sr, sc] : spots) {
        for (auto [kr, kc] : o) {
          cells.clear();
          for (auto [dr, dc] : o) cells.emplace_back(sr - kr + dr, sc - kc + dc);
          if (legal_with(grid, player, corner, has_own, cells)) return true;
        }
      }
    }
  }
  return false;
}

std::set<RefPlacement> library_placements(const BlokusBoard& board,
                                          int player, int* duplicates) {
  std::set<RefPlacement> out;
  int dups = 0;
  for (const Placement& pl : enumerate_placements(board, player)) {
    auto cells = placement_cells(pl);
    std::sort(cells.begin(), cells.end());
    if (!out.emplace(blokus_pieces()[pl.piece].name, cells).second) ++dups;
  }
  if (duplicates) *duplicates = dups;
  return out;
}

std::string check_blokus_transition(const BlokusBoard& before, PlayerId player,
                                    Action action, const BlokusBoard& after,
                                    const std::vector<double>& rewards,
                                    bool terminal) {
  const int n = before.players;
  if (before.terminal) return "move on a finished board";
  if (player != before.to_move) return "wrong player accepted";
  if (before.passed[player]) return "passed player moved";
  std::vector<double> want(n, 0.0);
  std::vector<int> grid = grid_of(before);
  auto passed = before.passed;
  auto control = before.control;
  auto remaining = before.remaining;
  if (action == kBlokusPass) {
    if (ref_any_placement(before, player)) return "pass accepted with moves";
    passed[player] = true;
  } else {
    const Placement pl = decode_placement(action);
    auto cells = placement_cells(pl);
    std::sort(cells.begin(), cells.end());
    const std::string& name = blokus_pieces().at(pl.piece).name;
    const RefPiece* ref = nullptr;
    for (const auto& p : reference_pieces()) {
      if (p.name == name) ref = &p;
    }
    if (!ref) return "unknown piece " + name;
    if (!(before.remaining[player] >> pl.piece & 1u)) {
      return "piece not in hand";
    }
    // The cells must be a translate of one of the reference orientations.
    const CellSet shape = normalized(cells);
    if (std::find(ref->orientations.begin(), ref->orientations.end(), shape) ==
        ref->orientations.end()) {
      return "cells are not a shape of " + name;
    }
    if (!ref_legal(grid, player, corner_of(player), cells)) {
      return "placement breaks the rules";
    }
    for (auto [r, c] : cells) grid[r * kN + c] = player;
    want[player] = static_cast<double>(cells.size());
    control[player] += static_cast<int>(cells.size());
    remaining[player] &= ~(1u << pl.piece);
    if (remaining[player] == 0) passed[player] = true;
  }
  if (grid != grid_of(after)) return "board differs";
  if (rewards != want) return "rewards differ";
  if (control != after.control) return "control differs";
  if (remaining != after.remaining) return "hand differs";
  if (passed != after.passed) return "pass flags differ";
  int owned = 0;
  for (int v : grid) owned += v == player;
  if (owned != after.control[player]) return "control is not the cell count";
  bool all_passed = true;
  for (int p = 0; p < n; ++p) all_passed = all_passed && passed[p];
  if (terminal != all_passed || after.terminal != all_passed) {
    return "terminal flag differs";
  }
  if (!all_passed) {
    int next = player;
    do {
      next = (next + 1) % n;
    } while (passed[next]);
    if (after.to_move != next) return "next mover differs";
  }
  return {};
}

}  // namespace colosseum::oracle
