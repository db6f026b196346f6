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

#include "colosseum/blokus.h"

#include <algorithm>
#include <set>

#include "colosseum/ranking.h"

namespace colosseum {

namespace {

using Cells = std::vector<std::pair<int, int>>;

constexpr uint32_t kRowMask = (1u << kBlokusSize) - 1;
constexpr int kDiag[4][2] = {{-1, -1}, {-1, 1}, {1, -1}, {1, 1}};

Cells normalize(Cells cells) {
  int min_r = cells[0].first, min_c = cells[0].second;
  for (auto [r, c] : cells) {
    min_r = std::min(min_r, r);
    min_c = std::min(min_c, c);
  }
  for (auto& [r, c] : cells) {
    r -= min_r;
    c -= min_c;
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

struct PieceDef {
  const char* name;
  Cells cells;
};

const std::vector<PieceDef>& piece_defs() {
  static const std::vector<PieceDef> defs = {
      {"I1", {{0, 0}}},
      {"I2", {{0, 0}, {0, 1}}},
      {"I3", {{0, 0}, {0, 1}, {0, 2}}},
      {"V3", {{0, 0}, {1, 0}, {1, 1}}},
      {"I4", {{0, 0}, {0, 1}, {0, 2}, {0, 3}}},
      {"L4", {{0, 0}, {1, 0}, {2, 0}, {2, 1}}},
      {"O4", {{0, 0}, {0, 1}, {1, 0}, {1, 1}}},
      {"T4", {{0, 0}, {0, 1}, {0, 2}, {1, 1}}},
      {"Z4", {{0, 0}, {0, 1}, {1, 1}, {1, 2}}},
      {"F", {{0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 1}}},
      {"I", {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}}},
      {"L", {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {3, 1}}},
      {"N", {{0, 1}, {1, 1}, {2, 0}, {2, 1}, {3, 0}}},
      {"P", {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}}},
      {"T", {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 1}}},
      {"U", {{0, 0}, {0, 2}, {1, 0}, {1, 1}, {1, 2}}},
      {"V", {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}}},
      {"W", {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}}},
      {"X", {{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}}},
      {"Y", {{0, 1}, {1, 0}, {1, 1}, {2, 1}, {3, 1}}},
      {"Z", {{0, 0}, {0, 1}, {1, 1}, {2, 1}, {2, 2}}},
  };
  return defs;
}

// Per orientation and cell, which of the four diagonal directions that cell
// can use to touch an own piece without an edge contact next to it.
struct CornerCells {
  // [diag][k] -> cell index
  std::array<std::vector<int>, 4> by_diag;
};

const std::vector<std::vector<CornerCells>>& corner_cells() {
  static const auto table = [] {
    std::vector<std::vector<CornerCells>> t;
    for (const auto& piece : blokus_pieces()) {
      std::vector<CornerCells> per_orient;
      for (const auto& o : piece.orientations) {
        std::set<std::pair<int, int>> s(o.cells.begin(), o.cells.end());
        CornerCells cc;
        for (int i = 0; i < static_cast<int>(o.cells.size()); ++i) {
          auto [r, c] = o.cells[i];
          for (int d = 0; d < 4; ++d) {
            if (!s.count({r + kDiag[d][0], c}) &&
                !s.count({r, c + kDiag[d][1]})) {
              cc.by_diag[d].push_back(i);
            }
          }
        }
        per_orient.push_back(std::move(cc));
      }
      t.push_back(std::move(per_orient));
    }
    return t;
  }();
  return table;
}

BitRows edge_neighbors(const BitRows& own) {
  BitRows out{};
  for (int r = 0; r < kBlokusSize; ++r) {
    uint32_t v = ((own[r] << 1) | (own[r] >> 1)) & kRowMask;
    if (r > 0) v |= own[r - 1];
    if (r + 1 < kBlokusSize) v |= own[r + 1];
    out[r] = v;
  }
  return out;
}

bool fits(const Orientation& o, int row, int col, const BitRows& forbidden) {
  if (row < 0 || col < 0 || row + o.height > kBlokusSize ||
      col + o.width > kBlokusSize) {
    return false;
  }
  for (int i = 0; i < o.height; ++i) {
    if ((o.rows[i] << col) & forbidden[row + i]) return false;
  }
  return true;
}

}  // namespace

std::vector<Orientation> orientations_of(const Cells& cells) {
  std::set<Cells> seen;
  std::vector<Orientation> out;
  for (int reflect = 0; reflect < 2; ++reflect) {
    for (int rot = 0; rot < 4; ++rot) {
      Cells t;
      for (auto [r, c] : cells) {
        int rr = r, cc = reflect ? -c : c;
        for (int k = 0; k < rot; ++k) {
          int tmp = rr;
          rr = cc;
          cc = -tmp;
        }
        t.emplace_back(rr, cc);
      }
      t = normalize(std::move(t));
      if (!seen.insert(t).second) continue;
      Orientation o;
      o.cells = t;
      for (auto [r, c] : t) {
        o.height = std::max(o.height, r + 1);
        o.width = std::max(o.width, c + 1);
        o.rows[r] |= 1u << c;
      }
      out.push_back(std::move(o));
    }
  }
  return out;
}

const std::vector<Piece>& blokus_pieces() {
  static const std::vector<Piece> pieces = [] {
    std::vector<Piece> v;
    for (const auto& def : piece_defs()) {
      Piece p;
      p.name = def.name;
      p.size = static_cast<int>(def.cells.size());
      p.base = def.cells;
      p.orientations = orientations_of(def.cells);
      v.push_back(std::move(p));
    }
    return v;
  }();
  return pieces;
}

Action encode_placement(const Placement& p) {
  return ((p.piece * kMaxOrientations + p.orientation) * kBlokusSize + p.row) *
             kBlokusSize +
         p.col;
}

Placement decode_placement(Action action) {
  if (action < 0 || action >= kBlokusPass) {
    throw GameError("blokus: action is not a placement");
  }
  Placement p;
  p.col = action % kBlokusSize;
  action /= kBlokusSize;
  p.row = action % kBlokusSize;
  action /= kBlokusSize;
  p.orientation = action % kMaxOrientations;
  p.piece = action / kMaxOrientations;
  return p;
}

std::vector<std::pair<int, int>> placement_cells(const Placement& placement) {
  const auto& pieces = blokus_pieces();
  if (placement.piece < 0 || placement.piece >= kNumPieces) {
    throw GameError("blokus: unknown piece");
  }
  const auto& orients = pieces[placement.piece].orientations;
  if (placement.orientation < 0 ||
      placement.orientation >= static_cast<int>(orients.size())) {
    throw GameError("blokus: unknown orientation");
  }
  Cells out;
  for (auto [r, c] : orients[placement.orientation].cells) {
    out.emplace_back(r + placement.row, c + placement.col);
  }
  return out;
}

bool BlokusBoard::has_pieces_on_board(PlayerId p) const {
  return control[p] > 0;
}

std::pair<int, int> blokus_start_corner(PlayerId player) {
  static constexpr std::pair<int, int> kCorners[4] = {
      {0, 0}, {0, kBlokusSize - 1}, {kBlokusSize - 1, kBlokusSize - 1},
      {kBlokusSize - 1, 0}};
  return kCorners[player];
}

BlokusBoard blokus_new(int players) {
  if (players < 2 || players > 4) {
    throw GameError("blokus: player count must be 2, 3 or 4");
  }
  BlokusBoard b;
  b.players = players;
  b.cells.fill(-1);
  for (int p = 0; p < players; ++p) b.remaining[p] = (1u << kNumPieces) - 1;
  return b;
}

bool is_legal_placement(const BlokusBoard& board, PlayerId player,
                        const Placement& placement) {
  if (placement.piece < 0 || placement.piece >= kNumPieces) return false;
  if (!(board.remaining[player] >> placement.piece & 1u)) return false;
  const auto& orients = blokus_pieces()[placement.piece].orientations;
  if (placement.orientation < 0 ||
      placement.orientation >= static_cast<int>(orients.size())) {
    return false;
  }
  const auto& o = orients[placement.orientation];
  BitRows forbidden = edge_neighbors(board.owned[player]);
  for (int r = 0; r < kBlokusSize; ++r) forbidden[r] |= board.occupied[r];
  if (!fits(o, placement.row, placement.col, forbidden)) return false;
  if (!board.has_pieces_on_board(player)) {
    auto [cr, cc] = blokus_start_corner(player);
    int dr = cr - placement.row, dc = cc - placement.col;
    return dr >= 0 && dr < o.height && dc >= 0 && dc < o.width &&
           (o.rows[dr] >> dc & 1u);
  }
  const auto& own = board.owned[player];
  for (auto [r, c] : o.cells) {
    int ar = r + placement.row, ac = c + placement.col;
    for (const auto& d : kDiag) {
      int nr = ar + d[0], nc = ac + d[1];
      if (nr >= 0 && nr < kBlokusSize && nc >= 0 && nc < kBlokusSize &&
          (own[nr] >> nc & 1u)) {
        return true;
      }
    }
  }
  return false;
}

std::vector<Placement> enumerate_placements(const BlokusBoard& board,
                                            PlayerId player) {
  std::vector<Placement> out;
  if (board.terminal || board.passed[player]) return out;
  const auto& pieces = blokus_pieces();
  const auto& table = corner_cells();
  const BitRows& own = board.owned[player];
  BitRows forbidden = edge_neighbors(own);
  for (int r = 0; r < kBlokusSize; ++r) forbidden[r] |= board.occupied[r];

  const uint32_t hand = board.remaining[player];
  if (!board.has_pieces_on_board(player)) {
    auto [cr, cc] = blokus_start_corner(player);
    if (forbidden[cr] >> cc & 1u) return out;
    for (int pi = 0; pi < kNumPieces; ++pi) {
      if (!(hand >> pi & 1u)) continue;
      const auto& orients = pieces[pi].orientations;
      for (int oi = 0; oi < static_cast<int>(orients.size()); ++oi) {
        for (auto [r, c] : orients[oi].cells) {
          if (fits(orients[oi], cr - r, cc - c, forbidden)) {
            out.push_back({pi, oi, cr - r, cc - c});
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  for (int r = 0; r < kBlokusSize; ++r) {
    // Diagonal neighbours of own cells, grouped by which side the own cell
    // lies on.
    uint32_t above = r > 0 ? own[r - 1] : 0;
    uint32_t below = r + 1 < kBlokusSize ? own[r + 1] : 0;
    uint32_t dirs[4] = {(above << 1) & kRowMask, above >> 1,
                        (below << 1) & kRowMask, below >> 1};
    uint32_t any = (dirs[0] | dirs[1] | dirs[2] | dirs[3]) & ~forbidden[r];
    while (any) {
      int c = __builtin_ctz(any);
      any &= any - 1;
      for (int d = 0; d < 4; ++d) {
        if (!(dirs[d] >> c & 1u)) continue;
        for (int pi = 0; pi < kNumPieces; ++pi) {
          if (!(hand >> pi & 1u)) continue;
          const auto& orients = pieces[pi].orientations;
          for (int oi = 0; oi < static_cast<int>(orients.size()); ++oi) {
            const auto& o = orients[oi];
            for (int ci : table[pi][oi].by_diag[d]) {
              int ar = r - o.cells[ci].first, ac = c - o.cells[ci].second;
              if (fits(o, ar, ac, forbidden)) out.push_back({pi, oi, ar, ac});
            }
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BlokusStepOutcome blokus_step(const BlokusBoard& board, PlayerId player,
                              Action action) {
  if (board.terminal) throw GameError("blokus: game is over");
  if (player != board.to_move) {
    throw IllegalActionError(player, "blokus: not this player's turn");
  }
  BlokusStepOutcome out{board, std::vector<double>(board.players, 0.0), false};
  BlokusBoard& b = out.board;
  if (action == kBlokusPass) {
    if (!enumerate_placements(board, player).empty()) {
      throw IllegalActionError(player, "blokus: cannot pass while moves exist");
    }
    b.passed[player] = true;
  } else {
    if (action < 0 || action > kBlokusPass) {
      throw IllegalActionError(player, "blokus: action out of range");
    }
    Placement pl = decode_placement(action);
    if (!is_legal_placement(board, player, pl)) {
      throw IllegalActionError(player, "blokus: illegal placement");
    }
    for (auto [r, c] : placement_cells(pl)) {
      b.cells[r * kBlokusSize + c] = static_cast<int8_t>(player);
      b.owned[player][r] |= 1u << c;
      b.occupied[r] |= 1u << c;
    }
    const int size = blokus_pieces()[pl.piece].size;
    b.remaining[player] &= ~(1u << pl.piece);
    b.control[player] += size;
    out.rewards[player] = size;
    if (b.remaining[player] == 0) b.passed[player] = true;
  }
  PlayerId next = player;
  b.terminal = true;
  for (int k = 1; k <= b.players; ++k) {
    PlayerId q = (player + k) % b.players;
    if (!b.passed[q]) {
      next = q;
      b.terminal = false;
      break;
    }
  }
  b.to_move = next;
  out.terminal = b.terminal;
  return out;
}

BlokusState::BlokusState(BlokusBoard board, std::vector<double> returns)
    : board_(std::move(board)) {
  returns_ = returns.empty() ? std::vector<double>(board_.players, 0.0)
                             : std::move(returns);
}

std::vector<PlayerId> BlokusState::current_players() const {
  if (board_.terminal) throw GameError("current_players on terminal state");
  return {board_.to_move};
}

std::vector<Action> BlokusState::legal_actions(PlayerId player) const {
  if (board_.terminal) throw GameError("legal_actions on terminal state");
  if (player != board_.to_move) throw GameError("blokus: player is not to move");
  std::vector<Action> actions;
  for (const auto& p : enumerate_placements(board_, player)) {
    actions.push_back(encode_placement(p));
  }
  if (actions.empty()) actions.push_back(kBlokusPass);
  return actions;
}

StepResult BlokusState::step(const JointAction& actions) const {
  if (board_.terminal) throw GameError("blokus: game is over");
  if (actions.size() != 1 || actions.begin()->first != board_.to_move) {
    PlayerId who = actions.empty() ? board_.to_move : actions.begin()->first;
    throw IllegalActionError(who, "blokus: expected exactly the mover's action");
  }
  // Legality is checked by blokus_step directly; enumerating every placement
  // here would cost far more than the predicate.
  auto out = blokus_step(board_, actions.begin()->first, actions.begin()->second);
  std::vector<double> returns = returns_;
  for (int p = 0; p < board_.players; ++p) returns[p] += out.rewards[p];
  auto next =
      std::make_shared<BlokusState>(std::move(out.board), std::move(returns));
  return {next, std::move(out.rewards), out.terminal, next->eliminated()};
}

Observation BlokusState::observe(PlayerId player) const {
  check_player(player);
  json rows = json::array();
  for (int r = 0; r < kBlokusSize; ++r) {
    std::string line;
    for (int c = 0; c < kBlokusSize; ++c) {
      int v = board_.at(r, c);
      line.push_back(v < 0 ? '.' : static_cast<char>('0' + v));
    }
    rows.push_back(line);
  }
  json remaining = json::array();
  for (int p = 0; p < board_.players; ++p) {
    json names = json::array();
    for (int i = 0; i < kNumPieces; ++i) {
      if (board_.remaining[p] >> i & 1u) names.push_back(blokus_pieces()[i].name);
    }
    remaining.push_back(names);
  }
  json control(std::vector<int>(board_.control.begin(),
                                board_.control.begin() + board_.players));
  return {{"board", rows},
          {"remaining", remaining},
          {"control", control},
          {"self", player},
          {"to_move", board_.to_move},
          {"terminal", board_.terminal}};
}

RankRecord BlokusState::rankings() const {
  if (!board_.terminal) throw GameError("rankings on non-terminal state");
  std::vector<double> control(board_.control.begin(),
                              board_.control.begin() + board_.players);
  return {ranks_by_score(control), returns_};
}

std::vector<PlayerId> BlokusState::eliminated() const {
  std::vector<PlayerId> out;
  for (int p = 0; p < board_.players; ++p) {
    if (board_.passed[p]) out.push_back(p);
  }
  return out;
}

json BlokusState::to_json() const {
  json j = observe(board_.to_move);
  j.erase("self");
  j["schema"] = "colosseum.state";
  j["v"] = kStateSchemaVersion;
  j["env"] = "blokus";
  j["players"] = board_.players;
  j["passed"] = std::vector<bool>(board_.passed.begin(),
                                  board_.passed.begin() + board_.players);
  j["returns"] = returns_;
  return j;
}

std::string BlokusState::action_to_string(Action action) const {
  if (action == kBlokusPass) return "pass";
  Placement p = decode_placement(action);
  return blokus_pieces().at(p.piece).name + "/" + std::to_string(p.orientation) +
         "@" + std::to_string(p.row) + "," + std::to_string(p.col);
}

std::string BlokusState::render() const {
  std::string out;
  for (const auto& row : observe(0)["board"]) {
    out += row.get<std::string>();
    out += '\n';
  }
  return out;
}

StatePtr new_blokus(const EnvConfig& config) {
  return std::make_shared<BlokusState>(blokus_new(config.players));
}

}  // namespace colosseum
