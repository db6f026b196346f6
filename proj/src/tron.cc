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

#include "colosseum/tron.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "colosseum/ranking.h"

namespace colosseum {

namespace {

constexpr int kMaxTronPlayers = 10;
constexpr int kDelta[4][2] = {{-1, 0}, {0, 1}, {1, 0}, {0, -1}};
constexpr char kMoveLetters[3] = {'F', 'L', 'R'};

Heading facing_centre(Cell c, double cr, double cc) {
  double dr = cr - c.row;
  double dc = cc - c.col;
  if (std::abs(dr) >= std::abs(dc)) {
    return dr < 0 ? Heading::kNorth : Heading::kSouth;
  }
  return dc > 0 ? Heading::kEast : Heading::kWest;
}

bool in_arena(const TronConfig& cfg, Cell c) {
  return c.row >= 0 && c.row < cfg.rows && c.col >= 0 && c.col < cfg.cols;
}

std::vector<PlayerId> movers_of(const TronArena& a) {
  std::vector<PlayerId> movers;
  if (a.terminal) return movers;
  if (a.config.mode == TronMode::kSequential) {
    movers.push_back(a.to_move);
  } else {
    for (int p = 0; p < a.config.players; ++p) {
      if (a.players[p].alive) movers.push_back(p);
    }
  }
  return movers;
}

const char* mode_name(TronMode m) {
  return m == TronMode::kSimultaneous ? "simultaneous" : "sequential";
}

}  // namespace

int TronArena::alive_count() const {
  return static_cast<int>(std::count_if(
      players.begin(), players.end(), [](const auto& p) { return p.alive; }));
}

Heading turn(Heading h, Action move) {
  int v = static_cast<int>(h);
  switch (move) {
    case kForward:
      return h;
    case kLeft:
      return static_cast<Heading>((v + 3) % 4);
    case kRight:
      return static_cast<Heading>((v + 1) % 4);
  }
  throw GameError("tron: unknown move " + std::to_string(move));
}

Cell advance(Cell c, Heading h) {
  const auto& d = kDelta[static_cast<int>(h)];
  return {c.row + d[0], c.col + d[1]};
}

std::vector<Spawn> spawn_positions(int rows, int cols, int players) {
  if (players < 1) throw GameError("tron: need at least one player");
  if (rows < 3 || cols < 3) throw GameError("tron: arena too small");
  if (players > (rows - 2) * (cols - 2)) {
    throw GameError("tron: arena too small for player count");
  }
  const double cr = (rows - 1) / 2.0;
  const double cc = (cols - 1) / 2.0;
  const double radius = std::min(rows, cols) / 3.0;
  std::vector<Spawn> spawns;
  for (int i = 0; i < players; ++i) {
    double theta = 2.0 * std::numbers::pi * i / players;
    Cell c{static_cast<int>(std::lround(cr - radius * std::cos(theta))),
           static_cast<int>(std::lround(cc + radius * std::sin(theta)))};
    if (c.row < 1 || c.row > rows - 2 || c.col < 1 || c.col > cols - 2) {
      throw GameError("tron: arena too small, spawn outside interior");
    }
    for (const auto& s : spawns) {
      if (s.cell == c) {
        throw GameError("tron: arena too small, spawn positions collide");
      }
    }
    spawns.push_back({c, facing_centre(c, cr, cc)});
  }
  return spawns;
}

TronArena tron_new(const TronConfig& config) {
  if (config.players > kMaxTronPlayers) {
    throw GameError("tron: at most 10 players are supported");
  }
  if (config.view == TronView::kWindow && config.window < 1) {
    throw GameError("tron: window radius must be >= 1");
  }
  auto spawns = spawn_positions(config.rows, config.cols, config.players);
  TronArena a;
  a.config = config;
  a.grid.assign(static_cast<size_t>(config.rows) * config.cols, TronCell{});
  for (int r = 0; r < config.rows; ++r) {
    for (int c = 0; c < config.cols; ++c) {
      if (r == 0 || c == 0 || r == config.rows - 1 || c == config.cols - 1) {
        a.at(r, c).kind = TronCell::kWall;
      }
    }
  }
  for (int p = 0; p < config.players; ++p) {
    TronPlayer pl;
    pl.pos = spawns[p].cell;
    pl.heading = spawns[p].heading;
    a.players.push_back(pl);
    a.at(pl.pos.row, pl.pos.col) = {TronCell::kHead, static_cast<int8_t>(p)};
  }
  a.terminal = config.players == 0;
  return a;
}

TronStepOutcome tron_step(const TronArena& arena, const JointAction& actions) {
  if (arena.terminal) throw GameError("tron: game is over");
  const int n = arena.config.players;
  const auto movers = movers_of(arena);
  for (const auto& [p, a] : actions) {
    if (p < 0 || p >= n) throw IllegalActionError(p, "tron: unknown player");
    if (!arena.players[p].alive) {
      throw IllegalActionError(p, "tron: action from eliminated player");
    }
    if (!std::binary_search(movers.begin(), movers.end(), p)) {
      throw IllegalActionError(p, "tron: player is not to move");
    }
    if (a < kForward || a > kRight) {
      throw IllegalActionError(p, "tron: action must be 0, 1 or 2");
    }
  }
  for (PlayerId p : movers) {
    if (!actions.count(p)) throw IllegalActionError(p, "tron: missing action");
  }

  TronStepOutcome out{arena, std::vector<double>(n, 0.0), false};
  TronArena& next = out.arena;

  std::vector<Heading> headings(movers.size());
  std::vector<Cell> targets(movers.size());
  std::vector<bool> dies(movers.size(), false);
  for (size_t i = 0; i < movers.size(); ++i) {
    const auto& pl = arena.players[movers[i]];
    headings[i] = turn(pl.heading, actions.at(movers[i]));
    targets[i] = advance(pl.pos, headings[i]);
    // Any non-open cell kills, including heads that are about to move on:
    // their old cell becomes trail this very step.
    if (!in_arena(arena.config, targets[i]) ||
        arena.at(targets[i].row, targets[i].col).kind != TronCell::kOpen) {
      dies[i] = true;
    }
  }
  for (size_t i = 0; i < movers.size(); ++i) {
    for (size_t j = i + 1; j < movers.size(); ++j) {
      if (targets[i] == targets[j]) dies[i] = dies[j] = true;
    }
  }

  for (size_t i = 0; i < movers.size(); ++i) {
    PlayerId p = movers[i];
    auto& pl = next.players[p];
    next.at(pl.pos.row, pl.pos.col) = {TronCell::kTrail, static_cast<int8_t>(p)};
    if (dies[i]) {
      pl.alive = false;
      pl.crash_step = arena.step_count;
      out.rewards[p] = kTronCrashReward;
    } else {
      pl.pos = targets[i];
      pl.heading = headings[i];
      next.at(pl.pos.row, pl.pos.col) = {TronCell::kHead, static_cast<int8_t>(p)};
      out.rewards[p] = kTronSurviveReward;
    }
  }
  ++next.step_count;

  const int alive = next.alive_count();
  next.terminal = alive == 0 || (n >= 2 && alive <= 1);
  if (next.terminal) {
    if (alive == 1 && n >= 2) {
      for (int p = 0; p < n; ++p) {
        if (next.players[p].alive) out.rewards[p] += kTronWinBonus;
      }
    }
  } else if (arena.config.mode == TronMode::kSequential) {
    PlayerId p = arena.to_move;
    do {
      p = (p + 1) % n;
    } while (!next.players[p].alive);
    next.to_move = p;
  }
  out.terminal = next.terminal;
  return out;
}

char tron_cell_char(const TronCell& cell) {
  switch (cell.kind) {
    case TronCell::kOpen:
      return '.';
    case TronCell::kWall:
      return '#';
    case TronCell::kHead:
      return static_cast<char>('0' + cell.owner);
    case TronCell::kTrail:
      return static_cast<char>('a' + cell.owner);
  }
  return '?';
}

std::vector<std::string> tron_rows(const TronArena& arena) {
  std::vector<std::string> rows;
  for (int r = 0; r < arena.config.rows; ++r) {
    std::string line;
    for (int c = 0; c < arena.config.cols; ++c) {
      line.push_back(tron_cell_char(arena.at(r, c)));
    }
    rows.push_back(std::move(line));
  }
  return rows;
}

std::vector<std::string> tron_window(const TronArena& arena, PlayerId player,
                                     int w) {
  const auto& pl = arena.players.at(player);
  const auto& f = kDelta[static_cast<int>(pl.heading)];
  const auto& rt = kDelta[(static_cast<int>(pl.heading) + 1) % 4];
  const int size = 2 * w + 1;
  std::vector<std::string> out(size, std::string(size, '#'));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      int ahead = w - i;
      int right = j - w;
      Cell c{pl.pos.row + ahead * f[0] + right * rt[0],
             pl.pos.col + ahead * f[1] + right * rt[1]};
      if (in_arena(arena.config, c)) {
        out[i][j] = tron_cell_char(arena.at(c.row, c.col));
      }
    }
  }
  return out;
}

Observation tron_observe(const TronArena& arena, PlayerId player,
                         TronView view, int w) {
  if (player < 0 || player >= arena.config.players) {
    throw GameError("tron: unknown player");
  }
  json obs = {{"self", player},
              {"alive", arena.players[player].alive},
              {"step", arena.step_count}};
  if (view == TronView::kWindow) {
    obs["mode"] = "window";
    obs["window"] = w;
    obs["grid"] = tron_window(arena, player, w);
    return obs;
  }
  obs["mode"] = "full";
  obs["grid"] = tron_rows(arena);
  json players = json::array();
  for (const auto& pl : arena.players) {
    players.push_back({{"row", pl.pos.row},
                       {"col", pl.pos.col},
                       {"heading", static_cast<int>(pl.heading)},
                       {"alive", pl.alive}});
  }
  obs["players"] = players;
  return obs;
}

std::array<bool, 3> tron_clearance(const Observation& obs) {
  const auto grid = obs.at("grid").get<std::vector<std::string>>();
  std::array<bool, 3> clear{};
  if (obs.at("mode") == "window") {
    const int w = obs.at("window").get<int>();
    clear[kForward] = grid[w - 1][w] == '.';
    clear[kLeft] = grid[w][w - 1] == '.';
    clear[kRight] = grid[w][w + 1] == '.';
    return clear;
  }
  const auto& me = obs.at("players").at(obs.at("self").get<int>());
  Cell pos{me.at("row").get<int>(), me.at("col").get<int>()};
  auto heading = static_cast<Heading>(me.at("heading").get<int>());
  for (Action m : {kForward, kLeft, kRight}) {
    Cell c = advance(pos, turn(heading, m));
    clear[m] = c.row >= 0 && c.row < static_cast<int>(grid.size()) &&
               c.col >= 0 && c.col < static_cast<int>(grid[c.row].size()) &&
               grid[c.row][c.col] == '.';
  }
  return clear;
}

TronState::TronState(TronArena arena, std::vector<double> returns)
    : arena_(std::move(arena)) {
  returns_ = returns.empty() ? std::vector<double>(arena_.config.players, 0.0)
                             : std::move(returns);
}

std::vector<PlayerId> TronState::current_players() const {
  if (arena_.terminal) throw GameError("current_players on terminal state");
  return movers_of(arena_);
}

std::vector<Action> TronState::legal_actions(PlayerId player) const {
  if (arena_.terminal) throw GameError("legal_actions on terminal state");
  check_player(player);
  auto movers = movers_of(arena_);
  if (!std::binary_search(movers.begin(), movers.end(), player)) {
    throw GameError("tron: player cannot act now");
  }
  return {kForward, kLeft, kRight};
}

StepResult TronState::step(const JointAction& actions) const {
  auto out = tron_step(arena_, actions);
  std::vector<double> returns = returns_;
  for (size_t p = 0; p < returns.size(); ++p) returns[p] += out.rewards[p];
  auto next = std::make_shared<TronState>(std::move(out.arena), std::move(returns));
  return {next, std::move(out.rewards), out.terminal, next->eliminated()};
}

Observation TronState::observe(PlayerId player) const {
  return tron_observe(arena_, player, arena_.config.view, arena_.config.window);
}

RankRecord TronState::rankings() const {
  if (!arena_.terminal) throw GameError("rankings on non-terminal state");
  // Survivors first, then by crash step, latest crash first.
  std::map<int, std::vector<PlayerId>, std::greater<>> by_step;
  for (int p = 0; p < arena_.config.players; ++p) {
    const auto& pl = arena_.players[p];
    by_step[pl.alive ? arena_.step_count : *pl.crash_step].push_back(p);
  }
  TieBlocks blocks;
  for (auto& [step, block] : by_step) blocks.push_back(block);
  return {apply_tie_rounding(blocks, arena_.config.players), returns_};
}

std::vector<PlayerId> TronState::eliminated() const {
  std::vector<PlayerId> out;
  for (int p = 0; p < arena_.config.players; ++p) {
    if (!arena_.players[p].alive) out.push_back(p);
  }
  return out;
}

json TronState::to_json() const {
  json players = json::array();
  for (const auto& pl : arena_.players) {
    players.push_back(
        {{"row", pl.pos.row},
         {"col", pl.pos.col},
         {"heading", static_cast<int>(pl.heading)},
         {"alive", pl.alive},
         {"crash_step", pl.crash_step ? json(*pl.crash_step) : json(nullptr)}});
  }
  return {{"schema", "colosseum.state"},
          {"v", kStateSchemaVersion},
          {"env", "tron"},
          {"rows", arena_.config.rows},
          {"cols", arena_.config.cols},
          {"mode", mode_name(arena_.config.mode)},
          {"grid", tron_rows(arena_)},
          {"players", players},
          {"step_count", arena_.step_count},
          {"to_move", arena_.to_move},
          {"terminal", arena_.terminal},
          {"returns", returns_}};
}

std::string TronState::action_to_string(Action action) const {
  if (action < kForward || action > kRight) return "?";
  return std::string(1, kMoveLetters[action]);
}

std::string TronState::render() const {
  std::string out;
  for (const auto& row : tron_rows(arena_)) {
    out += row;
    out += '\n';
  }
  return out;
}

TronConfig tron_config_from(const EnvConfig& config) {
  TronConfig cfg;
  cfg.players = config.players;
  cfg.rows = config.params.value("rows", 15);
  cfg.cols = config.params.value("cols", cfg.rows);
  std::string mode = config.params.value("mode", "simultaneous");
  if (mode == "simultaneous") {
    cfg.mode = TronMode::kSimultaneous;
  } else if (mode == "sequential") {
    cfg.mode = TronMode::kSequential;
  } else {
    throw GameError("tron: unknown mode '" + mode + "'");
  }
  std::string view = config.params.value("observation", "full");
  if (view == "full") {
    cfg.view = TronView::kFull;
  } else if (view == "window") {
    cfg.view = TronView::kWindow;
  } else {
    throw GameError("tron: unknown observation '" + view + "'");
  }
  cfg.window = config.params.value("window", 3);
  return cfg;
}

StatePtr new_tron(const EnvConfig& config) {
  return std::make_shared<TronState>(tron_new(tron_config_from(config)));
}

void write_tron_replay(std::ostream& out, const TronReplay& replay) {
  const auto& c = replay.config;
  out << "tron-replay v1 rows=" << c.rows << " cols=" << c.cols
      << " players=" << c.players << " seed=" << replay.seed
      << " mode=" << mode_name(c.mode) << "\n";
  for (const auto& step : replay.steps) {
    bool first = true;
    for (const auto& [p, a] : step) {
      if (!first) out << ' ';
      first = false;
      out << p << ':' << kMoveLetters[a];
    }
    out << "\n";
  }
}

TronReplay read_tron_replay(std::istream& in) {
  auto fail = [](int line, const std::string& why) {
    throw GameError("tron replay line " + std::to_string(line) + ": " + why);
  };
  TronReplay replay;
  std::string line;
  if (!std::getline(in, line)) fail(1, "missing header");
  {
    std::istringstream hs(line);
    std::string magic, version, field;
    hs >> magic >> version;
    if (magic != "tron-replay" || version != "v1") fail(1, "bad header");
    std::map<std::string, std::string> kv;
    while (hs >> field) {
      auto eq = field.find('=');
      if (eq == std::string::npos) fail(1, "bad header field '" + field + "'");
      kv[field.substr(0, eq)] = field.substr(eq + 1);
    }
    try {
      replay.config.rows = std::stoi(kv.at("rows"));
      replay.config.cols = std::stoi(kv.at("cols"));
      replay.config.players = std::stoi(kv.at("players"));
      replay.seed = std::stoull(kv.at("seed"));
      const auto& mode = kv.at("mode");
      if (mode == "simultaneous") {
        replay.config.mode = TronMode::kSimultaneous;
      } else if (mode == "sequential") {
        replay.config.mode = TronMode::kSequential;
      } else {
        fail(1, "bad mode");
      }
    } catch (const std::exception& e) {
      if (dynamic_cast<const GameError*>(&e)) throw;
      fail(1, "incomplete header");
    }
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    JointAction step;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos || colon + 2 != tok.size()) {
        fail(lineno, "bad token '" + tok + "'");
      }
      int p = 0;
      try {
        p = std::stoi(tok.substr(0, colon));
      } catch (const std::exception&) {
        fail(lineno, "bad player in '" + tok + "'");
      }
      const char* hit = std::find(kMoveLetters, kMoveLetters + 3, tok.back());
      if (hit == kMoveLetters + 3) fail(lineno, "bad move in '" + tok + "'");
      step[p] = static_cast<Action>(hit - kMoveLetters);
    }
    if (step.empty()) fail(lineno, "empty step");
    replay.steps.push_back(std::move(step));
  }
  return replay;
}

}  // namespace colosseum
