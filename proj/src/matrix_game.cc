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

#include "colosseum/matrix_game.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>

#include "colosseum/ranking.h"
#include "colosseum/rng.h"

namespace colosseum {

size_t PayoffTensor::joint_count() const {
  size_t n = 1;
  for (int s : shape) n *= static_cast<size_t>(s);
  return n;
}

size_t PayoffTensor::offset(std::span<const int> joint) const {
  if (joint.size() != shape.size()) {
    throw GameError("payoff tensor: joint action has wrong arity");
  }
  size_t off = 0;
  for (size_t i = 0; i < shape.size(); ++i) {
    if (joint[i] < 0 || joint[i] >= shape[i]) {
      throw IllegalActionError(static_cast<PlayerId>(i),
                               "payoff tensor: action index out of range");
    }
    off = off * shape[i] + joint[i];
  }
  return off * shape.size();
}

std::span<const double> PayoffTensor::payoffs(std::span<const int> joint) const {
  return {values.data() + offset(joint), shape.size()};
}

std::span<double> PayoffTensor::payoffs(std::span<const int> joint) {
  return {values.data() + offset(joint), shape.size()};
}

PayoffTensor random_payoff(const std::vector<int>& shape, uint64_t seed,
                           bool zero_sum) {
  if (shape.size() < 2) throw GameError("payoff tensor: need at least 2 players");
  for (int s : shape) {
    if (s < 1) throw GameError("payoff tensor: every player needs an action");
  }
  PayoffTensor t;
  t.shape = shape;
  t.seed = seed;
  Rng rng = Rng(seed).derive("payoff");
  t.values.resize(t.joint_count() * shape.size());
  for (double& v : t.values) v = rng.uniform();
  if (zero_sum) project_zero_sum(t);
  return t;
}

void project_zero_sum(PayoffTensor& tensor) {
  const size_t p = tensor.shape.size();
  for (size_t base = 0; base < tensor.values.size(); base += p) {
    double mean = 0.0;
    for (size_t i = 0; i < p; ++i) mean += tensor.values[base + i];
    mean /= static_cast<double>(p);
    for (size_t i = 0; i < p; ++i) tensor.values[base + i] -= mean;
  }
  tensor.zero_sum = true;
}

RpsAction parse_rps(char symbol) {
  switch (symbol) {
    case 'R':
      return kRock;
    case 'P':
      return kPaper;
    case 'S':
      return kScissors;
  }
  throw GameError(std::string("rps: bad action symbol '") + symbol + "'");
}

char rps_symbol(int action) { return "RPS"[action]; }

std::vector<double> rps_outcome(std::span<const int> actions,
                                const RpsConfig& config) {
  if (static_cast<int>(actions.size()) != config.players) {
    throw GameError("rps: wrong number of actions");
  }
  for (int a : actions) {
    if (a < kRock || a > kScissors) throw GameError("rps: bad action");
  }
  std::vector<double> out(actions.size(), config.tie_payoff);
  if (config.players == 2) {
    if (actions[0] == actions[1]) return out;
    // b beats a iff b == a + 1 (mod 3).
    int winner = (actions[1] == (actions[0] + 1) % 3) ? 1 : 0;
    out[winner] = config.win_payoff;
    out[1 - winner] = config.lose_payoff;
    return out;
  }
  int counts[3] = {0, 0, 0};
  for (int a : actions) ++counts[a];
  int singles = 0, single_action = -1;
  for (int a = 0; a < 3; ++a) {
    if (counts[a] == 1) {
      ++singles;
      single_action = a;
    }
  }
  if (singles != 1) return out;
  for (size_t i = 0; i < actions.size(); ++i) {
    out[i] = actions[i] == single_action ? config.win_payoff : config.lose_payoff;
  }
  return out;
}

PayoffTensor rps_tensor(const RpsConfig& config) {
  if (config.players != 2 && config.players != 3) {
    throw GameError("rps: players must be 2 or 3");
  }
  PayoffTensor t;
  t.shape.assign(config.players, 3);
  t.values.resize(t.joint_count() * config.players);
  std::vector<int> joint(config.players, 0);
  for (size_t k = 0; k < t.joint_count(); ++k) {
    size_t rest = k;
    for (int i = config.players - 1; i >= 0; --i) {
      joint[i] = static_cast<int>(rest % 3);
      rest /= 3;
    }
    auto v = rps_outcome(joint, config);
    std::copy(v.begin(), v.end(), t.payoffs(joint).begin());
  }
  t.zero_sum = false;
  return t;
}

void write_payoff_tensor(std::ostream& out, const PayoffTensor& tensor) {
  out << "payoff-tensor v1\nshape:";
  for (int s : tensor.shape) out << ' ' << s;
  out << "\nseed: " << tensor.seed << "\nzero_sum: "
      << (tensor.zero_sum ? "true" : "false") << "\n";
  char buf[32];
  for (double v : tensor.values) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << "\n";
  }
}

PayoffTensor read_payoff_tensor(std::istream& in) {
  auto fail = [](int line, const std::string& why) {
    throw GameError("payoff tensor line " + std::to_string(line) + ": " + why);
  };
  std::string line;
  PayoffTensor t;
  if (!std::getline(in, line) || line != "payoff-tensor v1") fail(1, "bad magic");
  if (!std::getline(in, line) || line.rfind("shape:", 0) != 0) {
    fail(2, "expected shape");
  }
  {
    std::istringstream ss(line.substr(6));
    int s;
    while (ss >> s) t.shape.push_back(s);
    if (t.shape.size() < 2) fail(2, "shape needs at least two players");
    for (int v : t.shape) {
      if (v < 1) fail(2, "non-positive action count");
    }
  }
  if (!std::getline(in, line) || line.rfind("seed: ", 0) != 0) {
    fail(3, "expected seed");
  }
  t.seed = std::stoull(line.substr(6));
  if (!std::getline(in, line) || line.rfind("zero_sum: ", 0) != 0) {
    fail(4, "expected zero_sum");
  }
  t.zero_sum = line.substr(10) == "true";
  const size_t expected = t.joint_count() * t.shape.size();
  int lineno = 4;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      size_t used = 0;
      t.values.push_back(std::stod(line, &used));
      if (used != line.size()) fail(lineno, "trailing characters");
    } catch (const std::invalid_argument&) {
      fail(lineno, "not a number");
    }
  }
  if (t.values.size() != expected) {
    fail(lineno, "expected " + std::to_string(expected) + " values, got " +
                     std::to_string(t.values.size()));
  }
  return t;
}

MatrixStepOutcome matrix_step(const PayoffTensor& tensor,
                              const JointAction& actions) {
  const int n = tensor.players();
  std::vector<int> joint(n);
  for (int p = 0; p < n; ++p) {
    auto it = actions.find(p);
    if (it == actions.end()) throw IllegalActionError(p, "matrix: missing action");
    joint[p] = it->second;
  }
  if (static_cast<int>(actions.size()) != n) {
    throw IllegalActionError(actions.rbegin()->first, "matrix: unknown player");
  }
  auto pay = tensor.payoffs(joint);
  return {std::vector<double>(pay.begin(), pay.end()), true};
}

MatrixGameState::MatrixGameState(EnvKind kind,
                                 std::shared_ptr<const PayoffTensor> tensor,
                                 std::vector<int> played,
                                 std::vector<double> returns)
    : kind_(kind), tensor_(std::move(tensor)), played_(std::move(played)) {
  returns_ = returns.empty() ? std::vector<double>(tensor_->players(), 0.0)
                             : std::move(returns);
}

std::vector<PlayerId> MatrixGameState::current_players() const {
  if (is_terminal()) throw GameError("current_players on terminal state");
  std::vector<PlayerId> all(num_players());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::vector<Action> MatrixGameState::legal_actions(PlayerId player) const {
  if (is_terminal()) throw GameError("legal_actions on terminal state");
  check_player(player);
  std::vector<Action> out(tensor_->shape[player]);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

StepResult MatrixGameState::step(const JointAction& actions) const {
  if (is_terminal()) throw GameError("matrix: game is over");
  auto out = matrix_step(*tensor_, actions);
  std::vector<int> played;
  for (const auto& [p, a] : actions) played.push_back(a);
  std::vector<double> returns = returns_;
  for (size_t p = 0; p < returns.size(); ++p) returns[p] += out.rewards[p];
  auto next = std::make_shared<MatrixGameState>(kind_, tensor_, std::move(played),
                                                std::move(returns));
  return {next, std::move(out.rewards), true, next->eliminated()};
}

Observation MatrixGameState::observe(PlayerId player) const {
  check_player(player);
  json obs = {{"self", player},
              {"shape", tensor_->shape},
              {"payoffs", tensor_->values},
              {"terminal", is_terminal()}};
  if (is_terminal()) obs["played"] = played_;
  return obs;
}

RankRecord MatrixGameState::rankings() const {
  if (!is_terminal()) throw GameError("rankings on non-terminal state");
  return {ranks_by_score(returns_), returns_};
}

std::vector<PlayerId> MatrixGameState::eliminated() const {
  if (!is_terminal()) return {};
  std::vector<PlayerId> all(num_players());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

json MatrixGameState::to_json() const {
  return {{"schema", "colosseum.state"},
          {"v", kStateSchemaVersion},
          {"env", env_name(kind_)},
          {"shape", tensor_->shape},
          {"payoffs", tensor_->values},
          {"zero_sum", tensor_->zero_sum},
          {"played", played_},
          {"terminal", is_terminal()},
          {"returns", returns_}};
}

std::string MatrixGameState::action_to_string(Action action) const {
  if (kind_ == EnvKind::kRps && action >= 0 && action < 3) {
    return std::string(1, rps_symbol(action));
  }
  return std::to_string(action);
}

std::string MatrixGameState::render() const {
  if (!is_terminal()) return "(waiting for joint action)\n";
  std::string out = "played:";
  for (int a : played_) out += " " + action_to_string(a);
  out += "\npayoffs:";
  for (double r : returns_) out += " " + std::to_string(r);
  return out + "\n";
}

StatePtr new_matrix_game(const EnvConfig& config) {
  std::vector<int> shape;
  if (config.params.contains("actions")) {
    shape = config.params["actions"].get<std::vector<int>>();
  } else {
    shape.assign(config.players, 2);
  }
  if (static_cast<int>(shape.size()) != config.players) {
    throw GameError("matrix: 'actions' must list one count per player");
  }
  auto tensor = std::make_shared<PayoffTensor>(random_payoff(
      shape, config.seed, config.params.value("zero_sum", false)));
  return std::make_shared<MatrixGameState>(EnvKind::kMatrix, std::move(tensor));
}

StatePtr new_rps(const EnvConfig& config) {
  RpsConfig cfg;
  cfg.players = config.players;
  cfg.win_payoff = config.params.value("win", 1.0);
  cfg.lose_payoff = config.params.value("lose", -1.0);
  cfg.tie_payoff = config.params.value("tie", 0.0);
  auto tensor = std::make_shared<PayoffTensor>(rps_tensor(cfg));
  return std::make_shared<MatrixGameState>(EnvKind::kRps, std::move(tensor));
}

}  // namespace colosseum
