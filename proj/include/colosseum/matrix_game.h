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

#ifndef COLOSSEUM_MATRIX_GAME_H_
#define COLOSSEUM_MATRIX_GAME_H_

#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "colosseum/game.h"

namespace colosseum {

// Payoffs of a one-shot P-player game with S_i actions for player i, stored
// row-major over (a_1, ..., a_P, player).
struct PayoffTensor {
  std::vector<int> shape;
  std::vector<double> values;
  bool zero_sum = false;
  uint64_t seed = 0;

  int players() const { return static_cast<int>(shape.size()); }
  size_t joint_count() const;
  size_t offset(std::span<const int> joint) const;
  std::span<const double> payoffs(std::span<const int> joint) const;
  std::span<double> payoffs(std::span<const int> joint);
};

// Entries i.i.d. uniform on [0, 1); with zero_sum each payoff vector is then
// mean-centred.
PayoffTensor random_payoff(const std::vector<int>& shape, uint64_t seed,
                           bool zero_sum);

// Subtracts each joint action's mean payoff. Idempotent.
void project_zero_sum(PayoffTensor& tensor);

enum RpsAction : int { kRock = 0, kPaper = 1, kScissors = 2 };

struct RpsConfig {
  int players = 3;
  double win_payoff = 1.0;
  double lose_payoff = -1.0;
  double tie_payoff = 0.0;
};

RpsAction parse_rps(char symbol);
char rps_symbol(int action);

// Two players: R < P < S < R. Three players: the holder of the only action
// played exactly once wins, unless all agree or all differ.
std::vector<double> rps_outcome(std::span<const int> actions,
                                const RpsConfig& config);
PayoffTensor rps_tensor(const RpsConfig& config);

// Header lines then one value per line, %.17g so values round-trip exactly.
void write_payoff_tensor(std::ostream& out, const PayoffTensor& tensor);
PayoffTensor read_payoff_tensor(std::istream& in);

// One simultaneous step; the observation is the whole tensor.
class MatrixGameState final : public State {
 public:
  MatrixGameState(EnvKind kind, std::shared_ptr<const PayoffTensor> tensor,
                  std::vector<int> played = {},
                  std::vector<double> returns = {});

  const PayoffTensor& tensor() const { return *tensor_; }

  EnvKind kind() const override { return kind_; }
  int num_players() const override { return tensor_->players(); }
  bool is_terminal() const override { return !played_.empty(); }
  bool is_simultaneous() const override { return true; }
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
  EnvKind kind_;
  std::shared_ptr<const PayoffTensor> tensor_;
  std::vector<int> played_;
};

struct MatrixStepOutcome {
  std::vector<double> rewards;
  bool terminal = true;
};

MatrixStepOutcome matrix_step(const PayoffTensor& tensor,
                              const JointAction& actions);

StatePtr new_matrix_game(const EnvConfig& config);
StatePtr new_rps(const EnvConfig& config);

}  // namespace colosseum

#endif  // COLOSSEUM_MATRIX_GAME_H_
