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

#ifndef COLOSSEUM_KUHN_H_
#define COLOSSEUM_KUHN_H_

#include <array>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "colosseum/game.h"
#include "colosseum/rng.h"

namespace colosseum {

// N-player Kuhn poker: N + 1 cards, ante 1, a single bet of 1. Players act in
// seat order from seat 0 and may check or bet until somebody bets; every
// other player then calls or folds exactly once. Highest card among the
// players still in wins the pot. The undealt card is burned.
enum KuhnAction : Action { kCheck = 0, kBet = 1, kCall = 2, kFold = 3 };

inline constexpr int kKuhnAnte = 1;
inline constexpr int kKuhnBet = 1;
// Largest N the exact evaluator accepts; (N + 1)! deals are enumerated.
inline constexpr int kKuhnMaxExactPlayers = 10;

char kuhn_action_letter(KuhnAction action);
KuhnAction kuhn_action_from_letter(char letter);

struct KuhnHand {
  int players = 2;
  std::vector<int> cards;
  int undealt = -1;
  std::vector<int> bets;
  int pot = 0;
  std::vector<KuhnAction> history;
  std::vector<uint8_t> folded;
  PlayerId to_act = 0;
  PlayerId bettor = -1;
  bool terminal = false;
  // Net chip change per player, filled in at the terminal step.
  std::vector<double> payoff;

  std::string history_string() const;
};

// Deals from an explicit card assignment; cards must be distinct in [0, N].
KuhnHand kuhn_deal(int players, const std::vector<int>& cards);
KuhnHand kuhn_new(int players, Rng& rng);

// {check, bet} before any bet, {call, fold} afterwards.
std::array<KuhnAction, 2> kuhn_legal(const KuhnHand& hand);

// In-place transition used by kuhn_step and by bulk simulation.
void kuhn_apply(KuhnHand& hand, PlayerId player, KuhnAction action);

struct KuhnStepOutcome {
  KuhnHand hand;
  std::vector<double> rewards;
  bool terminal = false;
};

KuhnStepOutcome kuhn_step(const KuhnHand& hand, PlayerId player,
                          KuhnAction action);

Observation kuhn_observe(const KuhnHand& hand, PlayerId player);

class KuhnState final : public State {
 public:
  explicit KuhnState(KuhnHand hand, std::vector<double> returns = {});

  const KuhnHand& hand() const { return hand_; }

  EnvKind kind() const override { return EnvKind::kKuhn; }
  int num_players() const override { return hand_.players; }
  bool is_terminal() const override { return hand_.terminal; }
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
  KuhnHand hand_;
};

StatePtr new_kuhn(const EnvConfig& config);

// Card-independent betting tree: every public action sequence for N players.
class KuhnTree {
 public:
  struct Node {
    std::string history;
    PlayerId actor = -1;  // -1 at terminal nodes
    std::array<KuhnAction, 2> actions{};
    std::array<int, 2> child{-1, -1};
  };

  explicit KuhnTree(int players);

  int num_players() const { return players_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int id) const { return nodes_[id]; }
  // -1 when the history is not a node of this tree.
  int find(std::string_view history) const;

 private:
  int players_;
  std::vector<Node> nodes_;
};

// Behavioural strategy for every player: per (decision node, private card)
// the probabilities of the node's two legal actions, in kuhn_legal order.
class StrategyProfile {
 public:
  explicit StrategyProfile(int players);

  int num_players() const { return tree_->num_players(); }
  const KuhnTree& tree() const { return *tree_; }

  void set(int card, std::string_view history, std::array<double, 2> probs);
  void set_node(int node, int card, std::array<double, 2> probs);
  bool has(int node, int card) const;
  // Throws GameError when unset.
  const std::array<double, 2>& at(int node, int card) const;

  bool complete() const;
  // "player,card,history" keys of unset information sets.
  std::vector<std::string> missing() const;

  static StrategyProfile uniform(int players);
  // Independent uniform probabilities at every information set.
  static StrategyProfile random(int players, Rng& rng);

  // One line per information set: "player,card,history -> k:0.5,b:0.5".
  void write(std::ostream& out) const;
  static StrategyProfile read(std::istream& in, int players);

 private:
  size_t slot(int node, int card) const;

  std::shared_ptr<const KuhnTree> tree_;
  std::vector<std::array<double, 2>> probs_;
  std::vector<uint8_t> set_;
};

// Exact expectation over all (N + 1)! deals and every action sequence.
// Chips only change hands, so the last player's value is taken as minus the
// left-to-right sum of the others; the vector then sums to exactly 0.0.
std::vector<double> expected_values(const StrategyProfile& profile);

// Value of the best pure behavioural response of `player` to the other
// players' strategies, by backward induction over that player's
// information sets.
double best_response_value(const StrategyProfile& profile, PlayerId player);

// The best-responding profile itself (other players unchanged).
StrategyProfile best_response(const StrategyProfile& profile, PlayerId player);

}  // namespace colosseum

#endif  // COLOSSEUM_KUHN_H_
