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

#include "colosseum/kuhn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "colosseum/ranking.h"

namespace colosseum {

namespace {

void finish(KuhnHand& h) {
  h.terminal = true;
  std::vector<PlayerId> live;
  for (int p = 0; p < h.players; ++p) {
    if (!h.folded[p]) live.push_back(p);
  }
  PlayerId winner = *std::max_element(
      live.begin(), live.end(),
      [&](PlayerId a, PlayerId b) { return h.cards[a] < h.cards[b]; });
  h.payoff.assign(h.players, 0.0);
  for (int p = 0; p < h.players; ++p) {
    h.payoff[p] = (p == winner ? h.pot : 0) - h.bets[p];
  }
}

std::vector<std::vector<int>> all_deals(int players) {
  std::vector<int> deck(players + 1);
  std::iota(deck.begin(), deck.end(), 0);
  std::vector<std::vector<int>> deals;
  do {
    deals.emplace_back(deck.begin(), deck.begin() + players);
  } while (std::next_permutation(deck.begin(), deck.end()));
  return deals;
}

struct Evaluator {
  const StrategyProfile& profile;
  const KuhnTree& tree;
  // Optional accumulation of counterfactual action values for one player at
  // one history length.
  PlayerId target = -1;
  size_t depth = 0;
  std::vector<std::array<double, 2>>* q = nullptr;

  // Returns expected payoffs below `node` for the deal in `hand`.
  std::vector<double> walk(const KuhnHand& hand, int node_id,
                           double reach_others) {
    const auto& node = tree.node(node_id);
    if (node.actor < 0) return hand.payoff;
    const PlayerId actor = node.actor;
    const int card = hand.cards[actor];
    const auto& probs = profile.at(node_id, card);
    std::vector<double> value(hand.players, 0.0);
    for (int i = 0; i < 2; ++i) {
      KuhnHand next = hand;
      kuhn_apply(next, actor, node.actions[i]);
      double r = actor == target ? reach_others : reach_others * probs[i];
      if (r == 0.0 && q == nullptr) continue;
      auto child = walk(next, node.child[i], r);
      if (q && actor == target && node.history.size() == depth) {
        (*q)[node_id * (hand.players + 1) + card][i] +=
            reach_others * child[target];
      }
      for (int p = 0; p < hand.players; ++p) value[p] += probs[i] * child[p];
    }
    return value;
  }
};

void require_exact(const StrategyProfile& profile) {
  if (profile.num_players() > kKuhnMaxExactPlayers) {
    throw GameError("kuhn: exact evaluation supports at most 10 players");
  }
  if (!profile.complete()) {
    auto missing = profile.missing();
    throw GameError("kuhn: incomplete profile, missing " + missing.front() +
                    " and " + std::to_string(missing.size() - 1) + " more");
  }
}

}  // namespace

char kuhn_action_letter(KuhnAction action) {
  switch (action) {
    case kCheck:
      return 'k';
    case kBet:
      return 'b';
    case kCall:
      return 'c';
    case kFold:
      return 'f';
  }
  return '?';
}

KuhnAction kuhn_action_from_letter(char letter) {
  switch (letter) {
    case 'k':
      return kCheck;
    case 'b':
      return kBet;
    case 'c':
      return kCall;
    case 'f':
      return kFold;
  }
  throw GameError(std::string("kuhn: unknown action letter '") + letter + "'");
}

std::string KuhnHand::history_string() const {
  std::string s;
  for (KuhnAction a : history) s.push_back(kuhn_action_letter(a));
  return s;
}

KuhnHand kuhn_deal(int players, const std::vector<int>& cards) {
  if (players < 2) throw GameError("kuhn: need at least 2 players");
  if (static_cast<int>(cards.size()) != players) {
    throw GameError("kuhn: need one card per player");
  }
  std::vector<uint8_t> used(players + 1, 0);
  for (int c : cards) {
    if (c < 0 || c > players || used[c]) {
      throw GameError("kuhn: cards must be distinct values in [0, N]");
    }
    used[c] = 1;
  }
  KuhnHand h;
  h.players = players;
  h.cards = cards;
  h.undealt = static_cast<int>(std::find(used.begin(), used.end(), 0) - used.begin());
  h.bets.assign(players, kKuhnAnte);
  h.pot = kKuhnAnte * players;
  h.folded.assign(players, 0);
  return h;
}

KuhnHand kuhn_new(int players, Rng& rng) {
  if (players < 2) throw GameError("kuhn: need at least 2 players");
  std::vector<int> deck(players + 1);
  std::iota(deck.begin(), deck.end(), 0);
  rng.shuffle(deck);
  deck.pop_back();
  return kuhn_deal(players, deck);
}

std::array<KuhnAction, 2> kuhn_legal(const KuhnHand& hand) {
  if (hand.terminal) throw GameError("kuhn: hand is over");
  if (hand.bettor < 0) return {kCheck, kBet};
  return {kCall, kFold};
}

void kuhn_apply(KuhnHand& h, PlayerId player, KuhnAction action) {
  if (h.terminal) throw GameError("kuhn: hand is over");
  if (player != h.to_act) {
    throw IllegalActionError(player, "kuhn: acting out of turn");
  }
  const auto legal = kuhn_legal(h);
  if (action != legal[0] && action != legal[1]) {
    throw IllegalActionError(player, "kuhn: illegal action");
  }
  h.history.push_back(action);
  switch (action) {
    case kCheck:
      if (player == h.players - 1) {
        finish(h);
        return;
      }
      break;
    case kBet:
      h.bettor = player;
      h.bets[player] += kKuhnBet;
      h.pot += kKuhnBet;
      break;
    case kCall:
      h.bets[player] += kKuhnBet;
      h.pot += kKuhnBet;
      break;
    case kFold:
      h.folded[player] = 1;
      break;
  }
  PlayerId next = (player + 1) % h.players;
  if (h.bettor >= 0 && next == h.bettor) {
    finish(h);
    return;
  }
  h.to_act = next;
}

KuhnStepOutcome kuhn_step(const KuhnHand& hand, PlayerId player,
                          KuhnAction action) {
  KuhnStepOutcome out{hand, std::vector<double>(hand.players, 0.0), false};
  kuhn_apply(out.hand, player, action);
  if (out.hand.terminal) {
    out.rewards = out.hand.payoff;
    out.terminal = true;
  }
  return out;
}

Observation kuhn_observe(const KuhnHand& hand, PlayerId player) {
  if (player < 0 || player >= hand.players) {
    throw GameError("kuhn: unknown player");
  }
  return {{"self", player},
          {"card", hand.cards[player]},
          {"history", hand.history_string()},
          {"pot", hand.pot},
          {"bets", hand.bets},
          {"to_act", hand.terminal ? json(nullptr) : json(hand.to_act)},
          {"num_players", hand.players},
          {"terminal", hand.terminal}};
}

KuhnState::KuhnState(KuhnHand hand, std::vector<double> returns)
    : hand_(std::move(hand)) {
  returns_ = returns.empty() ? std::vector<double>(hand_.players, 0.0)
                             : std::move(returns);
}

std::vector<PlayerId> KuhnState::current_players() const {
  if (hand_.terminal) throw GameError("current_players on terminal state");
  return {hand_.to_act};
}

std::vector<Action> KuhnState::legal_actions(PlayerId player) const {
  if (hand_.terminal) throw GameError("legal_actions on terminal state");
  if (player != hand_.to_act) throw GameError("kuhn: player is not to act");
  auto legal = kuhn_legal(hand_);
  return {legal[0], legal[1]};
}

StepResult KuhnState::step(const JointAction& actions) const {
  validate_joint_action(actions);
  const auto& [player, action] = *actions.begin();
  auto out = kuhn_step(hand_, player, static_cast<KuhnAction>(action));
  std::vector<double> returns = returns_;
  for (int p = 0; p < hand_.players; ++p) returns[p] += out.rewards[p];
  auto next = std::make_shared<KuhnState>(std::move(out.hand), std::move(returns));
  return {next, std::move(out.rewards), out.terminal, next->eliminated()};
}

Observation KuhnState::observe(PlayerId player) const {
  return kuhn_observe(hand_, player);
}

RankRecord KuhnState::rankings() const {
  if (!hand_.terminal) throw GameError("rankings on non-terminal state");
  return {ranks_by_score(hand_.payoff), returns_};
}

std::vector<PlayerId> KuhnState::eliminated() const {
  std::vector<PlayerId> out;
  for (int p = 0; p < hand_.players; ++p) {
    if (hand_.terminal || hand_.folded[p]) out.push_back(p);
  }
  return out;
}

json KuhnState::to_json() const {
  return {{"schema", "colosseum.state"},
          {"v", kStateSchemaVersion},
          {"env", "kuhn"},
          {"players", hand_.players},
          {"cards", hand_.cards},
          {"undealt", hand_.undealt},
          {"bets", hand_.bets},
          {"pot", hand_.pot},
          {"history", hand_.history_string()},
          {"folded", hand_.folded},
          {"to_act", hand_.to_act},
          {"bettor", hand_.bettor},
          {"terminal", hand_.terminal},
          {"returns", returns_}};
}

std::string KuhnState::action_to_string(Action action) const {
  static const char* kNames[] = {"check", "bet", "call", "fold"};
  if (action < 0 || action > 3) return "?";
  return kNames[action];
}

std::string KuhnState::render() const {
  std::ostringstream out;
  out << "history '" << hand_.history_string() << "' pot " << hand_.pot;
  if (hand_.terminal) {
    out << " cards";
    for (int c : hand_.cards) out << ' ' << c;
  }
  out << "\n";
  return out.str();
}

StatePtr new_kuhn(const EnvConfig& config) {
  if (config.params.contains("cards")) {
    return std::make_shared<KuhnState>(kuhn_deal(
        config.players, config.params["cards"].get<std::vector<int>>()));
  }
  Rng rng = Rng(config.seed).derive("deal");
  return std::make_shared<KuhnState>(kuhn_new(config.players, rng));
}

KuhnTree::KuhnTree(int players) : players_(players) {
  if (players < 2) throw GameError("kuhn: need at least 2 players");
  std::vector<int> cards(players);
  std::iota(cards.begin(), cards.end(), 0);
  // Cards never influence whose turn it is, so one deal spans the tree.
  struct Item {
    KuhnHand hand;
    int id;
  };
  std::vector<Item> stack;
  nodes_.push_back({});
  stack.push_back({kuhn_deal(players, cards), 0});
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    nodes_[item.id].history = item.hand.history_string();
    if (item.hand.terminal) continue;
    nodes_[item.id].actor = item.hand.to_act;
    nodes_[item.id].actions = kuhn_legal(item.hand);
    for (int i = 0; i < 2; ++i) {
      KuhnHand next = item.hand;
      kuhn_apply(next, item.hand.to_act, nodes_[item.id].actions[i]);
      int child = static_cast<int>(nodes_.size());
      nodes_.push_back({});
      nodes_[item.id].child[i] = child;
      stack.push_back({std::move(next), child});
    }
  }
}

int KuhnTree::find(std::string_view history) const {
  int id = 0;
  for (char ch : history) {
    const auto& n = nodes_[id];
    if (n.actor < 0) return -1;
    KuhnAction a;
    try {
      a = kuhn_action_from_letter(ch);
    } catch (const GameError&) {
      return -1;
    }
    if (a == n.actions[0]) {
      id = n.child[0];
    } else if (a == n.actions[1]) {
      id = n.child[1];
    } else {
      return -1;
    }
  }
  return id;
}

StrategyProfile::StrategyProfile(int players)
    : tree_(std::make_shared<const KuhnTree>(players)) {
  probs_.assign(tree_->nodes().size() * (players + 1), {0.0, 0.0});
  set_.assign(probs_.size(), 0);
}

size_t StrategyProfile::slot(int node, int card) const {
  if (node < 0 || node >= static_cast<int>(tree_->nodes().size()) ||
      tree_->node(node).actor < 0) {
    throw GameError("kuhn profile: not a decision node");
  }
  if (card < 0 || card > num_players()) {
    throw GameError("kuhn profile: card out of range");
  }
  return static_cast<size_t>(node) * (num_players() + 1) + card;
}

void StrategyProfile::set(int card, std::string_view history,
                          std::array<double, 2> probs) {
  int node = tree_->find(history);
  if (node < 0) {
    throw GameError("kuhn profile: unknown history '" + std::string(history) + "'");
  }
  set_node(node, card, probs);
}

void StrategyProfile::set_node(int node, int card, std::array<double, 2> probs) {
  if (probs[0] < 0.0 || probs[1] < 0.0 ||
      std::abs(probs[0] + probs[1] - 1.0) > 1e-12) {
    throw GameError("kuhn profile: probabilities must be a distribution");
  }
  size_t s = slot(node, card);
  probs_[s] = probs;
  set_[s] = 1;
}

bool StrategyProfile::has(int node, int card) const { return set_[slot(node, card)]; }

const std::array<double, 2>& StrategyProfile::at(int node, int card) const {
  size_t s = slot(node, card);
  if (!set_[s]) {
    throw GameError("kuhn profile: missing " +
                    std::to_string(tree_->node(node).actor) + "," +
                    std::to_string(card) + "," + tree_->node(node).history);
  }
  return probs_[s];
}

bool StrategyProfile::complete() const { return missing().empty(); }

std::vector<std::string> StrategyProfile::missing() const {
  std::vector<std::string> out;
  for (int id = 0; id < static_cast<int>(tree_->nodes().size()); ++id) {
    const auto& n = tree_->node(id);
    if (n.actor < 0) continue;
    for (int card = 0; card <= num_players(); ++card) {
      if (!set_[slot(id, card)]) {
        out.push_back(std::to_string(n.actor) + "," + std::to_string(card) +
                      "," + n.history);
      }
    }
  }
  return out;
}

StrategyProfile StrategyProfile::uniform(int players) {
  StrategyProfile prof(players);
  for (int id = 0; id < static_cast<int>(prof.tree().nodes().size()); ++id) {
    if (prof.tree().node(id).actor < 0) continue;
    for (int card = 0; card <= players; ++card) prof.set_node(id, card, {0.5, 0.5});
  }
  return prof;
}

StrategyProfile StrategyProfile::random(int players, Rng& rng) {
  StrategyProfile prof(players);
  for (int id = 0; id < static_cast<int>(prof.tree().nodes().size()); ++id) {
    if (prof.tree().node(id).actor < 0) continue;
    for (int card = 0; card <= players; ++card) {
      double p = rng.uniform();
      prof.set_node(id, card, {p, 1.0 - p});
    }
  }
  return prof;
}

void StrategyProfile::write(std::ostream& out) const {
  char buf[64];
  for (int id = 0; id < static_cast<int>(tree_->nodes().size()); ++id) {
    const auto& n = tree_->node(id);
    if (n.actor < 0) continue;
    for (int card = 0; card <= num_players(); ++card) {
      size_t s = slot(id, card);
      if (!set_[s]) continue;
      out << n.actor << ',' << card << ',' << n.history << " -> ";
      for (int i = 0; i < 2; ++i) {
        std::snprintf(buf, sizeof(buf), "%c:%.17g", kuhn_action_letter(n.actions[i]),
                      probs_[s][i]);
        out << (i ? "," : "") << buf;
      }
      out << "\n";
    }
  }
}

StrategyProfile StrategyProfile::read(std::istream& in, int players) {
  StrategyProfile prof(players);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw GameError("kuhn profile line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    size_t arrow = line.find("->");
    size_t arrow_len = 2;
    if (arrow == std::string::npos) {
      arrow = line.find("\xE2\x86\x92");  // U+2192
      arrow_len = 3;
    }
    if (arrow == std::string::npos) fail("missing '->'");
    std::string key = line.substr(0, arrow);
    std::string rhs = line.substr(arrow + arrow_len);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    size_t c1 = key.find(','), c2 = key.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) fail("bad key");
    int player = 0, card = 0;
    try {
      player = std::stoi(key.substr(0, c1));
      card = std::stoi(key.substr(c1 + 1, c2 - c1 - 1));
    } catch (const std::exception&) {
      fail("bad player or card");
    }
    std::string history = key.substr(c2 + 1);
    int node = prof.tree().find(history);
    if (node < 0 || prof.tree().node(node).actor < 0) fail("unknown history");
    const auto& n = prof.tree().node(node);
    if (n.actor != player) fail("player does not act at this history");
    std::array<double, 2> probs{-1.0, -1.0};
    std::istringstream rs(rhs);
    std::string item;
    while (std::getline(rs, item, ',')) {
      item.erase(0, item.find_first_not_of(' '));
      if (item.size() < 3 || item[1] != ':') fail("bad action entry '" + item + "'");
      KuhnAction a;
      try {
        a = kuhn_action_from_letter(item[0]);
      } catch (const GameError& e) {
        fail(e.what());
      }
      int idx = a == n.actions[0] ? 0 : a == n.actions[1] ? 1 : -1;
      if (idx < 0) fail("action not legal at this history");
      try {
        probs[idx] = std::stod(item.substr(2));
      } catch (const std::exception&) {
        fail("bad probability");
      }
    }
    if (probs[0] < 0.0 || probs[1] < 0.0) fail("both actions need a probability");
    try {
      prof.set_node(node, card, probs);
    } catch (const GameError& e) {
      fail(e.what());
    }
  }
  return prof;
}

std::vector<double> expected_values(const StrategyProfile& profile) {
  require_exact(profile);
  const int n = profile.num_players();
  const auto deals = all_deals(n);
  std::vector<double> total(n, 0.0);
  Evaluator ev{profile, profile.tree()};
  for (const auto& deal : deals) {
    auto v = ev.walk(kuhn_deal(n, deal), 0, 1.0);
    for (int p = 0; p < n; ++p) total[p] += v[p];
  }
  for (double& t : total) t /= static_cast<double>(deals.size());
  double others = 0.0;
  for (int p = 0; p + 1 < n; ++p) others += total[p];
  total[n - 1] = -others;
  return total;
}

StrategyProfile best_response(const StrategyProfile& profile, PlayerId player) {
  require_exact(profile);
  const int n = profile.num_players();
  if (player < 0 || player >= n) throw GameError("kuhn: unknown player");
  const auto& tree = profile.tree();
  const auto deals = all_deals(n);
  size_t max_depth = 0;
  for (const auto& node : tree.nodes()) {
    if (node.actor == player) max_depth = std::max(max_depth, node.history.size());
  }
  StrategyProfile br = profile;
  // Perfect recall: fixing the deeper information sets first makes each
  // shallower choice a plain maximisation.
  for (size_t depth = max_depth + 1; depth-- > 0;) {
    std::vector<std::array<double, 2>> q(tree.nodes().size() * (n + 1), {0.0, 0.0});
    Evaluator ev{br, tree, player, depth, &q};
    bool any = false;
    for (const auto& node : tree.nodes()) {
      any |= node.actor == player && node.history.size() == depth;
    }
    if (!any) continue;
    for (const auto& deal : deals) ev.walk(kuhn_deal(n, deal), 0, 1.0);
    for (int id = 0; id < static_cast<int>(tree.nodes().size()); ++id) {
      const auto& node = tree.node(id);
      if (node.actor != player || node.history.size() != depth) continue;
      for (int card = 0; card <= n; ++card) {
        const auto& qa = q[id * (n + 1) + card];
        br.set_node(id, card, qa[0] >= qa[1] ? std::array{1.0, 0.0}
                                             : std::array{0.0, 1.0});
      }
    }
  }
  return br;
}

double best_response_value(const StrategyProfile& profile, PlayerId player) {
  return expected_values(best_response(profile, player))[player];
}

}  // namespace colosseum
