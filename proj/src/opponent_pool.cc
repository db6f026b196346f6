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

#include "colosseum/opponent_pool.h"

#include <istream>
#include <ostream>
#include <sstream>

namespace colosseum {

OpponentPool::OpponentPool(PoolConfig config)
    : config_(config),
      entries_(std::make_shared<const std::vector<PoolSnapshot>>()) {
  if (config_.capacity < 1) throw GameError("pool: capacity must be >= 1");
  if (config_.window < 1) throw GameError("pool: window must be >= 1");
  if (!(config_.latest_prob >= 0.0 && config_.latest_prob <= 1.0)) {
    throw GameError("pool: latest_prob must be in [0, 1]");
  }
}

void OpponentPool::add(const Policy& policy) {
  PoolSnapshot snap{0, policy.freeze(), 0};
  std::lock_guard<std::mutex> lock(mu_);
  snap.version = next_version_++;
  snap.created_at_game = games_;
  auto next = std::make_shared<std::vector<PoolSnapshot>>(*entries_);
  next->push_back(std::move(snap));
  if (static_cast<int>(next->size()) > config_.capacity) {
    next->erase(next->begin());
  }
  entries_ = std::move(next);
}

void OpponentPool::record_game(bool won) {
  std::lock_guard<std::mutex> lock(mu_);
  ++games_;
  recent_.push_back(won);
  if (static_cast<int>(recent_.size()) > config_.window) recent_.pop_front();
}

int OpponentPool::games_in_window() const {
  std::lock_guard<std::mutex> lock(mu_);
  return static_cast<int>(recent_.size());
}

double OpponentPool::winrate() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (recent_.empty()) return 0.0;
  int wins = 0;
  for (bool w : recent_) wins += w;
  return static_cast<double>(wins) / static_cast<double>(recent_.size());
}

int64_t OpponentPool::games_played() const {
  std::lock_guard<std::mutex> lock(mu_);
  return games_;
}

bool OpponentPool::maybe_update(const Policy& learner) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (static_cast<int>(recent_.size()) < config_.window) return false;
    int wins = 0;
    for (bool w : recent_) wins += w;
    double rate = static_cast<double>(wins) / recent_.size();
    if (rate < config_.win_threshold) return false;
    recent_.clear();
  }
  add(learner);
  return true;
}

std::shared_ptr<const std::vector<PoolSnapshot>> OpponentPool::snapshots()
    const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_;
}

size_t OpponentPool::size() const { return snapshots()->size(); }

std::vector<int> OpponentPool::sample_indices(int seats, Rng& rng) const {
  const auto entries = snapshots();
  const int n = static_cast<int>(entries->size());
  if (n == 0) throw GameError("pool: no snapshots to sample from");
  std::vector<int> out(seats);
  for (int s = 0; s < seats; ++s) {
    if (n == 1 || rng.bernoulli(config_.latest_prob)) {
      out[s] = n - 1;
    } else {
      out[s] = static_cast<int>(rng.uniform_int(n - 1));
    }
  }
  return out;
}

std::vector<PolicyPtr> OpponentPool::sample_opponents(int seats,
                                                      Rng& rng) const {
  const auto entries = snapshots();
  if (entries->empty()) throw GameError("pool: no snapshots to sample from");
  std::vector<PolicyPtr> out;
  const int n = static_cast<int>(entries->size());
  for (int s = 0; s < seats; ++s) {
    int idx = (n == 1 || rng.bernoulli(config_.latest_prob))
                  ? n - 1
                  : static_cast<int>(rng.uniform_int(n - 1));
    out.push_back((*entries)[idx].policy);
  }
  return out;
}

std::vector<ManifestEntry> OpponentPool::manifest() const {
  std::vector<ManifestEntry> out;
  for (const auto& s : *snapshots()) {
    out.push_back({s.version, s.policy->name(), s.created_at_game});
  }
  return out;
}

void OpponentPool::write_manifest(std::ostream& out) const {
  out << "pool-manifest v1\n";
  for (const auto& e : manifest()) {
    out << e.version << ' ' << e.created_at_game << ' ' << e.policy << '\n';
  }
}

std::vector<ManifestEntry> read_manifest(std::istream& in) {
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line) || line != "pool-manifest v1") {
    throw GameError("manifest line 1: expected 'pool-manifest v1'");
  }
  std::vector<ManifestEntry> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    ManifestEntry e;
    if (!(ss >> e.version >> e.created_at_game)) {
      throw GameError("manifest line " + std::to_string(lineno) +
                      ": expected '<version> <game> <policy>'");
    }
    ss >> std::ws;
    std::getline(ss, e.policy);
    if (e.policy.empty()) {
      throw GameError("manifest line " + std::to_string(lineno) +
                      ": missing policy id");
    }
    out.push_back(std::move(e));
  }
  return out;
}

const std::vector<BaselineSpec>& baseline_grid() {
  using K = BaselineSpec::Kind;
  static const std::vector<BaselineSpec> grid = {
      {"Sα", K::kVsScripted, 0.05, {}},
      {"Sβ", K::kVsScripted, 0.25, {}},
      {"Sγ", K::kVsScripted, 1.0, {}},
      {"SPα", K::kSelfPlay, 0.0, {1, 0.8, 0.5, 100}},
      {"SPβ", K::kSelfPlay, 0.0, {1, 0.8, 0.8, 100}},
      {"FSPα", K::kSelfPlay, 0.0, {4, 0.8, 0.5, 100}},
      {"FSPβ", K::kSelfPlay, 0.0, {4, 0.8, 0.8, 100}},
      {"FSPγ", K::kSelfPlay, 0.0, {16, 0.8, 0.5, 100}},
      {"FSPδ", K::kSelfPlay, 0.0, {16, 0.8, 0.8, 100}},
      {"Fα", K::kFixed, 0.05, {}},
      {"Fβ", K::kFixed, 0.25, {}},
      {"Fγ", K::kFixed, 1.0, {}},
  };
  return grid;
}

const BaselineSpec& baseline(const std::string& label) {
  for (const auto& b : baseline_grid()) {
    if (b.label == label) return b;
  }
  throw GameError("unknown baseline '" + label + "'");
}

}  // namespace colosseum
