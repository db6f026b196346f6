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

#ifndef COLOSSEUM_OPPONENT_POOL_H_
#define COLOSSEUM_OPPONENT_POOL_H_

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "colosseum/agents.h"
#include "colosseum/rng.h"

namespace colosseum {

struct PoolConfig {
  int capacity = 1;           // K; 1 is plain self-play.
  double latest_prob = 0.8;   // chance a seat faces the newest snapshot
  double win_threshold = 0.5; // learner winrate that triggers a snapshot
  int window = 100;           // games in the rolling winrate
};

struct PoolSnapshot {
  int version = 0;
  PolicyPtr policy;
  int64_t created_at_game = 0;
};

struct ManifestEntry {
  int version = 0;
  std::string policy;
  int64_t created_at_game = 0;
  bool operator==(const ManifestEntry&) const = default;
};

// Frozen past policies for fictitious self-play. Readers grab an immutable
// snapshot list, so sampling never blocks on a concurrent update.
class OpponentPool {
 public:
  explicit OpponentPool(PoolConfig config);

  const PoolConfig& config() const { return config_; }

  // Inserts a frozen copy of `policy`, evicting the oldest entry past K.
  void add(const Policy& policy);

  // Records one learner game; `won` means an outright first place.
  void record_game(bool won);
  int games_in_window() const;
  double winrate() const;
  int64_t games_played() const;

  // Snapshots the learner once the window is full and its winrate reaches
  // the threshold. Resets the window when it fires.
  bool maybe_update(const Policy& learner);

  // One snapshot index per seat: the newest with probability latest_prob,
  // otherwise uniform over the older ones. Throws GameError on an empty pool.
  std::vector<int> sample_indices(int seats, Rng& rng) const;
  std::vector<PolicyPtr> sample_opponents(int seats, Rng& rng) const;

  std::shared_ptr<const std::vector<PoolSnapshot>> snapshots() const;
  size_t size() const;

  std::vector<ManifestEntry> manifest() const;
  void write_manifest(std::ostream& out) const;

 private:
  PoolConfig config_;
  mutable std::mutex mu_;
  std::shared_ptr<const std::vector<PoolSnapshot>> entries_;
  std::deque<bool> recent_;
  int64_t games_ = 0;
  int next_version_ = 1;
};

std::vector<ManifestEntry> read_manifest(std::istream& in);

// One row of the reference experiment grid.
struct BaselineSpec {
  enum class Kind { kVsScripted, kSelfPlay, kFixed };
  std::string label;
  Kind kind = Kind::kFixed;
  double epsilon = 0.0;  // scripted opponents (kVsScripted) or self (kFixed)
  PoolConfig pool;       // used by kSelfPlay only
};

const std::vector<BaselineSpec>& baseline_grid();
const BaselineSpec& baseline(const std::string& label);

}  // namespace colosseum

#endif  // COLOSSEUM_OPPONENT_POOL_H_
