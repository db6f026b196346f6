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

#ifndef COLOSSEUM_TOURNAMENT_H_
#define COLOSSEUM_TOURNAMENT_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "colosseum/game.h"
#include "colosseum/rng.h"

namespace colosseum {

// Agents are identified by their roster index throughout.
using AgentId = int;

struct TournamentConfig {
  std::vector<std::string> roster;
  int64_t games = 25000;
  int seats = 4;
  uint64_t seed = 0;
};

json to_json(const TournamentConfig& config);
TournamentConfig tournament_config_from_json(const json& j);

// Display labels; repeated roster names get a "#k" suffix so every label is
// unique.
std::vector<std::string> agent_labels(const std::vector<std::string>& roster);

// A uniformly random `seats`-subset of the roster in random seat order.
std::vector<AgentId> sample_seating(int roster_size, int seats, Rng& rng);

struct GameRecord {
  int64_t index = 0;
  std::vector<AgentId> seating;  // seat -> agent
  RankRecord result;             // indexed by seat

  bool operator==(const GameRecord&) const = default;
};

class PairwiseTable {
 public:
  explicit PairwiseTable(int agents = 0);

  void add(const GameRecord& record);

  int size() const { return n_; }
  // Games in which a finished strictly ahead of b.
  int64_t wins(AgentId a, AgentId b) const { return wins_[a * n_ + b]; }
  int64_t meetings(AgentId a, AgentId b) const { return meets_[a * n_ + b]; }
  void set(AgentId a, AgentId b, int64_t wins_ab, int64_t wins_ba,
           int64_t meetings);
  int64_t total_meetings() const;  // over unordered pairs

 private:
  int n_;
  std::vector<int64_t> wins_;
  std::vector<int64_t> meets_;
};

struct DistributionRow {
  AgentId agent = 0;
  std::vector<int64_t> counts;  // counts[r - 1] = finishes at rank r

  bool operator==(const DistributionRow&) const = default;
};

// One row per roster agent, most first places first, then by agent id.
std::vector<DistributionRow> ranking_distribution(
    std::span<const GameRecord> records, int roster_size, int seats);

struct RankedPairsResult {
  std::vector<AgentId> order;
  std::vector<std::pair<AgentId, AgentId>> locked;
  std::vector<std::pair<AgentId, AgentId>> skipped;
};

// Tideman's ranked pairs over win fractions. Pairs at exactly 1/2 or that
// never met add no edge. Equal margins go to the pair with more meetings,
// then the lexicographically smaller (a, b). Agents left unordered by the
// locked graph are placed by `first_places` (descending), then id.
RankedPairsResult ranked_pairs(const PairwiseTable& table,
                               std::span<const int64_t> first_places = {});

struct GameStreams {
  Rng seating;
  uint64_t env_seed;
  Rng agents;
};

// Per-game random streams, independent of the order games are played in.
GameStreams game_streams(uint64_t seed, int64_t index);

// Resolves one seated game. `seating[s]` is the agent in seat s.
using MatchRunner = std::function<RankRecord(
    const std::vector<AgentId>& seating, int64_t index,
    const GameStreams& streams)>;

class TournamentError : public GameError {
 public:
  TournamentError(int64_t index, const std::string& what)
      : GameError("game " + std::to_string(index) + ": " + what),
        index_(index) {}
  int64_t index() const { return index_; }

 private:
  int64_t index_;
};

struct TournamentResult {
  std::vector<GameRecord> records;
  PairwiseTable table;
  std::vector<DistributionRow> distribution;
  RankedPairsResult ranking;
};

// Aggregates finished records into the table, distribution and order.
TournamentResult summarize(const TournamentConfig& config,
                           std::vector<GameRecord> records);

// Plays config.games games on `jobs` threads. The result does not depend on
// `jobs`.
TournamentResult run_tournament(const TournamentConfig& config,
                                const MatchRunner& runner, int jobs = 1);

// "{A, B, C}"
std::string brace_list(const std::vector<std::string>& labels,
                       std::span<const AgentId> order);

// Records file: a header line with the config, then one JSON line per game.
void write_records(std::ostream& out, const TournamentConfig& config,
                   std::span<const GameRecord> records);
std::pair<TournamentConfig, std::vector<GameRecord>> read_records(
    std::istream& in);

void write_distribution_csv(std::ostream& out,
                            const std::vector<std::string>& labels,
                            std::span<const DistributionRow> rows, int seats);
std::vector<std::pair<std::string, std::vector<int64_t>>>
read_distribution_csv(std::istream& in);

// Whitespace-separated rank counts per agent for a stacked-bar chart.
void write_plot_data(std::ostream& out, const std::vector<std::string>& labels,
                     std::span<const DistributionRow> rows, int seats);

void write_pairwise_csv(std::ostream& out,
                        const std::vector<std::string>& labels,
                        const PairwiseTable& table);

}  // namespace colosseum

#endif  // COLOSSEUM_TOURNAMENT_H_
