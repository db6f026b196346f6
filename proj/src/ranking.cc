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

#include "colosseum/ranking.h"

#include <algorithm>
#include <numeric>

namespace colosseum {

std::vector<int> apply_tie_rounding(const TieBlocks& blocks, int num_players) {
  if (blocks.empty()) throw GameError("tie rounding: empty partition");
  std::vector<int> ranks(num_players, 0);
  int through = 0;
  for (const auto& block : blocks) {
    if (block.empty()) throw GameError("tie rounding: empty block");
    through += static_cast<int>(block.size());
    for (PlayerId p : block) {
      if (p < 0 || p >= num_players) {
        throw GameError("tie rounding: player out of range");
      }
      if (ranks[p] != 0) throw GameError("tie rounding: player listed twice");
      ranks[p] = through;
    }
  }
  if (through != num_players) {
    throw GameError("tie rounding: partition does not cover all players");
  }
  return ranks;
}

TieBlocks blocks_by_score(std::span<const double> scores) {
  std::vector<PlayerId> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](PlayerId a, PlayerId b) { return scores[a] > scores[b]; });
  TieBlocks blocks;
  for (size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || scores[order[i]] != scores[order[i - 1]]) blocks.emplace_back();
    blocks.back().push_back(order[i]);
  }
  return blocks;
}

std::vector<int> ranks_by_score(std::span<const double> scores) {
  return apply_tie_rounding(blocks_by_score(scores),
                            static_cast<int>(scores.size()));
}

bool is_outright_win(const RankRecord& record, PlayerId player) {
  if (record.ranks.at(player) != 1) return false;
  return std::count(record.ranks.begin(), record.ranks.end(), 1) == 1;
}

}  // namespace colosseum
