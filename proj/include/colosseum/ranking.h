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

#ifndef COLOSSEUM_RANKING_H_
#define COLOSSEUM_RANKING_H_

#include <span>
#include <vector>

#include "colosseum/game.h"

namespace colosseum {

// Blocks of tied players, best block first.
using TieBlocks = std::vector<std::vector<PlayerId>>;

// Every member of a block gets the number of players in that block and all
// better blocks, i.e. the worst position the block spans. The blocks must
// partition {0, ..., num_players - 1}.
std::vector<int> apply_tie_rounding(const TieBlocks& blocks, int num_players);

// Higher score is better; exactly equal scores form one block.
TieBlocks blocks_by_score(std::span<const double> scores);

std::vector<int> ranks_by_score(std::span<const double> scores);

// Rank 1 held by this player alone.
bool is_outright_win(const RankRecord& record, PlayerId player);

}  // namespace colosseum

#endif  // COLOSSEUM_RANKING_H_
