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

#ifndef COLOSSEUM_MATCH_H_
#define COLOSSEUM_MATCH_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colosseum/agents.h"
#include "colosseum/game.h"
#include "colosseum/rng.h"

namespace colosseum {

inline constexpr int kTranscriptVersion = 1;

struct TranscriptStep {
  int turn = 0;
  JointAction actions;
  // Seats whose action was chosen by the server instead of the agent.
  std::vector<PlayerId> substituted;

  bool operator==(const TranscriptStep&) const = default;
};

// Everything needed to re-simulate a match: the full config (seed
// included) and every joint action in order.
struct Transcript {
  std::string match_id;
  EnvConfig config;
  std::vector<std::string> seats;
  std::vector<TranscriptStep> steps;
  std::optional<RankRecord> result;  // empty when the match was aborted
  std::string abort_reason;
};

json transcript_header_json(const Transcript& t);
json transcript_step_json(const TranscriptStep& step);
json transcript_result_json(const RankRecord& record);

// One JSON object per line: header, steps, then a result or abort line.
void write_transcript(std::ostream& out, const Transcript& t);
std::string transcript_to_string(const Transcript& t);
// Throws GameError naming the first offending line.
Transcript read_transcript(std::istream& in);

struct ReplayOutcome {
  RankRecord record;
  StatePtr final_state;
  std::vector<std::string> frames;  // initial state plus one per step
};

// Re-simulates the transcript. Throws GameError if an action is illegal,
// the game ends early or late, or the recomputed result differs from the
// recorded one.
ReplayOutcome replay_transcript(const Transcript& t, bool render = false);

struct MatchResult {
  RankRecord record;
  Transcript transcript;
};

// Plays one local match. Seat p draws its randomness from
// agent_rng.derive(p); the environment uses config.seed.
MatchResult play_match(const EnvConfig& config,
                       std::span<const PolicyPtr> seats, const Rng& agent_rng,
                       const std::string& match_id = "local");

}  // namespace colosseum

#endif  // COLOSSEUM_MATCH_H_
