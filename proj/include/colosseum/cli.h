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

#ifndef COLOSSEUM_CLI_H_
#define COLOSSEUM_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "colosseum/game.h"
#include "colosseum/match.h"
#include "colosseum/tournament.h"

namespace colosseum {

// Exit codes: 0 success, 1 runtime error, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

struct LocalTournament {
  EnvConfig env;  // players is overwritten with the seat count
  TournamentConfig tournament;
  int jobs = 1;
  bool keep_transcripts = false;
};

struct LocalTournamentOutput {
  TournamentResult result;
  std::vector<Transcript> transcripts;  // by game index, when kept
};

// Plays a tournament with in-process policies. Game i uses the streams from
// game_streams(seed, i): env seed, agent randomness and seating.
LocalTournamentOutput run_local_tournament(const LocalTournament& spec);

// Writes records.jsonl, distribution.csv, distribution.dat, pairwise.csv
// and ranked_pairs.txt into `dir`.
void write_tournament_reports(const std::string& dir,
                              const TournamentConfig& config,
                              const TournamentResult& result);

// "key=value" with value read as JSON when it parses, else as a string.
void apply_param(json& params, const std::string& assignment);

}  // namespace colosseum

#endif  // COLOSSEUM_CLI_H_
