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

#include "colosseum/match.h"

#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace colosseum {

namespace {

GameError line_error(int line, const std::string& what) {
  return GameError("transcript line " + std::to_string(line) + ": " + what);
}

}  // namespace

json transcript_header_json(const Transcript& t) {
  return {{"type", "transcript"},
          {"v", kTranscriptVersion},
          {"match_id", t.match_id},
          {"config", to_json(t.config)},
          {"seats", t.seats}};
}

json transcript_step_json(const TranscriptStep& step) {
  json actions = json::object();
  for (const auto& [p, a] : step.actions) actions[std::to_string(p)] = a;
  return {{"type", "step"},
          {"turn", step.turn},
          {"actions", actions},
          {"substituted", step.substituted}};
}

json transcript_result_json(const RankRecord& record) {
  json j = to_json(record);
  j["type"] = "result";
  return j;
}

void write_transcript(std::ostream& out, const Transcript& t) {
  out << transcript_header_json(t).dump() << '\n';
  for (const auto& s : t.steps) out << transcript_step_json(s).dump() << '\n';
  if (t.result) {
    out << transcript_result_json(*t.result).dump() << '\n';
  } else {
    json j = {{"type", "aborted"}, {"detail", t.abort_reason}};
    out << j.dump() << '\n';
  }
}

std::string transcript_to_string(const Transcript& t) {
  std::ostringstream ss;
  write_transcript(ss, t);
  return ss.str();
}

Transcript read_transcript(std::istream& in) {
  Transcript t;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  bool closed = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (closed) throw line_error(lineno, "content after the final line");
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw line_error(lineno, "not a JSON object");
    }
    const std::string type = j.value("type", "");
    try {
      if (!have_header) {
        if (type != "transcript") throw line_error(lineno, "missing header");
        if (j.at("v").get<int>() != kTranscriptVersion) {
          throw line_error(lineno, "unsupported version " + j["v"].dump());
        }
        t.match_id = j.at("match_id").get<std::string>();
        t.config = env_config_from_json(j.at("config"));
        t.seats = j.at("seats").get<std::vector<std::string>>();
        have_header = true;
      } else if (type == "step") {
        TranscriptStep s;
        s.turn = j.at("turn").get<int>();
        if (s.turn != static_cast<int>(t.steps.size())) {
          throw line_error(lineno, "turn " + std::to_string(s.turn) +
                                       " out of sequence");
        }
        for (const auto& [k, v] : j.at("actions").items()) {
          size_t used = 0;
          int p = std::stoi(k, &used);
          if (used != k.size()) throw line_error(lineno, "bad seat " + k);
          s.actions[p] = v.get<Action>();
        }
        s.substituted = j.value("substituted", std::vector<PlayerId>{});
        t.steps.push_back(std::move(s));
      } else if (type == "result") {
        t.result = rank_record_from_json(j);
        closed = true;
      } else if (type == "aborted") {
        t.abort_reason = j.value("detail", "");
        closed = true;
      } else {
        throw line_error(lineno, "unexpected type '" + type + "'");
      }
    } catch (const std::exception& e) {
      if (std::string_view(e.what()).starts_with("transcript line")) throw;
      throw line_error(lineno, e.what());
    }
  }
  if (!have_header) throw line_error(lineno + 1, "empty transcript");
  if (!closed) throw line_error(lineno + 1, "missing result line");
  return t;
}

ReplayOutcome replay_transcript(const Transcript& t, bool render) {
  ReplayOutcome out;
  StatePtr state = new_game(t.config);
  if (render) out.frames.push_back(state->render());
  for (size_t i = 0; i < t.steps.size(); ++i) {
    const int lineno = static_cast<int>(i) + 2;
    if (state->is_terminal()) throw line_error(lineno, "game already over");
    try {
      state = state->step(t.steps[i].actions).next_state;
    } catch (const GameError& e) {
      throw line_error(lineno, e.what());
    }
    if (render) out.frames.push_back(state->render());
  }
  const int end_line = static_cast<int>(t.steps.size()) + 2;
  if (!t.result) {
    throw line_error(end_line, "match was aborted: " + t.abort_reason);
  }
  if (!state->is_terminal()) {
    throw line_error(end_line, "game not over after the last step");
  }
  out.record = state->rankings();
  if (!(out.record == *t.result)) {
    throw line_error(end_line, "recorded result " +
                                   to_json(*t.result).dump() +
                                   " differs from replay " +
                                   to_json(out.record).dump());
  }
  out.final_state = state;
  return out;
}

MatchResult play_match(const EnvConfig& config,
                       std::span<const PolicyPtr> seats, const Rng& agent_rng,
                       const std::string& match_id) {
  if (static_cast<int>(seats.size()) != config.players) {
    throw GameError("play_match: " + std::to_string(seats.size()) +
                    " policies for " + std::to_string(config.players) +
                    " players");
  }
  MatchResult result;
  Transcript& t = result.transcript;
  t.match_id = match_id;
  t.config = config;
  for (const auto& s : seats) t.seats.push_back(s->name());

  std::vector<Rng> rngs;
  for (int p = 0; p < config.players; ++p) rngs.push_back(agent_rng.derive(p));

  StatePtr state = new_game(config);
  int turn = 0;
  while (!state->is_terminal()) {
    TranscriptStep step;
    step.turn = turn;
    for (PlayerId p : state->current_players()) {
      const auto legal = state->legal_actions(p);
      step.actions[p] = seats[p]->act(state->observe(p), legal, rngs[p]);
    }
    state = state->step(step.actions).next_state;
    t.steps.push_back(std::move(step));
    ++turn;
  }
  result.record = state->rankings();
  t.result = result.record;
  return result;
}

}  // namespace colosseum
