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

#include "colosseum/protocol.h"

#include <initializer_list>

namespace colosseum {

namespace {

using Kind = json::value_t;

void require(const json& j, const char* field,
             std::initializer_list<Kind> kinds) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw ProtocolError(std::string(error_code::kMalformed),
                        "missing field '" + std::string(field) + "'");
  }
  for (Kind k : kinds) {
    if (it->type() == k) return;
  }
  throw ProtocolError(std::string(error_code::kMalformed),
                      "field '" + std::string(field) + "' has the wrong type");
}

constexpr std::initializer_list<Kind> kInt = {Kind::number_integer,
                                              Kind::number_unsigned};
constexpr std::initializer_list<Kind> kNumber = {
    Kind::number_integer, Kind::number_unsigned, Kind::number_float};

}  // namespace

json parse_message(std::string_view line) {
  if (line.size() > kMaxMessageBytes) {
    throw ProtocolError(std::string(error_code::kMalformed),
                        "message too long");
  }
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) {
    throw ProtocolError(std::string(error_code::kMalformed), "invalid JSON");
  }
  if (!j.is_object()) {
    throw ProtocolError(std::string(error_code::kMalformed),
                        "message is not an object");
  }
  require(j, "type", {Kind::string});
  const std::string type = j["type"];
  if (type == "hello") {
    require(j, "v", kInt);
  } else if (type == "login") {
    require(j, "name", {Kind::string});
  } else if (type == "queue") {
    require(j, "env", {Kind::string});
  } else if (type == "match_assigned") {
    require(j, "match_id", {Kind::string});
    require(j, "seat", kInt);
    require(j, "env", {Kind::string});
    require(j, "config", {Kind::object});
  } else if (type == "observation") {
    require(j, "turn", kInt);
    require(j, "obs", {Kind::object, Kind::array, Kind::string, Kind::null});
    require(j, "legal", {Kind::array});
    require(j, "reward", kNumber);
    require(j, "terminal", {Kind::boolean});
  } else if (type == "action") {
    require(j, "turn", kInt);
    require(j, "value", kInt);
  } else if (type == "result") {
    require(j, "ranks", {Kind::array});
    require(j, "total_reward", {Kind::array});
  } else if (type == "error") {
    require(j, "code", {Kind::string});
    require(j, "detail", {Kind::string});
  } else {
    throw ProtocolError(std::string(error_code::kMalformed),
                        "unknown message type '" + type + "'");
  }
  return j;
}

std::string encode_message(const json& message) {
  return message.dump() + "\n";
}

json make_hello() { return {{"type", "hello"}, {"v", kProtocolVersion}}; }

json make_login(const std::string& name) {
  return {{"type", "login"}, {"name", name}, {"v", kProtocolVersion}};
}

json make_queue(const std::string& queue) {
  return {{"type", "queue"}, {"env", queue}};
}

json make_match_assigned(const std::string& match_id, int seat,
                         const std::string& env, const json& config) {
  return {{"type", "match_assigned"},
          {"match_id", match_id},
          {"seat", seat},
          {"env", env},
          {"config", config}};
}

json make_observation(int turn, const Observation& obs,
                      const std::vector<Action>& legal, double reward,
                      bool terminal) {
  return {{"type", "observation"}, {"turn", turn},     {"obs", obs},
          {"legal", legal},        {"reward", reward}, {"terminal", terminal}};
}

json make_action(int turn, Action value) {
  return {{"type", "action"}, {"turn", turn}, {"value", value}};
}

json make_result(const RankRecord& record, int seat,
                 const std::vector<int>& substitutions, bool aborted) {
  return {{"type", "result"},
          {"ranks", record.ranks},
          {"total_reward", record.total_reward},
          {"seat", seat},
          {"substitutions", substitutions},
          {"aborted", aborted}};
}

json make_error(std::string_view code, const std::string& detail) {
  return {{"type", "error"}, {"code", code}, {"detail", detail}};
}

json public_config(const EnvConfig& config) {
  json params = config.params;
  if (config.env == EnvKind::kKuhn && params.is_object()) {
    params.erase("cards");
  }
  return {{"env", env_name(config.env)},
          {"players", config.players},
          {"params", params}};
}

}  // namespace colosseum
