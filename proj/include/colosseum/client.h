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

#ifndef COLOSSEUM_CLIENT_H_
#define COLOSSEUM_CLIENT_H_

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "colosseum/game.h"
#include "colosseum/server.h"

namespace colosseum {

// Returns the action to send, or nothing to stay silent this turn.
using RemoteAgent = std::function<std::optional<Action>(
    const Observation& obs, const std::vector<Action>& legal, int turn)>;

struct RemoteResult {
  std::string match_id;
  int seat = -1;
  json config;
  RankRecord record;
  std::vector<int> substituted_turns;
  bool aborted = false;
  double total_reward = 0.0;  // sum of rewards seen in observations
  int turns_played = 0;
  std::vector<json> errors;  // error messages received during the match
};

// Blocking client for one connection. One match at a time.
class RemoteClient {
 public:
  // Connects, checks the server hello and logs in.
  RemoteClient(const Address& address, const std::string& name);
  ~RemoteClient();

  RemoteClient(const RemoteClient&) = delete;
  RemoteClient& operator=(const RemoteClient&) = delete;

  // Queues and plays one match to completion. Actions outside `legal` are
  // rejected locally with GameError before anything is sent.
  RemoteResult play(const std::string& queue, const RemoteAgent& agent);

  void send(const json& message);
  void send_raw(const std::string& bytes);
  // Next message, or nothing on timeout. Throws GameError once closed.
  std::optional<json> receive(std::chrono::milliseconds timeout);

  // Every line received so far, byte for byte.
  const std::vector<std::string>& received_lines() const { return lines_; }
  void close();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::vector<std::string> lines_;
};

}  // namespace colosseum

#endif  // COLOSSEUM_CLIENT_H_
