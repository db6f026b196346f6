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

#ifndef COLOSSEUM_PROTOCOL_H_
#define COLOSSEUM_PROTOCOL_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "colosseum/game.h"

namespace colosseum {

// Newline-delimited JSON. Every message is one object with a "type" field.
inline constexpr int kProtocolVersion = 1;
inline constexpr size_t kMaxMessageBytes = 1 << 20;

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string code, const std::string& detail)
      : std::runtime_error(detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Error codes sent in error{code, detail}.
namespace error_code {
inline constexpr std::string_view kMalformed = "malformed";
inline constexpr std::string_view kProtocol = "protocol";
inline constexpr std::string_view kVersion = "version";
inline constexpr std::string_view kUnknownQueue = "unknown_queue";
inline constexpr std::string_view kStaleTurn = "stale_turn";
inline constexpr std::string_view kNotYourTurn = "not_your_turn";
inline constexpr std::string_view kIllegalAction = "illegal_action";
inline constexpr std::string_view kAborted = "aborted";
}  // namespace error_code

// Parses one line and checks the fields its type requires. Throws
// ProtocolError("malformed", ...) otherwise.
json parse_message(std::string_view line);

// Compact encoding plus the trailing newline.
std::string encode_message(const json& message);

json make_hello();
json make_login(const std::string& name);
json make_queue(const std::string& queue);
json make_match_assigned(const std::string& match_id, int seat,
                         const std::string& env, const json& config);
json make_observation(int turn, const Observation& obs,
                      const std::vector<Action>& legal, double reward,
                      bool terminal);
json make_action(int turn, Action value);
json make_result(const RankRecord& record, int seat,
                 const std::vector<int>& substitutions, bool aborted);
json make_error(std::string_view code, const std::string& detail);

// Config as shown to seated agents: the seed and any dealt cards are
// stripped, since either would reveal hidden state.
json public_config(const EnvConfig& config);

}  // namespace colosseum

#endif  // COLOSSEUM_PROTOCOL_H_
