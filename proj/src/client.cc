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

#include "colosseum/client.h"

#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>

#include "colosseum/protocol.h"
#include "net.h"

namespace colosseum {

struct RemoteClient::Impl {
  int fd = -1;
  net::LineReader reader;
  explicit Impl(int f) : fd(f), reader(f, kMaxMessageBytes) {}
};

RemoteClient::RemoteClient(const Address& address, const std::string& name)
    : impl_(std::make_unique<Impl>(net::connect_tcp(address.host,
                                                    address.port))) {
  auto hello = receive(std::chrono::milliseconds(10000));
  if (!hello || (*hello)["type"] != "hello") {
    close();
    throw GameError("server did not send hello");
  }
  if ((*hello)["v"] != kProtocolVersion) {
    const std::string theirs = (*hello)["v"].dump();
    close();
    throw GameError("protocol version mismatch: server v" + theirs +
                    ", client v" + std::to_string(kProtocolVersion));
  }
  send(make_login(name));
}

RemoteClient::~RemoteClient() { close(); }

void RemoteClient::close() {
  if (impl_ && impl_->fd >= 0) {
    ::shutdown(impl_->fd, SHUT_RDWR);
    ::close(impl_->fd);
    impl_->fd = -1;
  }
}

void RemoteClient::send(const json& message) {
  send_raw(encode_message(message));
}

void RemoteClient::send_raw(const std::string& bytes) {
  if (impl_->fd < 0 || !net::send_all(impl_->fd, bytes)) {
    throw GameError("connection closed while sending");
  }
}

std::optional<json> RemoteClient::receive(std::chrono::milliseconds timeout) {
  if (impl_->fd < 0) throw GameError("connection closed");
  std::string line;
  auto status =
      impl_->reader.read_line(&line, static_cast<int>(timeout.count()));
  switch (status) {
    case net::ReadStatus::kTimeout:
      return std::nullopt;
    case net::ReadStatus::kClosed:
      throw GameError("connection closed by server");
    case net::ReadStatus::kTooLong:
      throw GameError("server message too long");
    case net::ReadStatus::kLine:
      break;
  }
  lines_.push_back(line);
  try {
    return parse_message(line);
  } catch (const ProtocolError& e) {
    throw GameError(std::string("bad server message: ") + e.what());
  }
}

RemoteResult RemoteClient::play(const std::string& queue,
                                const RemoteAgent& agent) {
  send(make_queue(queue));
  RemoteResult out;
  for (;;) {
    auto msg = receive(std::chrono::hours(24));
    if (!msg) continue;
    const std::string type = (*msg)["type"];
    if (type == "match_assigned") {
      out.match_id = (*msg)["match_id"];
      out.seat = (*msg)["seat"];
      out.config = (*msg)["config"];
    } else if (type == "observation") {
      out.total_reward += (*msg)["reward"].get<double>();
      if ((*msg)["terminal"].get<bool>()) continue;
      const int turn = (*msg)["turn"];
      const auto legal = (*msg)["legal"].get<std::vector<Action>>();
      auto action = agent((*msg)["obs"], legal, turn);
      ++out.turns_played;
      if (!action) continue;
      if (std::find(legal.begin(), legal.end(), *action) == legal.end()) {
        throw GameError("agent chose illegal action " +
                        std::to_string(*action) + " at turn " +
                        std::to_string(turn));
      }
      send(make_action(turn, *action));
    } else if (type == "result") {
      out.record.ranks = (*msg)["ranks"].get<std::vector<int>>();
      out.record.total_reward =
          (*msg)["total_reward"].get<std::vector<double>>();
      out.substituted_turns =
          msg->value("substitutions", std::vector<int>{});
      out.aborted = msg->value("aborted", false);
      return out;
    } else if (type == "error") {
      out.errors.push_back(*msg);
      if ((*msg)["code"] == "unknown_queue") {
        throw GameError("server: " + (*msg)["detail"].get<std::string>());
      }
    }
  }
}

}  // namespace colosseum
