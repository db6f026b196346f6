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

// Blocking socket helpers shared by the server and the client.

#ifndef COLOSSEUM_SRC_NET_H_
#define COLOSSEUM_SRC_NET_H_

#include <string>
#include <string_view>

namespace colosseum::net {

// Writes everything or returns false. Never raises SIGPIPE.
bool send_all(int fd, std::string_view data);

// Returns a connected TCP socket or throws GameError.
int connect_tcp(const std::string& host, int port);

// Returns a listening socket and stores the bound port.
int listen_tcp(const std::string& host, int port, int* bound_port);

enum class ReadStatus { kLine, kTimeout, kClosed, kTooLong };

// Splits a byte stream into '\n'-terminated lines.
class LineReader {
 public:
  explicit LineReader(int fd, size_t max_line) : fd_(fd), max_(max_line) {}

  // Waits at most timeout_ms (negative: forever) for a complete line.
  ReadStatus read_line(std::string* line, int timeout_ms);

 private:
  int fd_;
  size_t max_;
  std::string buf_;
};

}  // namespace colosseum::net

#endif  // COLOSSEUM_SRC_NET_H_
