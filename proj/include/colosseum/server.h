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

#ifndef COLOSSEUM_SERVER_H_
#define COLOSSEUM_SERVER_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "colosseum/agents.h"
#include "colosseum/game.h"
#include "colosseum/match.h"
#include "colosseum/rng.h"
#include "colosseum/tournament.h"

namespace colosseum {

struct Address {
  std::string host = "127.0.0.1";
  int port = 7777;
};

// "host:port". Throws GameError on anything else.
Address parse_address(const std::string& text);
std::string to_string(const Address& address);
// COLOSSEUM_ADDR, when set.
std::optional<Address> address_from_env();

// One queue. Server-side bots take `bots.size()` seats; queued remote agents
// fill the rest.
struct MenuEntry {
  EnvConfig config;
  std::vector<std::string> bots;
};

struct ServerConfig {
  Address listen;
  std::map<std::string, MenuEntry> menu;
  std::chrono::milliseconds action_timeout{30000};
  int max_concurrent_matches = 16;
  // Consecutive substitutions after which a seat stops being asked.
  int forfeit_after = 3;
  uint64_t seed = 0;
  std::string transcript_dir;  // empty: keep transcripts in memory only
  std::optional<TournamentConfig> tournament;
};

// The JSON layout accepted by `colosseum serve --config`.
ServerConfig server_config_from_json(const json& j);
json to_json(const ServerConfig& config);

struct SubstitutionEvent {
  int turn = 0;
  PlayerId seat = 0;
  std::string reason;  // "timeout", "disconnected" or "forfeited"
  Action action = 0;
};

struct MatchReport {
  int64_t number = 0;  // 1-based, in start order
  std::string match_id;
  std::string queue;
  std::vector<std::string> seat_names;
  bool aborted = false;
  std::string abort_reason;
  RankRecord record;  // empty when aborted
  std::vector<SubstitutionEvent> substitutions;
  Transcript transcript;
};

struct ServerStats {
  int connections = 0;
  int queued = 0;
  int running = 0;
  int peak_running = 0;
  int64_t started = 0;
  int64_t completed = 0;
  int64_t aborted = 0;
};

// Collects finished server matches whose seat names all belong to the
// roster, so a live server can feed a tournament.
class TournamentRecorder {
 public:
  explicit TournamentRecorder(TournamentConfig config);

  // Returns false when the match does not map onto the roster.
  bool record(const MatchReport& report);
  std::vector<GameRecord> records() const;
  TournamentResult result() const;
  const TournamentConfig& config() const { return config_; }

 private:
  TournamentConfig config_;
  std::map<std::string, AgentId> ids_;
  mutable std::mutex mu_;
  std::vector<GameRecord> records_;
};

class MatchServer {
 public:
  using ReportSink = std::function<void(const MatchReport&)>;
  using Logger = std::function<void(const std::string&)>;

  explicit MatchServer(ServerConfig config);
  ~MatchServer();

  MatchServer(const MatchServer&) = delete;
  MatchServer& operator=(const MatchServer&) = delete;

  // Called from match workers, outside any server lock.
  void set_report_sink(ReportSink sink);
  void set_logger(Logger logger);

  // Binds and starts accepting. Port 0 picks a free port; see port().
  void start();
  int port() const { return port_; }
  // Aborts running matches (no results recorded) and joins every thread.
  void stop();

  // Blocks until `count` matches have finished or aborted in total.
  bool wait_for_matches(int64_t count, std::chrono::milliseconds timeout);
  ServerStats stats() const;
  std::vector<MatchReport> reports() const;

 private:
  struct Conn;
  struct Session;

  void accept_loop();
  void reader_loop(std::shared_ptr<Conn> conn);
  void handle_line(const std::shared_ptr<Conn>& conn, const std::string& line);
  void drop_connection(const std::shared_ptr<Conn>& conn);
  void try_matchmake();  // requires mu_
  void drive(std::shared_ptr<Session> session);
  void finish(const std::shared_ptr<Session>& session, MatchReport report);
  void log(const std::string& line);
  void spawn(std::function<void()> fn);

  ServerConfig config_;
  ReportSink sink_;
  Logger logger_;

  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  bool started_ = false;

  mutable std::mutex mu_;
  std::condition_variable cv_;  // thread exits and finished matches
  int threads_ = 0;
  int next_conn_id_ = 1;
  std::map<int, std::shared_ptr<Conn>> conns_;
  std::map<std::string, std::deque<std::shared_ptr<Conn>>> queues_;
  std::vector<std::shared_ptr<Session>> sessions_;
  Rng matchmaking_rng_;
  int64_t matches_started_ = 0;
  int64_t matches_completed_ = 0;
  int64_t matches_aborted_ = 0;
  int running_ = 0;
  int peak_running_ = 0;
  std::vector<MatchReport> reports_;
};

}  // namespace colosseum

#endif  // COLOSSEUM_SERVER_H_
