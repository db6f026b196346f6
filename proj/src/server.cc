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

#include "colosseum/server.h"

#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>

#include "colosseum/protocol.h"
#include "net.h"

namespace colosseum {

Address parse_address(const std::string& text) {
  const size_t colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw GameError("address '" + text + "' is not host:port");
  }
  Address a;
  a.host = text.substr(0, colon);
  const std::string port = text.substr(colon + 1);
  size_t used = 0;
  try {
    a.port = std::stoi(port, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != port.size() || a.port < 0 || a.port > 65535) {
    throw GameError("address '" + text + "' has a bad port");
  }
  return a;
}

std::string to_string(const Address& address) {
  return address.host + ":" + std::to_string(address.port);
}

std::optional<Address> address_from_env() {
  const char* v = std::getenv("COLOSSEUM_ADDR");
  if (v == nullptr || *v == '\0') return std::nullopt;
  return parse_address(v);
}

ServerConfig server_config_from_json(const json& j) {
  ServerConfig c;
  if (j.contains("listen")) c.listen = parse_address(j["listen"]);
  c.action_timeout =
      std::chrono::milliseconds(j.value("action_timeout_ms", int64_t{30000}));
  c.max_concurrent_matches =
      j.value("max_concurrent_matches", c.max_concurrent_matches);
  c.forfeit_after = j.value("forfeit_after", c.forfeit_after);
  c.seed = j.value("seed", c.seed);
  c.transcript_dir = j.value("transcript_dir", std::string());
  if (j.contains("menu")) {
    for (const auto& [name, entry] : j["menu"].items()) {
      MenuEntry m;
      m.config = env_config_from_json(entry.at("config"));
      m.bots = entry.value("bots", std::vector<std::string>{});
      c.menu[name] = std::move(m);
    }
  }
  if (j.contains("tournament") && !j["tournament"].is_null()) {
    c.tournament = tournament_config_from_json(j["tournament"]);
  }
  return c;
}

json to_json(const ServerConfig& c) {
  json menu = json::object();
  for (const auto& [name, m] : c.menu) {
    menu[name] = {{"config", to_json(m.config)}, {"bots", m.bots}};
  }
  json j = {{"listen", to_string(c.listen)},
            {"action_timeout_ms", c.action_timeout.count()},
            {"max_concurrent_matches", c.max_concurrent_matches},
            {"forfeit_after", c.forfeit_after},
            {"seed", c.seed},
            {"transcript_dir", c.transcript_dir},
            {"menu", menu}};
  if (c.tournament) j["tournament"] = to_json(*c.tournament);
  return j;
}

TournamentRecorder::TournamentRecorder(TournamentConfig config)
    : config_(std::move(config)) {
  for (size_t i = 0; i < config_.roster.size(); ++i) {
    if (!ids_.emplace(config_.roster[i], static_cast<AgentId>(i)).second) {
      throw GameError("tournament roster repeats '" + config_.roster[i] +
                      "'; server seats are matched by name");
    }
  }
}

bool TournamentRecorder::record(const MatchReport& report) {
  if (report.aborted) return false;
  if (static_cast<int>(report.seat_names.size()) != config_.seats) {
    return false;
  }
  GameRecord rec;
  rec.index = report.number;
  std::set<AgentId> seen;
  for (const auto& name : report.seat_names) {
    auto it = ids_.find(name);
    if (it == ids_.end() || !seen.insert(it->second).second) return false;
    rec.seating.push_back(it->second);
  }
  rec.result = report.record;
  std::lock_guard<std::mutex> lock(mu_);
  records_.push_back(std::move(rec));
  return true;
}

std::vector<GameRecord> TournamentRecorder::records() const {
  std::lock_guard<std::mutex> lock(mu_);
  auto out = records_;
  std::sort(out.begin(), out.end(),
            [](const GameRecord& a, const GameRecord& b) {
              return a.index < b.index;
            });
  return out;
}

TournamentResult TournamentRecorder::result() const {
  return summarize(config_, records());
}

struct MatchServer::Conn {
  enum class Phase { kFresh, kIdle, kQueued, kPlaying };

  int fd = -1;
  int id = 0;
  std::mutex write_mu;
  bool open = true;  // guarded by write_mu

  // Guarded by the server mutex.
  std::string name;
  Phase phase = Phase::kFresh;
  std::shared_ptr<Session> session;
  int seat = -1;

  bool send(const json& message) {
    const std::string bytes = encode_message(message);
    std::lock_guard<std::mutex> lock(write_mu);
    if (!open) return false;
    if (!net::send_all(fd, bytes)) {
      open = false;
      ::shutdown(fd, SHUT_RDWR);
      return false;
    }
    return true;
  }

  void hang_up() {
    std::lock_guard<std::mutex> lock(write_mu);
    if (open) ::shutdown(fd, SHUT_RDWR);
    open = false;
  }
};

struct MatchServer::Session {
  int64_t number = 0;
  std::string id;
  std::string queue;
  EnvConfig config;
  std::vector<std::shared_ptr<Conn>> remote;  // null for bot seats
  std::vector<PolicyPtr> bots;                // null for remote seats
  std::vector<std::string> names;

  std::mutex mu;
  std::condition_variable cv;
  int turn = -1;
  std::map<PlayerId, std::vector<Action>> awaiting;
  std::map<PlayerId, Action> received;
  std::vector<char> gone;

  // Empty on success, otherwise the error code to send back.
  std::string_view submit(PlayerId seat, int at_turn, Action value) {
    std::lock_guard<std::mutex> lock(mu);
    if (at_turn != turn) return error_code::kStaleTurn;
    auto it = awaiting.find(seat);
    if (it == awaiting.end()) return error_code::kNotYourTurn;
    if (received.count(seat)) return error_code::kStaleTurn;
    if (std::find(it->second.begin(), it->second.end(), value) ==
        it->second.end()) {
      return error_code::kIllegalAction;
    }
    received[seat] = value;
    cv.notify_all();
    return {};
  }

  void mark_gone(PlayerId seat) {
    std::lock_guard<std::mutex> lock(mu);
    gone[seat] = 1;
    cv.notify_all();
  }
};

MatchServer::MatchServer(ServerConfig config)
    : config_(std::move(config)),
      matchmaking_rng_(Rng(config_.seed).derive("matchmaking")) {
  if (config_.action_timeout.count() <= 0) {
    throw GameError("server: action timeout must be positive");
  }
  if (config_.max_concurrent_matches < 1) {
    throw GameError("server: max concurrent matches must be >= 1");
  }
  if (config_.forfeit_after < 1) {
    throw GameError("server: forfeit_after must be >= 1");
  }
  for (const auto& [name, entry] : config_.menu) {
    new_game(entry.config);  // validates the config
    if (static_cast<int>(entry.bots.size()) >= entry.config.players) {
      throw GameError("server: queue '" + name +
                      "' needs at least one remote seat");
    }
    for (const auto& b : entry.bots) make_policy(b);
  }
  logger_ = [](const std::string& line) {
    std::cerr << "[colosseum] " << line << std::endl;
  };
}

MatchServer::~MatchServer() { stop(); }

void MatchServer::set_report_sink(ReportSink sink) { sink_ = std::move(sink); }

void MatchServer::set_logger(Logger logger) { logger_ = std::move(logger); }

void MatchServer::log(const std::string& line) {
  if (logger_) logger_(line);
}

void MatchServer::spawn(std::function<void()> fn) {
  // Caller holds mu_.
  ++threads_;
  std::thread([this, fn = std::move(fn)] {
    fn();
    std::lock_guard<std::mutex> lock(mu_);
    --threads_;
    cv_.notify_all();
  }).detach();
}

void MatchServer::start() {
  std::lock_guard<std::mutex> lock(mu_);
  if (started_) throw GameError("server already started");
  listen_fd_ = net::listen_tcp(config_.listen.host, config_.listen.port, &port_);
  started_ = true;
  spawn([this] { accept_loop(); });
}

void MatchServer::accept_loop() {
  while (!stopping_) {
    pollfd p{listen_fd_, POLLIN, 0};
    int rc = ::poll(&p, 1, 100);
    if (rc <= 0) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    auto conn = std::make_shared<Conn>();
    conn->fd = fd;
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    conn->id = next_conn_id_++;
    conns_[conn->id] = conn;
    spawn([this, conn] { reader_loop(conn); });
  }
}

void MatchServer::reader_loop(std::shared_ptr<Conn> conn) {
  conn->send(make_hello());
  net::LineReader reader(conn->fd, kMaxMessageBytes);
  std::string line;
  while (!stopping_) {
    {
      std::lock_guard<std::mutex> lock(conn->write_mu);
      if (!conn->open) break;
    }
    auto status = reader.read_line(&line, 100);
    if (status == net::ReadStatus::kTimeout) continue;
    if (status == net::ReadStatus::kClosed) break;
    if (status == net::ReadStatus::kTooLong) {
      conn->send(make_error(error_code::kMalformed, "message too long"));
      break;
    }
    if (line.empty()) continue;
    handle_line(conn, line);
  }
  drop_connection(conn);
  {
    std::lock_guard<std::mutex> lock(conn->write_mu);
    conn->open = false;
    ::close(conn->fd);
  }
}

void MatchServer::drop_connection(const std::shared_ptr<Conn>& conn) {
  std::shared_ptr<Session> session;
  int seat = -1;
  {
    std::lock_guard<std::mutex> lock(mu_);
    conns_.erase(conn->id);
    for (auto& [name, q] : queues_) {
      q.erase(std::remove(q.begin(), q.end(), conn), q.end());
    }
    if (conn->phase == Conn::Phase::kPlaying) {
      session = conn->session;
      seat = conn->seat;
    }
    conn->session.reset();
    conn->phase = Conn::Phase::kIdle;
  }
  conn->hang_up();
  if (session) session->mark_gone(seat);
}

void MatchServer::handle_line(const std::shared_ptr<Conn>& conn,
                              const std::string& line) {
  json msg;
  try {
    msg = parse_message(line);
  } catch (const ProtocolError& e) {
    conn->send(make_error(e.code(), e.what()));
    conn->hang_up();
    return;
  }
  const std::string type = msg["type"];
  std::optional<json> reply;
  bool hang_up = false;
  std::shared_ptr<Session> session;
  int seat = -1;
  {
    std::lock_guard<std::mutex> lock(mu_);
    switch (conn->phase) {
      case Conn::Phase::kFresh:
        if (type != "login") {
          reply = make_error(error_code::kProtocol, "expected login");
          hang_up = true;
        } else if (msg.contains("v") && msg["v"] != kProtocolVersion) {
          reply = make_error(error_code::kVersion,
                             "server speaks v" +
                                 std::to_string(kProtocolVersion) +
                                 ", client sent v" + msg["v"].dump());
          hang_up = true;
        } else {
          conn->name = msg["name"];
          conn->phase = Conn::Phase::kIdle;
        }
        break;
      case Conn::Phase::kIdle:
        if (type == "queue") {
          const std::string q = msg["env"];
          if (!config_.menu.count(q)) {
            reply = make_error(error_code::kUnknownQueue,
                               "no queue named '" + q + "'");
          } else if (stopping_) {
            reply = make_error(error_code::kAborted, "server shutting down");
          } else {
            conn->phase = Conn::Phase::kQueued;
            queues_[q].push_back(conn);
            try_matchmake();
          }
        } else if (type == "action") {
          reply = make_error(error_code::kStaleTurn, "no match in progress");
        } else {
          reply = make_error(error_code::kProtocol,
                             "unexpected '" + type + "' while idle");
          hang_up = true;
        }
        break;
      case Conn::Phase::kQueued:
        if (type == "action") {
          reply = make_error(error_code::kStaleTurn, "no match in progress");
        } else {
          reply = make_error(error_code::kProtocol,
                             "unexpected '" + type + "' while queued");
          hang_up = true;
        }
        break;
      case Conn::Phase::kPlaying:
        if (type == "action") {
          session = conn->session;
          seat = conn->seat;
        } else {
          reply = make_error(error_code::kProtocol,
                             "unexpected '" + type + "' during a match");
          hang_up = true;
        }
        break;
    }
  }
  if (session) {
    auto code = session->submit(seat, msg["turn"].get<int>(),
                                msg["value"].get<Action>());
    if (!code.empty()) {
      reply = make_error(code, "action for turn " + msg["turn"].dump() +
                                   " not applied");
    }
  }
  if (reply) conn->send(*reply);
  if (hang_up) conn->hang_up();
}

void MatchServer::try_matchmake() {
  // Caller holds mu_.
  for (auto& [qname, queue] : queues_) {
    const MenuEntry& entry = config_.menu.at(qname);
    const int needed =
        entry.config.players - static_cast<int>(entry.bots.size());
    while (!stopping_ && static_cast<int>(queue.size()) >= needed &&
           running_ < config_.max_concurrent_matches) {
      const auto picked = sample_seating(static_cast<int>(queue.size()),
                                         needed, matchmaking_rng_);
      std::vector<std::shared_ptr<Conn>> chosen;
      for (int i : picked) chosen.push_back(queue[i]);
      std::set<int> taken(picked.begin(), picked.end());
      std::deque<std::shared_ptr<Conn>> rest;
      for (int i = 0; i < static_cast<int>(queue.size()); ++i) {
        if (!taken.count(i)) rest.push_back(queue[i]);
      }
      queue.swap(rest);

      // Participants: remote agents in sampled order, then bots; the seat
      // permutation is drawn separately.
      const int n = entry.config.players;
      std::vector<int> slot(n);
      for (int i = 0; i < n; ++i) slot[i] = i;
      matchmaking_rng_.shuffle(slot);

      auto s = std::make_shared<Session>();
      s->number = ++matches_started_;
      s->id = "m" + std::to_string(s->number);
      s->queue = qname;
      s->config = entry.config;
      s->config.seed =
          Rng(config_.seed).derive("env").derive(s->number).next();
      s->remote.resize(n);
      s->bots.resize(n);
      s->names.resize(n);
      s->gone.assign(n, 0);
      for (int i = 0; i < n; ++i) {
        const int seat = slot[i];
        if (i < needed) {
          auto& c = chosen[i];
          s->remote[seat] = c;
          s->names[seat] = c->name;
          c->phase = Conn::Phase::kPlaying;
          c->session = s;
          c->seat = seat;
        } else {
          s->bots[seat] = make_policy(entry.bots[i - needed]);
          s->names[seat] = s->bots[seat]->name();
        }
      }
      ++running_;
      peak_running_ = std::max(peak_running_, running_);
      sessions_.push_back(s);
      spawn([this, s] { drive(s); });
    }
  }
}

namespace {

struct AbortMatch {
  std::string reason;
};

}  // namespace

void MatchServer::drive(std::shared_ptr<Session> s) {
  MatchReport rep;
  rep.number = s->number;
  rep.match_id = s->id;
  rep.queue = s->queue;
  rep.seat_names = s->names;
  Transcript& t = rep.transcript;
  t.match_id = s->id;
  t.config = s->config;
  t.seats = s->names;

  const int n = s->config.players;
  const json pub = public_config(s->config);
  for (int p = 0; p < n; ++p) {
    if (s->remote[p]) {
      s->remote[p]->send(make_match_assigned(
          s->id, p, std::string(env_name(s->config.env)), pub));
    }
  }

  const Rng match_root = Rng(config_.seed).derive("agents").derive(s->number);
  std::vector<Rng> bot_rng;
  for (int p = 0; p < n; ++p) bot_rng.push_back(match_root.derive(p));
  Rng sub_rng = Rng(config_.seed).derive("substitute").derive(s->number);

  std::vector<double> pending(n, 0.0);
  std::vector<int> streak(n, 0);
  std::vector<char> forfeited(n, 0);
  StatePtr state;
  int turn = 0;
  try {
    state = new_game(s->config);
    while (!state->is_terminal()) {
      if (stopping_) throw AbortMatch{"server shutting down"};
      const auto players = state->current_players();
      std::map<PlayerId, std::vector<Action>> legal;
      for (PlayerId p : players) legal[p] = state->legal_actions(p);

      std::vector<PlayerId> asked;
      {
        std::lock_guard<std::mutex> lock(s->mu);
        s->turn = turn;
        s->awaiting.clear();
        s->received.clear();
        for (PlayerId p : players) {
          if (s->remote[p] && !forfeited[p] && !s->gone[p]) {
            s->awaiting[p] = legal[p];
            asked.push_back(p);
          }
        }
      }
      for (PlayerId p : asked) {
        s->remote[p]->send(make_observation(turn, state->observe(p), legal[p],
                                            pending[p], false));
        pending[p] = 0.0;
      }

      std::map<PlayerId, Action> got;
      {
        std::unique_lock<std::mutex> lock(s->mu);
        const auto deadline =
            std::chrono::steady_clock::now() + config_.action_timeout;
        s->cv.wait_until(lock, deadline, [&] {
          if (stopping_) return true;
          for (PlayerId p : asked) {
            if (!s->received.count(p) && !s->gone[p]) return false;
          }
          return true;
        });
        got = s->received;
        s->turn = -1;  // anything arriving now is stale
        s->awaiting.clear();
      }
      if (stopping_) throw AbortMatch{"server shutting down"};

      TranscriptStep step;
      step.turn = turn;
      for (PlayerId p : players) {
        if (s->bots[p]) {
          step.actions[p] =
              s->bots[p]->act(state->observe(p), legal[p], bot_rng[p]);
          continue;
        }
        auto it = got.find(p);
        if (it != got.end()) {
          step.actions[p] = it->second;
          streak[p] = 0;
          continue;
        }
        SubstitutionEvent ev;
        ev.turn = turn;
        ev.seat = p;
        ev.reason = forfeited[p] ? "forfeited"
                    : s->gone[p] ? "disconnected"
                                 : "timeout";
        ev.action = legal[p][sub_rng.uniform_int(legal[p].size())];
        step.actions[p] = ev.action;
        step.substituted.push_back(p);
        if (!forfeited[p]) {
          log(s->id + " turn " + std::to_string(turn) + " seat " +
              std::to_string(p) + " (" + s->names[p] + "): " + ev.reason +
              ", substituted " + state->action_to_string(ev.action));
          if (++streak[p] >= config_.forfeit_after) {
            forfeited[p] = 1;
            log(s->id + " seat " + std::to_string(p) +
                " forfeits; random play from here on");
          }
        }
        rep.substitutions.push_back(std::move(ev));
      }
      StepResult r = state->step(step.actions);
      for (int p = 0; p < n; ++p) pending[p] += r.rewards[p];
      state = r.next_state;
      t.steps.push_back(std::move(step));
      ++turn;
    }
    rep.record = state->rankings();
    t.result = rep.record;
    for (int p = 0; p < n; ++p) {
      if (!s->remote[p]) continue;
      std::vector<int> subs;
      for (const auto& ev : rep.substitutions) {
        if (ev.seat == p) subs.push_back(ev.turn);
      }
      s->remote[p]->send(
          make_observation(turn, state->observe(p), {}, pending[p], true));
      s->remote[p]->send(make_result(rep.record, p, subs, false));
    }
  } catch (const AbortMatch& a) {
    rep.aborted = true;
    rep.abort_reason = a.reason;
  } catch (const std::exception& e) {
    rep.aborted = true;
    rep.abort_reason = e.what();
  }
  if (rep.aborted) {
    t.abort_reason = rep.abort_reason;
    log(s->id + " aborted: " + rep.abort_reason);
    for (int p = 0; p < n; ++p) {
      if (!s->remote[p]) continue;
      s->remote[p]->send(make_error(error_code::kAborted, rep.abort_reason));
      s->remote[p]->send(make_result(RankRecord{}, p, {}, true));
    }
  }
  finish(s, std::move(rep));
}

void MatchServer::finish(const std::shared_ptr<Session>& s,
                         MatchReport report) {
  if (!config_.transcript_dir.empty()) {
    try {
      std::filesystem::create_directories(config_.transcript_dir);
      std::ofstream out(std::filesystem::path(config_.transcript_dir) /
                        (report.match_id + ".jsonl"));
      write_transcript(out, report.transcript);
    } catch (const std::exception& e) {
      log("cannot write transcript for " + report.match_id + ": " + e.what());
    }
  }
  if (sink_) {
    try {
      sink_(report);
    } catch (const std::exception& e) {
      log("report sink failed for " + report.match_id + ": " + e.what());
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  --running_;
  if (report.aborted) {
    ++matches_aborted_;
  } else {
    ++matches_completed_;
  }
  for (auto& c : s->remote) {
    if (c && c->session == s) {
      c->session.reset();
      c->seat = -1;
      c->phase = Conn::Phase::kIdle;
    }
  }
  sessions_.erase(std::remove(sessions_.begin(), sessions_.end(), s),
                  sessions_.end());
  reports_.push_back(std::move(report));
  cv_.notify_all();
  if (!stopping_) try_matchmake();
}

void MatchServer::stop() {
  std::vector<std::shared_ptr<Conn>> conns;
  std::vector<std::shared_ptr<Session>> sessions;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (!started_ || stopping_) return;
    stopping_ = true;
    for (auto& [id, c] : conns_) conns.push_back(c);
    sessions = sessions_;
  }
  for (auto& s : sessions) {
    std::lock_guard<std::mutex> lock(s->mu);
    s->cv.notify_all();
  }
  std::unique_lock<std::mutex> lock(mu_);
  // Sessions send their abort notices before connections go away.
  cv_.wait(lock, [&] { return running_ == 0; });
  lock.unlock();
  for (auto& c : conns) c->hang_up();
  lock.lock();
  cv_.wait(lock, [&] { return threads_ == 0; });
  ::close(listen_fd_);
  listen_fd_ = -1;
}

bool MatchServer::wait_for_matches(int64_t count,
                                   std::chrono::milliseconds timeout) {
  std::unique_lock<std::mutex> lock(mu_);
  return cv_.wait_for(lock, timeout, [&] {
    return matches_completed_ + matches_aborted_ >= count;
  });
}

ServerStats MatchServer::stats() const {
  std::lock_guard<std::mutex> lock(mu_);
  ServerStats s;
  s.connections = static_cast<int>(conns_.size());
  for (const auto& [name, q] : queues_) s.queued += static_cast<int>(q.size());
  s.running = running_;
  s.peak_running = peak_running_;
  s.started = matches_started_;
  s.completed = matches_completed_;
  s.aborted = matches_aborted_;
  return s;
}

std::vector<MatchReport> MatchServer::reports() const {
  std::lock_guard<std::mutex> lock(mu_);
  return reports_;
}

}  // namespace colosseum
