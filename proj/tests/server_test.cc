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

#include <gtest/gtest.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <thread>

#include "colosseum/client.h"
#include "colosseum/protocol.h"
#include "fixtures.h"
#include "net.h"
#include "server_harness.h"

namespace colosseum {
namespace {

using namespace std::chrono_literals;
using testing::address_of;
using testing::loopback_config;

ServerConfig one_queue(const std::string& name, EnvKind env, int players,
                       std::vector<std::string> bots, uint64_t seed = 7) {
  ServerConfig cfg = loopback_config(seed);
  MenuEntry m;
  m.config.env = env;
  m.config.players = players;
  m.bots = std::move(bots);
  cfg.menu[name] = m;
  return cfg;
}

std::optional<Action> first_legal(const Observation&,
                                  const std::vector<Action>& legal, int) {
  return legal.front();
}

// Reads until a message of the given type shows up.
json await(RemoteClient& c, const std::string& type,
           std::vector<json>* skipped = nullptr) {
  const auto deadline = std::chrono::steady_clock::now() + 20s;
  while (std::chrono::steady_clock::now() < deadline) {
    auto m = c.receive(200ms);
    if (!m) continue;
    if ((*m)["type"] == type) return *m;
    if (skipped) skipped->push_back(*m);
  }
  throw GameError("timed out waiting for " + type);
}

template <typename Pred>
bool eventually(Pred pred, std::chrono::milliseconds limit = 10s) {
  const auto deadline = std::chrono::steady_clock::now() + limit;
  while (std::chrono::steady_clock::now() < deadline) {
    if (pred()) return true;
    std::this_thread::sleep_for(10ms);
  }
  return pred();
}

TEST(Server, TwoClientsFinishATicTacToeMatch) {
  testing::TempDir dir("server-ttt");
  ServerConfig cfg = one_queue("ttt", EnvKind::kTicTacToe, 2, {});
  cfg.transcript_dir = dir.str();
  MatchServer server(cfg);
  server.set_logger(nullptr);
  server.start();
  ASSERT_GT(server.port(), 0);

  RemoteResult results[2];
  std::thread a([&] {
    RemoteClient c(address_of(server), "alice");
    results[0] = c.play("ttt", first_legal);
  });
  std::thread b([&] {
    RemoteClient c(address_of(server), "bob");
    results[1] = c.play("ttt", first_legal);
  });
  a.join();
  b.join();
  ASSERT_TRUE(server.wait_for_matches(1, 10s));
  server.stop();

  EXPECT_EQ(results[0].match_id, "m1");
  EXPECT_EQ(results[1].match_id, "m1");
  EXPECT_NE(results[0].seat, results[1].seat);
  EXPECT_FALSE(results[0].aborted);
  EXPECT_EQ(results[0].record, results[1].record);
  EXPECT_EQ(results[0].config.value("env", ""), "tictactoe");

  const auto reports = server.reports();
  ASSERT_EQ(reports.size(), 1u);
  const MatchReport& rep = reports[0];
  EXPECT_FALSE(rep.aborted);
  EXPECT_TRUE(rep.substitutions.empty());
  EXPECT_EQ(rep.record, results[0].record);
  EXPECT_EQ(replay_transcript(rep.transcript).record, rep.record);

  std::ifstream f(dir.path() / "m1.jsonl");
  ASSERT_TRUE(f.good());
  Transcript disk = read_transcript(f);
  EXPECT_EQ(disk.steps, rep.transcript.steps);
  EXPECT_EQ(replay_transcript(disk).record, rep.record);
  const ServerStats s = server.stats();
  EXPECT_EQ(s.completed, 1);
  EXPECT_EQ(s.aborted, 0);
}

TEST(Server, RejectsStaleDuplicateAndIllegalActions) {
  MatchServer server(one_queue("ttt", EnvKind::kTicTacToe, 2, {"first"}));
  server.set_logger(nullptr);
  server.start();
  RemoteClient c(address_of(server), "solo");
  c.send(make_queue("ttt"));
  await(c, "match_assigned");
  json obs = await(c, "observation");
  const int turn = obs["turn"];
  const Action legal = obs["legal"][0];

  c.send(make_action(turn, 99));
  EXPECT_EQ(await(c, "error")["code"], "illegal_action");
  c.send(make_action(turn + 7, legal));
  EXPECT_EQ(await(c, "error")["code"], "stale_turn");
  c.send(make_action(turn, legal));
  // A delayed copy of an accepted action.
  c.send(make_action(turn, legal));
  std::vector<json> skipped;
  EXPECT_EQ(await(c, "error", &skipped)["code"], "stale_turn");

  // Play the rest out normally.
  for (;;) {
    json m;
    if (!skipped.empty()) {
      m = skipped.front();
      skipped.erase(skipped.begin());
    } else {
      m = *c.receive(20s);
    }
    if (m["type"] == "result") {
      EXPECT_FALSE(m["aborted"].get<bool>());
      break;
    }
    if (m["type"] == "observation" && !m["terminal"].get<bool>()) {
      c.send(make_action(m["turn"], m["legal"][0]));
    }
  }
  ASSERT_TRUE(server.wait_for_matches(1, 10s));
  EXPECT_TRUE(server.reports()[0].substitutions.empty());
  server.stop();
}

TEST(Server, ActingOutOfTurnIsRefused) {
  MatchServer server(one_queue("ttt", EnvKind::kTicTacToe, 2, {}));
  server.set_logger(nullptr);
  server.start();
  RemoteClient a(address_of(server), "a");
  RemoteClient b(address_of(server), "b");
  a.send(make_queue("ttt"));
  b.send(make_queue("ttt"));
  const int seat_a = await(a, "match_assigned")["seat"];
  await(b, "match_assigned");
  RemoteClient& mover = seat_a == 0 ? a : b;
  RemoteClient& waiter = seat_a == 0 ? b : a;
  json obs = await(mover, "observation");
  ASSERT_EQ(obs["turn"], 0);
  waiter.send(make_action(0, 4));
  EXPECT_EQ(await(waiter, "error")["code"], "not_your_turn");
  server.stop();
}

TEST(Server, ActionsOutsideAMatchAreStale) {
  MatchServer server(one_queue("ttt", EnvKind::kTicTacToe, 2, {}));
  server.set_logger(nullptr);
  server.start();
  RemoteClient c(address_of(server), "idle");
  c.send(make_action(0, 0));
  EXPECT_EQ(await(c, "error")["code"], "stale_turn");
  server.stop();
}

TEST(Server, UnknownQueueIsReported) {
  MatchServer server(one_queue("ttt", EnvKind::kTicTacToe, 2, {}));
  server.set_logger(nullptr);
  server.start();
  RemoteClient c(address_of(server), "lost");
  try {
    c.play("chess", first_legal);
    FAIL() << "expected GameError";
  } catch (const GameError& e) {
    EXPECT_NE(std::string(e.what()).find("chess"), std::string::npos);
  }
  server.stop();
}

TEST(Server, WrongClientVersionNamesBothVersions) {
  MatchServer server(one_queue("ttt", EnvKind::kTicTacToe, 2, {}));
  server.set_logger(nullptr);
  server.start();
  const int fd = net::connect_tcp("127.0.0.1", server.port());
  net::LineReader reader(fd, kMaxMessageBytes);
  std::string line;
  ASSERT_EQ(reader.read_line(&line, 5000), net::ReadStatus::kLine);
  EXPECT_EQ(parse_message(line)["type"], "hello");
  ASSERT_TRUE(net::send_all(fd, R"({"type":"login","name":"old","v":99})"
                                "\n"));
  ASSERT_EQ(reader.read_line(&line, 5000), net::ReadStatus::kLine);
  json err = parse_message(line);
  EXPECT_EQ(err["code"], "version");
  const std::string detail = err["detail"];
  EXPECT_NE(detail.find("v1"), std::string::npos) << detail;
  EXPECT_NE(detail.find("v99"), std::string::npos) << detail;
  EXPECT_EQ(reader.read_line(&line, 5000), net::ReadStatus::kClosed);
  ::close(fd);
  server.stop();
}

TEST(Server, ClientRejectsAServerSpeakingAnotherVersion) {
  int port = 0;
  const int lfd = net::listen_tcp("127.0.0.1", 0, &port);
  std::thread fake([&] {
    const int fd = ::accept(lfd, nullptr, nullptr);
    net::send_all(fd, R"({"type":"hello","v":42})"
                      "\n");
    std::this_thread::sleep_for(200ms);
    ::close(fd);
  });
  try {
    RemoteClient c(Address{"127.0.0.1", port}, "new");
    FAIL() << "expected GameError";
  } catch (const GameError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("v42"), std::string::npos) << what;
    EXPECT_NE(what.find("v1"), std::string::npos) << what;
  }
  fake.join();
  ::close(lfd);
}

TEST(Server, MalformedLineGetsAnErrorAndHangUp) {
  MatchServer server(one_queue("ttt", EnvKind::kTicTacToe, 2, {}));
  server.set_logger(nullptr);
  server.start();
  RemoteClient c(address_of(server), "noisy");
  c.send_raw("{this is not json\n");
  EXPECT_EQ(await(c, "error")["code"], "malformed");
  EXPECT_THROW(
      {
        for (int i = 0; i < 100; ++i) c.receive(100ms);
      },
      GameError);
  server.stop();
}

TEST(Server, ConnectingToNothingFails) {
  int port = 0;
  const int lfd = net::listen_tcp("127.0.0.1", 0, &port);
  ::close(lfd);
  EXPECT_THROW(RemoteClient(Address{"127.0.0.1", port}, "x"), GameError);
}

TEST(Server, IllegalLocalChoiceIsNeverSent) {
  ServerConfig cfg = one_queue("ttt", EnvKind::kTicTacToe, 2, {"first"});
  cfg.action_timeout = 300ms;
  MatchServer server(cfg);
  server.set_logger(nullptr);
  server.start();
  RemoteClient c(address_of(server), "clumsy");
  EXPECT_THROW(c.play("ttt",
                      [](const Observation&, const std::vector<Action>&, int)
                          -> std::optional<Action> { return 999; }),
               GameError);
  // Nothing reached the server, so it only ever answers with observations.
  for (int i = 0; i < 5; ++i) {
    auto m = c.receive(100ms);
    if (m) {
      EXPECT_NE((*m)["type"], "error") << m->dump();
    }
  }
  c.close();
  ASSERT_TRUE(server.wait_for_matches(1, 20s));
  const auto rep = server.reports()[0];
  EXPECT_FALSE(rep.aborted);
  ASSERT_FALSE(rep.substitutions.empty());
  server.stop();
}

TEST(Server, FifthClientWaitsForTheNextMatch) {
  ServerConfig cfg = one_queue("tron4", EnvKind::kTron, 4, {});
  MatchServer server(cfg);
  server.set_logger(nullptr);
  server.start();
  std::vector<std::unique_ptr<RemoteClient>> clients;
  for (int i = 0; i < 5; ++i) {
    clients.push_back(std::make_unique<RemoteClient>(
        address_of(server), "c" + std::to_string(i)));
    clients.back()->send(make_queue("tron4"));
  }
  ASSERT_TRUE(eventually([&] {
    const ServerStats s = server.stats();
    return s.started == 1 && s.queued == 1;
  }));
  const ServerStats s = server.stats();
  EXPECT_EQ(s.running, 1);
  EXPECT_EQ(s.connections, 5);

  int assigned = 0;
  for (auto& c : clients) {
    for (int k = 0; k < 5; ++k) {
      auto m = c->receive(100ms);
      if (m && (*m)["type"] == "match_assigned") {
        ++assigned;
        break;
      }
    }
  }
  EXPECT_EQ(assigned, 4);
  server.stop();
  EXPECT_EQ(server.stats().aborted, 1);
  for (auto& r : server.reports()) EXPECT_TRUE(r.aborted);
}

TEST(Server, SlowSeatIsSubstitutedThenForfeits) {
  ServerConfig cfg = one_queue("blokus", EnvKind::kBlokus, 2, {"random"});
  cfg.action_timeout = 50ms;
  cfg.forfeit_after = 3;
  MatchServer server(cfg);
  std::vector<std::string> log;
  std::mutex mu;
  server.set_logger([&](const std::string& line) {
    std::lock_guard<std::mutex> lock(mu);
    log.push_back(line);
  });
  server.start();
  RemoteClient c(address_of(server), "sleepy");
  RemoteResult r = c.play(
      "blokus", [](const Observation&, const std::vector<Action>&, int)
                    -> std::optional<Action> { return std::nullopt; });
  ASSERT_TRUE(server.wait_for_matches(1, 20s));
  server.stop();

  EXPECT_FALSE(r.aborted);
  EXPECT_EQ(r.turns_played, 3);
  const MatchReport rep = server.reports()[0];
  ASSERT_GT(rep.substitutions.size(), 3u);
  std::vector<int> turns;
  for (size_t i = 0; i < rep.substitutions.size(); ++i) {
    const auto& ev = rep.substitutions[i];
    EXPECT_EQ(ev.seat, r.seat);
    EXPECT_EQ(ev.reason, i < 3 ? "timeout" : "forfeited");
    turns.push_back(ev.turn);
  }
  EXPECT_EQ(r.substituted_turns, turns);
  EXPECT_EQ(replay_transcript(rep.transcript).record, rep.record);

  int timeouts = 0, forfeits = 0;
  for (const auto& line : log) {
    if (line.find("timeout, substituted") != std::string::npos) ++timeouts;
    if (line.find("forfeits") != std::string::npos) ++forfeits;
  }
  EXPECT_EQ(timeouts, 3);
  EXPECT_EQ(forfeits, 1);
}

TEST(Server, DisconnectedSeatIsPlayedOut) {
  ServerConfig cfg = one_queue("ttt", EnvKind::kTicTacToe, 2, {"first"});
  MatchServer server(cfg);
  server.set_logger(nullptr);
  server.start();
  {
    RemoteClient c(address_of(server), "quitter");
    c.send(make_queue("ttt"));
    await(c, "match_assigned");
  }
  ASSERT_TRUE(server.wait_for_matches(1, 20s));
  server.stop();
  const MatchReport rep = server.reports()[0];
  EXPECT_FALSE(rep.aborted);
  ASSERT_FALSE(rep.substitutions.empty());
  EXPECT_EQ(rep.substitutions.front().reason, "disconnected");
  for (const auto& ev : rep.substitutions) EXPECT_NE(ev.reason, "timeout");
}

TEST(Server, LivenessUnderOneSlowSeat) {
  auto run = testing::liveness_run(11, 2, 200);
  ASSERT_TRUE(run.completed);
  for (const auto& e : run.client_errors) EXPECT_EQ(e, "");
  EXPECT_FALSE(run.report.aborted);
  ASSERT_EQ(run.report.substitutions.size(), 1u);
  EXPECT_EQ(run.report.substitutions[0].reason, "timeout");
  EXPECT_EQ(run.report.substitutions[0].turn, 0);
  EXPECT_EQ(run.report.seat_names[run.report.substitutions[0].seat], "bot2");
  bool logged = false;
  for (const auto& l : run.log) {
    logged |= l.find("timeout, substituted") != std::string::npos;
  }
  EXPECT_TRUE(logged);
  for (const auto& r : run.results) EXPECT_EQ(r.record, run.report.record);
}

TEST(Server, KuhnWireCarriesNoOtherCards) {
  // Same seed, so the remote lands on the same seat each time.
  const auto probe = testing::kuhn_wire_run({0, 1, 2}, 5);
  ASSERT_GE(probe.seat, 0);
  std::vector<int> first(3), second(3);
  std::vector<int> others;
  for (int p = 0; p < 3; ++p) {
    if (p != probe.seat) others.push_back(p);
  }
  first[probe.seat] = second[probe.seat] = 3;
  first[others[0]] = 0;
  first[others[1]] = 1;
  second[others[0]] = 1;
  second[others[1]] = 0;
  const auto a = testing::kuhn_wire_run(first, 5);
  const auto b = testing::kuhn_wire_run(second, 5);
  EXPECT_EQ(a.seat, probe.seat);
  EXPECT_EQ(a.lines, b.lines);
  ASSERT_FALSE(a.lines.empty());
  // Sanity: the client's own card is on the wire.
  bool saw_card = false;
  for (const auto& l : a.lines) {
    json m = json::parse(l);
    if (m["type"] == "observation") saw_card |= m["obs"].value("card", -1) == 3;
  }
  EXPECT_TRUE(saw_card);
}

TEST(Server, RecorderMapsSeatsByName) {
  TournamentConfig tc;
  tc.roster = {"x", "y", "z"};
  tc.seats = 2;
  TournamentRecorder rec(tc);
  MatchReport r;
  r.number = 2;
  r.seat_names = {"z", "x"};
  r.record = RankRecord{{1, 2}, {1.0, -1.0}};
  EXPECT_TRUE(rec.record(r));
  r.seat_names = {"z", "stranger"};
  EXPECT_FALSE(rec.record(r));
  r.seat_names = {"x", "x"};
  EXPECT_FALSE(rec.record(r));
  r.seat_names = {"x", "y"};
  r.aborted = true;
  EXPECT_FALSE(rec.record(r));
  ASSERT_EQ(rec.records().size(), 1u);
  EXPECT_EQ(rec.records()[0].seating, (std::vector<AgentId>{2, 0}));

  tc.roster = {"x", "x"};
  EXPECT_THROW(TournamentRecorder{tc}, GameError);
}

TEST(Server, ConfigJsonRoundTrips) {
  ServerConfig cfg = one_queue("kuhn3", EnvKind::kKuhn, 3, {"first"}, 99);
  cfg.listen = Address{"0.0.0.0", 9000};
  cfg.action_timeout = 1234ms;
  cfg.forfeit_after = 5;
  cfg.transcript_dir = "/tmp/t";
  ServerConfig back = server_config_from_json(to_json(cfg));
  EXPECT_EQ(to_json(back), to_json(cfg));
  EXPECT_EQ(back.action_timeout, 1234ms);
  EXPECT_EQ(back.menu.at("kuhn3").bots, std::vector<std::string>{"first"});
}

TEST(Server, RejectsBadMenus) {
  EXPECT_THROW(MatchServer(one_queue("t", EnvKind::kTicTacToe, 2,
                                     {"first", "first"})),
               GameError);
  EXPECT_THROW(MatchServer(one_queue("t", EnvKind::kTicTacToe, 2, {"genius"})),
               GameError);
  ServerConfig cfg = one_queue("t", EnvKind::kTicTacToe, 2, {});
  cfg.action_timeout = 0ms;
  EXPECT_THROW(MatchServer{cfg}, GameError);
}

TEST(Address, Parses) {
  Address a = parse_address("example.org:8080");
  EXPECT_EQ(a.host, "example.org");
  EXPECT_EQ(a.port, 8080);
  EXPECT_EQ(to_string(a), "example.org:8080");
  EXPECT_EQ(parse_address("[::1]:7").host, "[::1]");
  EXPECT_THROW(parse_address("nohost"), GameError);
  EXPECT_THROW(parse_address(":80"), GameError);
  EXPECT_THROW(parse_address("h:"), GameError);
  EXPECT_THROW(parse_address("h:80x"), GameError);
  EXPECT_THROW(parse_address("h:70000"), GameError);
}

TEST(Address, ComesFromTheEnvironment) {
  ::unsetenv("COLOSSEUM_ADDR");
  EXPECT_FALSE(address_from_env().has_value());
  ::setenv("COLOSSEUM_ADDR", "10.0.0.2:4242", 1);
  auto a = address_from_env();
  ASSERT_TRUE(a.has_value());
  EXPECT_EQ(a->host, "10.0.0.2");
  EXPECT_EQ(a->port, 4242);
  ::setenv("COLOSSEUM_ADDR", "garbage", 1);
  EXPECT_THROW(address_from_env(), GameError);
  ::unsetenv("COLOSSEUM_ADDR");
}

}  // namespace
}  // namespace colosseum
