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

#include "colosseum/cli.h"

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "colosseum/agents.h"
#include "colosseum/client.h"
#include "colosseum/matrix_game.h"
#include "colosseum/server.h"
#include "colosseum/tron.h"

namespace colosseum {

namespace fs = std::filesystem;

void apply_param(json& params, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw GameError("parameter '" + assignment + "' is not key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  json parsed = json::parse(value, nullptr, false);
  params[key] = parsed.is_discarded() ? json(value) : parsed;
}

namespace {

int default_players(EnvKind kind) {
  switch (kind) {
    case EnvKind::kTicTacToe:
    case EnvKind::kMatrix:
      return 2;
    case EnvKind::kTron:
    case EnvKind::kBlokus:
      return 4;
    case EnvKind::kRps:
    case EnvKind::kKuhn:
      return 3;
  }
  return 2;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GameError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GameError("cannot read " + path);
  return in;
}

json load_json_file(const std::string& path) {
  auto in = open_in(path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw GameError(path + ": not a JSON object");
  }
  return j;
}

std::string format_record(const RankRecord& r) {
  return "ranks: " + json(r.ranks).dump() +
         "\nrewards: " + json(r.total_reward).dump() + "\n";
}

std::vector<PolicyPtr> resolve_roster(const std::vector<std::string>& names) {
  std::vector<PolicyPtr> out;
  for (const auto& n : names) out.push_back(make_policy(n));
  return out;
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

struct PlayOpts {
  std::string env;
  int players = 0;
  std::vector<std::string> agents;
  uint64_t seed = 0;
  std::vector<std::string> params;
  std::string transcript;
  std::string tron_replay;
  bool render = false;
  bool remote = false;
  std::string addr;
  std::string queue;
  std::string name = "cli";
  std::string agent = "random";
  int games = 1;
};

struct TournamentOpts {
  std::string config;
  std::string env;
  std::vector<std::string> roster;
  int64_t games = 0;
  int seats = 0;
  uint64_t seed = 0;
  std::string out;
  int jobs = 1;
  std::vector<std::string> params;
  bool transcripts = false;
};

struct ServeOpts {
  std::string config;
  std::string listen;
  std::string env;
  int players = 0;
  std::vector<std::string> bots;
  std::vector<std::string> params;
  int64_t timeout_ms = 0;
  int max_matches = 0;
  uint64_t seed = 0;
  std::string transcripts;
  int64_t stop_after = 0;
  std::string tournament_out;
};

EnvConfig env_from_flags(const std::string& env, int players,
                         const std::vector<std::string>& params) {
  EnvConfig c;
  c.env = parse_env_kind(env);
  c.players = players > 0 ? players : default_players(c.env);
  for (const auto& p : params) apply_param(c.params, p);
  return c;
}

int cmd_play_local(const PlayOpts& o, std::ostream& out) {
  EnvConfig cfg = env_from_flags(o.env, o.players, o.params);
  const Rng root(o.seed);
  cfg.seed = root.derive("env").next();
  std::vector<std::string> names = o.agents;
  if (names.empty()) names.assign(cfg.players, "random");
  if (static_cast<int>(names.size()) != cfg.players) {
    throw GameError(std::to_string(names.size()) + " agents for " +
                    std::to_string(cfg.players) + " players");
  }
  const auto policies = resolve_roster(names);
  MatchResult m = play_match(cfg, policies, root.derive("agents"));
  if (o.render) {
    ReplayOutcome r = replay_transcript(m.transcript, true);
    for (const auto& f : r.frames) out << f << "\n";
  }
  if (!o.transcript.empty()) {
    auto f = open_out(o.transcript);
    write_transcript(f, m.transcript);
  }
  if (!o.tron_replay.empty()) {
    if (cfg.env != EnvKind::kTron) {
      throw GameError("--tron-replay needs --env tron");
    }
    TronReplay rep{tron_config_from(cfg), cfg.seed, {}};
    for (const auto& s : m.transcript.steps) rep.steps.push_back(s.actions);
    auto f = open_out(o.tron_replay);
    write_tron_replay(f, rep);
  }
  out << format_record(m.record);
  return 0;
}

int cmd_play_remote(const PlayOpts& o, std::ostream& out) {
  Address addr;
  if (!o.addr.empty()) {
    addr = parse_address(o.addr);
  } else if (auto env = address_from_env()) {
    addr = *env;
  }
  const PolicyPtr policy = make_policy(o.agent);
  const std::string queue = o.queue.empty() ? o.env : o.queue;
  if (queue.empty()) throw GameError("--remote needs --queue or --env");
  RemoteClient client(addr, o.name);
  for (int g = 0; g < o.games; ++g) {
    Rng rng = Rng(o.seed).derive("agents").derive(g);
    RemoteResult r = client.play(
        queue, [&](const Observation& obs, const std::vector<Action>& legal,
                   int) -> std::optional<Action> {
          return policy->act(obs, legal, rng);
        });
    out << "match " << r.match_id << " seat " << r.seat
        << (r.aborted ? " aborted" : "") << "\n"
        << format_record(r.record);
  }
  return 0;
}

int cmd_tournament(const TournamentOpts& o, const CLI::App& app,
                   std::ostream& out) {
  LocalTournament spec;
  json file = o.config.empty() ? json::object() : load_json_file(o.config);
  if (file.contains("env")) spec.env = env_config_from_json(file["env"]);
  if (file.contains("roster")) {
    spec.tournament = tournament_config_from_json(file);
  } else {
    spec.tournament.seats = 0;
  }
  spec.jobs = file.value("jobs", 1);
  spec.tournament.games = file.value("games", int64_t{0});

  if (app.count("--env")) {
    spec.env = env_from_flags(o.env, 0, {});
  } else if (!file.contains("env")) {
    throw GameError("tournament needs --env or an env in --config");
  }
  for (const auto& p : o.params) apply_param(spec.env.params, p);
  if (app.count("--roster")) spec.tournament.roster = o.roster;
  if (app.count("--games")) spec.tournament.games = o.games;
  if (app.count("--seats")) spec.tournament.seats = o.seats;
  if (app.count("--seed")) spec.tournament.seed = o.seed;
  if (app.count("--jobs")) spec.jobs = o.jobs;
  if (spec.tournament.seats <= 0) {
    spec.tournament.seats = file.contains("env") ? spec.env.players
                                                 : default_players(spec.env.env);
  }
  if (spec.tournament.roster.empty()) throw GameError("empty roster");
  spec.keep_transcripts = o.transcripts && !o.out.empty();

  LocalTournamentOutput res = run_local_tournament(spec);
  if (!o.out.empty()) {
    write_tournament_reports(o.out, spec.tournament, res.result);
    if (spec.keep_transcripts) {
      fs::path dir = fs::path(o.out) / "transcripts";
      fs::create_directories(dir);
      for (const auto& t : res.transcripts) {
        auto f = open_out(dir / (t.match_id + ".jsonl"));
        write_transcript(f, t);
      }
    }
  }
  const auto labels = agent_labels(spec.tournament.roster);
  out << brace_list(labels, res.result.ranking.order) << "\n";
  return 0;
}

int cmd_serve(const ServeOpts& o, const CLI::App& app, std::ostream& out,
              std::ostream& err) {
  ServerConfig cfg;
  if (!o.config.empty()) cfg = server_config_from_json(load_json_file(o.config));
  if (!o.listen.empty()) {
    cfg.listen = parse_address(o.listen);
  } else if (auto env = address_from_env()) {
    cfg.listen = *env;
  }
  if (!o.env.empty()) {
    MenuEntry m;
    m.config = env_from_flags(o.env, o.players, o.params);
    m.bots = o.bots;
    cfg.menu[o.env] = std::move(m);
  }
  if (cfg.menu.empty()) throw GameError("serve needs --env or a menu in --config");
  if (app.count("--timeout-ms")) {
    cfg.action_timeout = std::chrono::milliseconds(o.timeout_ms);
  }
  if (app.count("--max-matches")) cfg.max_concurrent_matches = o.max_matches;
  if (app.count("--seed")) cfg.seed = o.seed;
  if (app.count("--transcripts")) cfg.transcript_dir = o.transcripts;
  if (!o.tournament_out.empty() && !cfg.tournament) {
    throw GameError("--tournament-out needs a tournament in --config");
  }

  std::unique_ptr<TournamentRecorder> recorder;
  if (cfg.tournament) {
    recorder = std::make_unique<TournamentRecorder>(*cfg.tournament);
  }
  MatchServer server(cfg);
  server.set_logger([&err](const std::string& line) {
    err << "[colosseum] " << line << std::endl;
  });
  if (recorder) {
    server.set_report_sink(
        [&recorder](const MatchReport& r) { recorder->record(r); });
  }
  g_interrupted = false;
  auto prev_int = std::signal(SIGINT, on_signal);
  auto prev_term = std::signal(SIGTERM, on_signal);
  server.start();
  out << "listening on " << cfg.listen.host << ":" << server.port()
      << std::endl;
  while (!g_interrupted) {
    if (o.stop_after > 0 &&
        server.wait_for_matches(o.stop_after, std::chrono::milliseconds(100))) {
      break;
    }
    if (o.stop_after <= 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  }
  server.stop();
  std::signal(SIGINT, prev_int);
  std::signal(SIGTERM, prev_term);
  const ServerStats s = server.stats();
  out << "matches completed " << s.completed << ", aborted " << s.aborted
      << "\n";
  if (recorder && !o.tournament_out.empty()) {
    TournamentResult r = recorder->result();
    write_tournament_reports(o.tournament_out, recorder->config(), r);
    out << brace_list(agent_labels(recorder->config().roster), r.ranking.order)
        << "\n";
  }
  return 0;
}

int cmd_replay(const std::string& path, bool render, std::ostream& out) {
  auto in = open_in(path);
  std::string first;
  std::getline(in, first);
  in.clear();
  in.seekg(0);
  if (first.rfind("tron-replay", 0) == 0) {
    TronReplay rep = read_tron_replay(in);
    EnvConfig cfg;
    cfg.env = EnvKind::kTron;
    cfg.players = rep.config.players;
    cfg.seed = rep.seed;
    cfg.params = {{"rows", rep.config.rows},
                  {"cols", rep.config.cols},
                  {"mode", rep.config.mode == TronMode::kSequential
                               ? "sequential"
                               : "simultaneous"}};
    StatePtr state = new_game(cfg);
    if (render) out << state->render() << "\n";
    for (size_t i = 0; i < rep.steps.size(); ++i) {
      if (state->is_terminal()) {
        throw GameError("replay line " + std::to_string(i + 2) +
                        ": game already over");
      }
      try {
        state = state->step(rep.steps[i]).next_state;
      } catch (const GameError& e) {
        throw GameError("replay line " + std::to_string(i + 2) + ": " +
                        e.what());
      }
      if (render) out << state->render() << "\n";
    }
    if (!state->is_terminal()) {
      out << "game not finished after " << rep.steps.size() << " steps\n";
      return 0;
    }
    out << format_record(state->rankings());
    return 0;
  }
  Transcript t = read_transcript(in);
  ReplayOutcome r = replay_transcript(t, render);
  for (const auto& f : r.frames) out << f << "\n";
  out << format_record(r.record) << "replay matches recorded result\n";
  return 0;
}

int cmd_gen_matrix(const std::vector<int>& actions, uint64_t seed,
                   bool zero_sum, const std::string& path, std::ostream& out) {
  if (actions.empty()) throw GameError("--actions must list each player's count");
  PayoffTensor t = random_payoff(actions, seed, zero_sum);
  if (path.empty()) {
    write_payoff_tensor(out, t);
  } else {
    auto f = open_out(path);
    write_payoff_tensor(f, t);
  }
  return 0;
}

int cmd_report(const std::string& records, const std::string& dir,
               std::ostream& out) {
  auto in = open_in(records);
  auto [config, recs] = read_records(in);
  TournamentResult r = summarize(config, std::move(recs));
  if (!dir.empty()) write_tournament_reports(dir, config, r);
  out << brace_list(agent_labels(config.roster), r.ranking.order) << "\n";
  return 0;
}

}  // namespace

LocalTournamentOutput run_local_tournament(const LocalTournament& spec) {
  const auto& tc = spec.tournament;
  const auto policies = resolve_roster(tc.roster);
  EnvConfig base = spec.env;
  base.players = tc.seats;
  new_game(base);  // fail fast on a bad environment

  LocalTournamentOutput out;
  if (spec.keep_transcripts) out.transcripts.resize(tc.games);
  MatchRunner runner = [&](const std::vector<AgentId>& seating, int64_t index,
                           const GameStreams& streams) {
    EnvConfig cfg = base;
    cfg.seed = streams.env_seed;
    std::vector<PolicyPtr> seats;
    for (AgentId a : seating) seats.push_back(policies[a]);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "game-%06lld",
                  static_cast<long long>(index));
    MatchResult m = play_match(cfg, seats, streams.agents, buf);
    if (spec.keep_transcripts) {
      for (size_t s = 0; s < seating.size(); ++s) {
        m.transcript.seats[s] = tc.roster[seating[s]];
      }
      out.transcripts[index] = std::move(m.transcript);
    }
    return m.record;
  };
  out.result = run_tournament(tc, runner, spec.jobs);
  return out;
}

void write_tournament_reports(const std::string& dir,
                              const TournamentConfig& config,
                              const TournamentResult& result) {
  fs::create_directories(dir);
  const fs::path d(dir);
  const auto labels = agent_labels(config.roster);
  {
    auto f = open_out(d / "records.jsonl");
    write_records(f, config, result.records);
  }
  {
    auto f = open_out(d / "distribution.csv");
    write_distribution_csv(f, labels, result.distribution, config.seats);
  }
  {
    auto f = open_out(d / "distribution.dat");
    write_plot_data(f, labels, result.distribution, config.seats);
  }
  {
    auto f = open_out(d / "pairwise.csv");
    write_pairwise_csv(f, labels, result.table);
  }
  {
    auto f = open_out(d / "ranked_pairs.txt");
    f << brace_list(labels, result.ranking.order) << "\n";
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Multi-agent game environments, tournaments and match server"};
  app.name("colosseum");
  app.require_subcommand(1);

  PlayOpts play;
  auto* p = app.add_subcommand("play", "Play one match locally or remotely");
  p->add_option("--env", play.env, "Environment name");
  p->add_option("--players", play.players, "Number of players");
  p->add_option("--agents", play.agents, "Agent per seat")->delimiter(',');
  p->add_option("--seed", play.seed, "Root seed");
  p->add_option("--param", play.params, "Environment parameter key=value");
  p->add_option("--transcript", play.transcript, "Write a transcript here");
  p->add_option("--tron-replay", play.tron_replay, "Write a Tron replay here");
  p->add_flag("--render", play.render, "Print every frame");
  p->add_flag("--remote", play.remote, "Play on a server instead");
  p->add_option("--addr", play.addr, "Server host:port (else COLOSSEUM_ADDR)");
  p->add_option("--queue", play.queue, "Server queue (defaults to --env)");
  p->add_option("--name", play.name, "Login name");
  p->add_option("--agent", play.agent, "Agent driving the remote seat");
  p->add_option("--games", play.games, "Remote matches to play")
      ->check(CLI::PositiveNumber);

  TournamentOpts tour;
  auto* t = app.add_subcommand("tournament", "Run a local tournament");
  t->add_option("--config", tour.config, "Tournament config JSON")
      ->check(CLI::ExistingFile);
  t->add_option("--env", tour.env, "Environment name");
  t->add_option("--roster", tour.roster, "Agents")->delimiter(',');
  t->add_option("--games", tour.games, "Games to play")
      ->check(CLI::NonNegativeNumber);
  t->add_option("--seats", tour.seats, "Seats per game")
      ->check(CLI::PositiveNumber);
  t->add_option("--seed", tour.seed, "Root seed");
  t->add_option("--out", tour.out, "Report directory");
  t->add_option("--jobs", tour.jobs, "Parallel games")
      ->check(CLI::PositiveNumber);
  t->add_option("--param", tour.params, "Environment parameter key=value");
  t->add_flag("--transcripts", tour.transcripts,
              "Also write one transcript per game under <out>/transcripts");

  ServeOpts serve;
  auto* s = app.add_subcommand("serve", "Run the match server");
  s->add_option("--config", serve.config, "Server config JSON")
      ->check(CLI::ExistingFile);
  s->add_option("--listen", serve.listen,
                "host:port (else COLOSSEUM_ADDR, else config)");
  s->add_option("--env", serve.env, "Add a queue for this environment");
  s->add_option("--players", serve.players, "Seats for --env");
  s->add_option("--bots", serve.bots, "Server-side bots for --env")
      ->delimiter(',');
  s->add_option("--param", serve.params, "Environment parameter key=value");
  s->add_option("--timeout-ms", serve.timeout_ms, "Per-action timeout")
      ->check(CLI::PositiveNumber);
  s->add_option("--max-matches", serve.max_matches, "Concurrent match cap")
      ->check(CLI::PositiveNumber);
  s->add_option("--seed", serve.seed, "Root seed");
  s->add_option("--transcripts", serve.transcripts, "Transcript directory");
  s->add_option("--stop-after", serve.stop_after,
                "Exit after this many matches");
  s->add_option("--tournament-out", serve.tournament_out,
                "Write tournament reports here on exit");

  std::string replay_path;
  bool replay_render = false;
  auto* r = app.add_subcommand("replay", "Re-simulate a transcript");
  r->add_option("file", replay_path, "Transcript or Tron replay")
      ->required()
      ->check(CLI::ExistingFile);
  r->add_flag("--render", replay_render, "Print every frame");

  std::vector<int> gm_actions;
  uint64_t gm_seed = 0;
  bool gm_zero_sum = false;
  std::string gm_out;
  auto* g = app.add_subcommand("gen-matrix", "Generate a random payoff tensor");
  g->add_option("--actions", gm_actions, "Actions per player, e.g. 3,3,2")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  g->add_option("--seed", gm_seed, "Seed");
  g->add_flag("--zero-sum", gm_zero_sum, "Project onto zero-sum payoffs");
  g->add_option("--out", gm_out, "Output file (default stdout)");

  std::string rep_records, rep_out;
  auto* rp = app.add_subcommand("report", "Rebuild reports from a records file");
  rp->add_option("--records", rep_records, "records.jsonl")
      ->required()
      ->check(CLI::ExistingFile);
  rp->add_option("--out", rep_out, "Report directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (p->parsed()) {
      if (!play.remote && play.env.empty()) {
        err << "play: --env is required for local matches\n";
        return 2;
      }
      return play.remote ? cmd_play_remote(play, out)
                         : cmd_play_local(play, out);
    }
    if (t->parsed()) return cmd_tournament(tour, *t, out);
    if (s->parsed()) return cmd_serve(serve, *s, out, err);
    if (r->parsed()) return cmd_replay(replay_path, replay_render, out);
    if (g->parsed()) {
      return cmd_gen_matrix(gm_actions, gm_seed, gm_zero_sum, gm_out, out);
    }
    if (rp->parsed()) return cmd_report(rep_records, rep_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace colosseum
