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

#include "colosseum/tournament.h"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace colosseum {

json to_json(const TournamentConfig& c) {
  return {{"roster", c.roster},
          {"games", c.games},
          {"seats", c.seats},
          {"seed", c.seed}};
}

TournamentConfig tournament_config_from_json(const json& j) {
  TournamentConfig c;
  c.roster = j.at("roster").get<std::vector<std::string>>();
  c.games = j.value("games", c.games);
  c.seats = j.value("seats", c.seats);
  c.seed = j.value("seed", c.seed);
  return c;
}

std::vector<std::string> agent_labels(const std::vector<std::string>& roster) {
  std::map<std::string, int> total, seen;
  for (const auto& r : roster) ++total[r];
  std::vector<std::string> out;
  for (const auto& r : roster) {
    if (total[r] == 1) {
      out.push_back(r);
    } else {
      out.push_back(r + "#" + std::to_string(++seen[r]));
    }
  }
  return out;
}

std::vector<AgentId> sample_seating(int roster_size, int seats, Rng& rng) {
  if (seats < 1) throw GameError("sample_seating: seats must be positive");
  if (roster_size < seats) {
    throw GameError("sample_seating: roster of " +
                    std::to_string(roster_size) + " cannot fill " +
                    std::to_string(seats) + " seats");
  }
  std::vector<AgentId> ids(roster_size);
  std::iota(ids.begin(), ids.end(), 0);
  // Partial Fisher-Yates: the first `seats` slots are an ordered sample.
  for (int i = 0; i < seats; ++i) {
    int j = i + static_cast<int>(rng.uniform_int(roster_size - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(seats);
  return ids;
}

PairwiseTable::PairwiseTable(int agents)
    : n_(agents),
      wins_(static_cast<size_t>(agents) * agents, 0),
      meets_(static_cast<size_t>(agents) * agents, 0) {}

void PairwiseTable::add(const GameRecord& record) {
  const auto& seat = record.seating;
  const auto& rank = record.result.ranks;
  if (seat.size() != rank.size()) {
    throw GameError("pairwise: seating and ranks differ in length");
  }
  for (size_t i = 0; i < seat.size(); ++i) {
    for (size_t j = i + 1; j < seat.size(); ++j) {
      AgentId a = seat[i], b = seat[j];
      if (a < 0 || a >= n_ || b < 0 || b >= n_) {
        throw GameError("pairwise: agent id out of range");
      }
      ++meets_[a * n_ + b];
      ++meets_[b * n_ + a];
      if (rank[i] < rank[j]) ++wins_[a * n_ + b];
      if (rank[j] < rank[i]) ++wins_[b * n_ + a];
    }
  }
}

void PairwiseTable::set(AgentId a, AgentId b, int64_t wins_ab,
                        int64_t wins_ba, int64_t meetings) {
  if (wins_ab < 0 || wins_ba < 0 || wins_ab + wins_ba > meetings) {
    throw GameError("pairwise: inconsistent counts");
  }
  wins_[a * n_ + b] = wins_ab;
  wins_[b * n_ + a] = wins_ba;
  meets_[a * n_ + b] = meets_[b * n_ + a] = meetings;
}

int64_t PairwiseTable::total_meetings() const {
  int64_t total = 0;
  for (int a = 0; a < n_; ++a) {
    for (int b = a + 1; b < n_; ++b) total += meetings(a, b);
  }
  return total;
}

std::vector<DistributionRow> ranking_distribution(
    std::span<const GameRecord> records, int roster_size, int seats) {
  std::vector<DistributionRow> rows(roster_size);
  for (int a = 0; a < roster_size; ++a) {
    rows[a].agent = a;
    rows[a].counts.assign(seats, 0);
  }
  for (const auto& rec : records) {
    for (size_t s = 0; s < rec.seating.size(); ++s) {
      int r = rec.result.ranks.at(s);
      if (r < 1 || r > seats) throw GameError("distribution: rank out of range");
      ++rows.at(rec.seating[s]).counts[r - 1];
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const DistributionRow& x, const DistributionRow& y) {
                     if (x.counts[0] != y.counts[0]) {
                       return x.counts[0] > y.counts[0];
                     }
                     return x.agent < y.agent;
                   });
  return rows;
}

namespace {

bool reaches(const std::vector<std::vector<AgentId>>& adj, AgentId from,
             AgentId to) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<AgentId> stack = {from};
  while (!stack.empty()) {
    AgentId v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[v]) continue;
    seen[v] = 1;
    for (AgentId w : adj[v]) stack.push_back(w);
  }
  return false;
}

}  // namespace

RankedPairsResult ranked_pairs(const PairwiseTable& table,
                               std::span<const int64_t> first_places) {
  const int n = table.size();
  if (!first_places.empty() && static_cast<int>(first_places.size()) != n) {
    throw GameError("ranked_pairs: first_places has the wrong length");
  }
  struct Edge {
    AgentId a, b;
    int64_t w, m;
  };
  std::vector<Edge> edges;
  for (AgentId a = 0; a < n; ++a) {
    for (AgentId b = 0; b < n; ++b) {
      if (a == b) continue;
      int64_t m = table.meetings(a, b), w = table.wins(a, b);
      if (m > 0 && 2 * w > m) edges.push_back({a, b, w, m});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    __int128 lhs = static_cast<__int128>(x.w) * y.m;
    __int128 rhs = static_cast<__int128>(y.w) * x.m;
    if (lhs != rhs) return lhs > rhs;
    if (x.m != y.m) return x.m > y.m;
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });

  RankedPairsResult out;
  std::vector<std::vector<AgentId>> adj(n);
  for (const Edge& e : edges) {
    if (reaches(adj, e.b, e.a)) {
      out.skipped.emplace_back(e.a, e.b);
      continue;
    }
    adj[e.a].push_back(e.b);
    out.locked.emplace_back(e.a, e.b);
  }

  std::vector<int> indegree(n, 0);
  for (const auto& [a, b] : out.locked) ++indegree[b];
  std::vector<char> placed(n, 0);
  for (int k = 0; k < n; ++k) {
    AgentId best = -1;
    for (AgentId v = 0; v < n; ++v) {
      if (placed[v] || indegree[v] != 0) continue;
      if (best < 0) {
        best = v;
      } else if (!first_places.empty() &&
                 first_places[v] > first_places[best]) {
        best = v;
      }
    }
    // Locking never closes a cycle, so a source always exists.
    assert(best >= 0);
    if (best < 0) throw std::logic_error("ranked_pairs: locked graph cyclic");
    placed[best] = 1;
    out.order.push_back(best);
    for (AgentId w : adj[best]) --indegree[w];
  }
  return out;
}

GameStreams game_streams(uint64_t seed, int64_t index) {
  const Rng root(seed);
  const auto i = static_cast<uint64_t>(index);
  Rng env = root.derive("env").derive(i);
  return {root.derive("matchmaking").derive(i), env.next(),
          root.derive("agents").derive(i)};
}

TournamentResult summarize(const TournamentConfig& config,
                           std::vector<GameRecord> records) {
  const int n = static_cast<int>(config.roster.size());
  TournamentResult out{std::move(records), PairwiseTable(n), {}, {}};
  for (const auto& r : out.records) out.table.add(r);
  out.distribution = ranking_distribution(out.records, n, config.seats);
  std::vector<int64_t> firsts(n, 0);
  for (const auto& row : out.distribution) firsts[row.agent] = row.counts[0];
  out.ranking = ranked_pairs(out.table, firsts);
  return out;
}

TournamentResult run_tournament(const TournamentConfig& config,
                                const MatchRunner& runner, int jobs) {
  const int n = static_cast<int>(config.roster.size());
  if (config.seats < 1 || n < config.seats) {
    throw GameError("tournament: roster of " + std::to_string(n) +
                    " cannot fill " + std::to_string(config.seats) + " seats");
  }
  if (config.games < 0) throw GameError("tournament: negative game count");
  std::vector<GameRecord> records(config.games);
  std::atomic<int64_t> next{0};
  std::mutex err_mu;
  int64_t err_index = -1;
  std::string err_what;

  auto worker = [&] {
    for (;;) {
      const int64_t i = next.fetch_add(1);
      if (i >= config.games) return;
      {
        std::lock_guard<std::mutex> lock(err_mu);
        if (err_index >= 0 && err_index < i) return;
      }
      try {
        GameStreams streams = game_streams(config.seed, i);
        GameRecord rec;
        rec.index = i;
        rec.seating = sample_seating(n, config.seats, streams.seating);
        rec.result = runner(rec.seating, i, streams);
        if (static_cast<int>(rec.result.ranks.size()) != config.seats) {
          throw GameError("runner returned " +
                          std::to_string(rec.result.ranks.size()) +
                          " ranks for " + std::to_string(config.seats) +
                          " seats");
        }
        records[i] = std::move(rec);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (err_index < 0 || i < err_index) {
          err_index = i;
          err_what = e.what();
        }
      }
    }
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err_index >= 0) throw TournamentError(err_index, err_what);
  return summarize(config, std::move(records));
}

std::string brace_list(const std::vector<std::string>& labels,
                       std::span<const AgentId> order) {
  std::string out = "{";
  for (size_t i = 0; i < order.size(); ++i) {
    if (i) out += ", ";
    out += labels.at(order[i]);
  }
  return out + "}";
}

void write_records(std::ostream& out, const TournamentConfig& config,
                   std::span<const GameRecord> records) {
  json header = to_json(config);
  header["type"] = "tournament";
  header["v"] = 1;
  out << header.dump() << '\n';
  for (const auto& r : records) {
    json j = {{"game", r.index},
              {"seating", r.seating},
              {"ranks", r.result.ranks},
              {"total_reward", r.result.total_reward}};
    out << j.dump() << '\n';
  }
}

std::pair<TournamentConfig, std::vector<GameRecord>> read_records(
    std::istream& in) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    return GameError("records line " + std::to_string(lineno) + ": " + what);
  };
  std::pair<TournamentConfig, std::vector<GameRecord>> out;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw fail("not a JSON object");
    try {
      if (!have_header) {
        if (j.value("type", "") != "tournament") throw fail("missing header");
        out.first = tournament_config_from_json(j);
        have_header = true;
        continue;
      }
      GameRecord r;
      r.index = j.at("game").get<int64_t>();
      r.seating = j.at("seating").get<std::vector<AgentId>>();
      r.result = rank_record_from_json(j);
      const int n = static_cast<int>(out.first.roster.size());
      for (AgentId a : r.seating) {
        if (a < 0 || a >= n) throw fail("agent id out of range");
      }
      if (r.seating.size() != r.result.ranks.size()) {
        throw fail("seating and ranks differ in length");
      }
      out.second.push_back(std::move(r));
    } catch (const std::exception& e) {
      if (std::string_view(e.what()).starts_with("records line")) throw;
      throw fail(e.what());
    }
  }
  if (!have_header) throw GameError("records: empty file");
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

}  // namespace

void write_distribution_csv(std::ostream& out,
                            const std::vector<std::string>& labels,
                            std::span<const DistributionRow> rows, int seats) {
  out << "agent";
  for (int r = 1; r <= seats; ++r) out << ",rank" << r;
  out << '\n';
  for (const auto& row : rows) {
    out << csv_field(labels.at(row.agent));
    for (int64_t c : row.counts) out << ',' << c;
    out << '\n';
  }
}

std::vector<std::pair<std::string, std::vector<int64_t>>>
read_distribution_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw GameError("distribution: empty file");
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "agent") {
    throw GameError("distribution line 1: expected 'agent' column");
  }
  std::vector<std::pair<std::string, std::vector<int64_t>>> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw GameError("distribution line " + std::to_string(lineno) +
                      ": expected " + std::to_string(header.size()) +
                      " fields");
    }
    std::vector<int64_t> counts;
    for (size_t i = 1; i < fields.size(); ++i) {
      try {
        size_t used = 0;
        counts.push_back(std::stoll(fields[i], &used));
        if (used != fields[i].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw GameError("distribution line " + std::to_string(lineno) +
                        ": bad count '" + fields[i] + "'");
      }
    }
    out.emplace_back(fields[0], std::move(counts));
  }
  return out;
}

void write_plot_data(std::ostream& out, const std::vector<std::string>& labels,
                     std::span<const DistributionRow> rows, int seats) {
  out << "# agent";
  for (int r = 1; r <= seats; ++r) out << " rank" << r;
  out << '\n';
  for (const auto& row : rows) {
    out << '"' << labels.at(row.agent) << '"';
    for (int64_t c : row.counts) out << ' ' << c;
    out << '\n';
  }
}

void write_pairwise_csv(std::ostream& out,
                        const std::vector<std::string>& labels,
                        const PairwiseTable& table) {
  out << "agent,opponent,wins,losses,meetings\n";
  for (int a = 0; a < table.size(); ++a) {
    for (int b = 0; b < table.size(); ++b) {
      if (a == b || table.meetings(a, b) == 0) continue;
      out << csv_field(labels.at(a)) << ',' << csv_field(labels.at(b)) << ','
          << table.wins(a, b) << ',' << table.wins(b, a) << ','
          << table.meetings(a, b) << '\n';
    }
  }
}

}  // namespace colosseum
