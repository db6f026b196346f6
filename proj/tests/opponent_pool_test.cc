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

#include "colosseum/opponent_pool.h"

#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include "stats.h"

namespace colosseum {
namespace {

void fill(OpponentPool& pool, int n) {
  for (int i = 0; i < n; ++i) pool.add(*make_policy("random"));
}

TEST(OpponentPool, SingleSnapshotAlwaysLatest) {
  OpponentPool pool(PoolConfig{1, 0.8, 0.5, 100});
  fill(pool, 3);
  EXPECT_EQ(pool.size(), 1u);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(pool.sample_indices(4, rng), (std::vector<int>{0, 0, 0, 0}));
  }
}

TEST(OpponentPool, EvictsOldestAtCapacity) {
  OpponentPool pool(PoolConfig{4, 0.8, 0.5, 100});
  fill(pool, 4);
  auto before = pool.manifest();
  pool.add(*make_policy("first"));
  auto after = pool.manifest();
  ASSERT_EQ(after.size(), 4u);
  EXPECT_EQ(after.front().version, before[1].version);
  EXPECT_EQ(after.back().version, 5);
  EXPECT_EQ(after.back().policy, "first");
}

TEST(OpponentPool, EmptyPoolCannotSample) {
  OpponentPool pool({});
  Rng rng(1);
  EXPECT_THROW(pool.sample_indices(1, rng), GameError);
}

TEST(OpponentPool, UpdateBelowThresholdKeepsPool) {
  OpponentPool pool(PoolConfig{1, 0.8, 0.8, 100});
  fill(pool, 1);
  for (int i = 0; i < 100; ++i) pool.record_game(i < 79);
  EXPECT_DOUBLE_EQ(pool.winrate(), 0.79);
  EXPECT_FALSE(pool.maybe_update(*make_policy("first")));
  EXPECT_EQ(pool.manifest().back().version, 1);
}

TEST(OpponentPool, UpdateAboveThresholdAppends) {
  OpponentPool pool(PoolConfig{4, 0.8, 0.5, 100});
  fill(pool, 1);
  for (int i = 0; i < 100; ++i) pool.record_game(i < 55);
  EXPECT_TRUE(pool.maybe_update(*make_policy("first")));
  EXPECT_EQ(pool.size(), 2u);
  EXPECT_EQ(pool.manifest().back().created_at_game, 100);
  // The window restarts after an update.
  EXPECT_EQ(pool.games_in_window(), 0);
  EXPECT_FALSE(pool.maybe_update(*make_policy("first")));
}

TEST(OpponentPool, NeedsAFullWindow) {
  OpponentPool pool(PoolConfig{1, 0.8, 0.5, 100});
  fill(pool, 1);
  for (int i = 0; i < 99; ++i) pool.record_game(true);
  EXPECT_FALSE(pool.maybe_update(*make_policy("first")));
  pool.record_game(true);
  EXPECT_TRUE(pool.maybe_update(*make_policy("first")));
}

TEST(OpponentPool, FourSnapshotSplit) {
  OpponentPool pool(PoolConfig{4, 0.8, 0.5, 100});
  fill(pool, 4);
  Rng rng(99);
  const int n = 100000;
  std::vector<int64_t> counts(4, 0);
  for (int i = 0; i < n; ++i) ++counts[pool.sample_indices(1, rng)[0]];
  EXPECT_TRUE(oracle::within_sigma(counts[3], n, 0.8, 3.0)) << counts[3];
  for (int k = 0; k < 3; ++k) {
    EXPECT_TRUE(oracle::within_sigma(counts[k], n, 0.2 / 3, 3.0)) << counts[k];
  }
}

TEST(OpponentPool, SeatsDrawIndependently) {
  OpponentPool pool(PoolConfig{4, 0.8, 0.5, 100});
  fill(pool, 4);
  Rng rng(100);
  const int n = 100000;
  int64_t all_latest = 0;
  for (int i = 0; i < n; ++i) {
    auto s = pool.sample_indices(3, rng);
    all_latest += s == std::vector<int>{3, 3, 3};
  }
  EXPECT_TRUE(oracle::within_sigma(all_latest, n, 0.512, 3.0)) << all_latest;
}

TEST(OpponentPool, SamplingIsSafeDuringUpdates) {
  OpponentPool pool({4, 0.8, 0.5, 1});
  pool.add(*make_policy("random"));
  std::thread writer([&] {
    for (int i = 0; i < 2000; ++i) {
      pool.record_game(true);
      pool.maybe_update(*make_policy("first"));
    }
  });
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    auto ops = pool.sample_opponents(3, rng);
    ASSERT_EQ(ops.size(), 3u);
    for (const auto& p : ops) ASSERT_TRUE(p);
  }
  writer.join();
  EXPECT_EQ(pool.size(), 4u);
}

TEST(Manifest, RoundTrip) {
  OpponentPool pool(PoolConfig{4, 0.8, 0.5, 100});
  fill(pool, 2);
  pool.add(*make_policy("scripted:eps=0.25"));
  std::stringstream ss;
  pool.write_manifest(ss);
  EXPECT_EQ(read_manifest(ss), pool.manifest());
}

TEST(Manifest, BadLine) {
  std::stringstream ss("pool-manifest v1\n1 0 random\nnope\n");
  try {
    read_manifest(ss);
    FAIL();
  } catch (const GameError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Baselines, TwelveLabels) {
  const auto& grid = baseline_grid();
  ASSERT_EQ(grid.size(), 12u);
  EXPECT_DOUBLE_EQ(baseline("Sα").epsilon, 0.05);
  EXPECT_DOUBLE_EQ(baseline("Sβ").epsilon, 0.25);
  EXPECT_DOUBLE_EQ(baseline("Sγ").epsilon, 1.0);
  EXPECT_EQ(baseline("SPα").pool.capacity, 1);
  EXPECT_DOUBLE_EQ(baseline("SPβ").pool.win_threshold, 0.8);
  EXPECT_EQ(baseline("FSPβ").pool.capacity, 4);
  EXPECT_EQ(baseline("FSPδ").pool.capacity, 16);
  EXPECT_DOUBLE_EQ(baseline("FSPγ").pool.win_threshold, 0.5);
  EXPECT_DOUBLE_EQ(baseline("FSPα").pool.latest_prob, 0.8);
  EXPECT_EQ(baseline("Fγ").kind, BaselineSpec::Kind::kFixed);
  EXPECT_THROW(baseline("PPO"), GameError);
}

}  // namespace
}  // namespace colosseum
