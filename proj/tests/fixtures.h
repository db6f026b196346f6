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

// Shared test fixtures.

#ifndef COLOSSEUM_TESTS_FIXTURES_H_
#define COLOSSEUM_TESTS_FIXTURES_H_

#include <filesystem>
#include <string>

#include "colosseum/kuhn.h"

namespace colosseum::testing {

// An exact equilibrium of 3-player Kuhn poker (cards 0..3). Player 0 never
// opens; the small bluffing frequencies come from the indifference
// conditions.
StrategyProfile kuhn3_equilibrium();

// Three-player rock-paper-scissors outcomes written out by hand: joint
// action (R/P/S per seat) and per-seat result (W/L/T).
struct RpsRow {
  const char* actions;
  const char* outcome;
};
extern const RpsRow kRps3Truth[27];

// Fresh empty directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& label);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);

}  // namespace colosseum::testing

#endif  // COLOSSEUM_TESTS_FIXTURES_H_
