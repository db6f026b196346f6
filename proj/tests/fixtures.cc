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

#include "fixtures.h"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>

namespace colosseum::testing {

StrategyProfile kuhn3_equilibrium() {
  StrategyProfile s(3);
  // Probabilities follow kuhn_legal order: {check, bet} or {call, fold}.
  auto open = [&](std::string_view h, std::array<double, 4> bet) {
    for (int c = 0; c < 4; ++c) s.set(c, h, {1.0 - bet[c], bet[c]});
  };
  auto answer = [&](std::string_view h, std::array<double, 4> call) {
    for (int c = 0; c < 4; ++c) s.set(c, h, {call[c], 1.0 - call[c]});
  };
  open("", {0, 0, 0, 0});
  open("k", {0.25, 0.25, 0, 1});
  open("kk", {0.375, 0.125, 0, 1});
  answer("b", {0, 0, 0, 1});
  answer("kb", {0, 0, 0, 1});
  answer("bc", {0, 0, 0, 1});
  answer("bf", {0, 0, 0.5, 1});
  answer("kkb", {0, 0, 0, 1});
  answer("kbc", {0, 0, 0, 1});
  answer("kbf", {0, 0, 0.5, 1});
  answer("kkbc", {0, 0, 0, 1});
  answer("kkbf", {0, 0, 0.875, 1});
  return s;
}

const RpsRow kRps3Truth[27] = {
    {"RRR", "TTT"}, {"RRP", "LLW"}, {"RRS", "LLW"}, {"RPR", "LWL"},
    {"RPP", "WLL"}, {"RPS", "TTT"}, {"RSR", "LWL"}, {"RSP", "TTT"},
    {"RSS", "WLL"}, {"PRR", "WLL"}, {"PRP", "LWL"}, {"PRS", "TTT"},
    {"PPR", "LLW"}, {"PPP", "TTT"}, {"PPS", "LLW"}, {"PSR", "TTT"},
    {"PSP", "LWL"}, {"PSS", "WLL"}, {"SRR", "WLL"}, {"SRP", "TTT"},
    {"SRS", "LWL"}, {"SPR", "TTT"}, {"SPP", "WLL"}, {"SPS", "LWL"},
    {"SSR", "LLW"}, {"SSP", "LLW"}, {"SSS", "TTT"},
};

TempDir::TempDir(const std::string& label) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("colosseum-" + label + "-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace colosseum::testing
