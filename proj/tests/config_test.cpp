// Copyright 2026 The gradsim Authors
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

#include "gradsim/config.hpp"

#include <gtest/gtest.h>

namespace gradsim {
namespace {

TEST(ConfigTest, EmptyTextYieldsDefaults) {
  const SimConfig c = ParseSimConfig("");
  const SimConfig d;
  EXPECT_EQ(FormatSimConfig(c), FormatSimConfig(d));
  const ProtocolParams p = ParseProtocolParams("# nothing here\n\n");
  EXPECT_DOUBLE_EQ(p.rho_image, 0.35);
  EXPECT_EQ(p.kappa_test, 1000);
}

TEST(ConfigTest, ParsesTypedKeysAndComments) {
  const SimConfig c = ParseSimConfig(
      "n_rounds = 7   # short run\n"
      "seed=123\n"
      "  noise_sigma = 0.5\n"
      "vtrust = 0.25\n"
      "window_weight_1d = 0.2\n"
      "window_weight_7d = 0.5\n"
      "n_overfitter = 0\n");
  EXPECT_EQ(c.n_rounds, 7);
  EXPECT_EQ(c.seed, 123u);
  EXPECT_DOUBLE_EQ(c.landscape.noise_sigma, 0.5);
  EXPECT_DOUBLE_EQ(c.protocol.vtrust, 0.25);
  EXPECT_DOUBLE_EQ(c.protocol.window_weights[0].weight, 0.2);
  EXPECT_EQ(c.population.overfitter, 0);
}

TEST(ConfigTest, FormatRoundTrips) {
  SimConfig c;
  c.seed = 987654321;
  c.landscape.noise_sigma = 0.1 + 0.2;
  c.protocol.epsilon_duplicate = 3e-7;
  c.population.random_search = 5;
  const SimConfig back = ParseSimConfig(FormatSimConfig(c));
  EXPECT_EQ(FormatSimConfig(back), FormatSimConfig(c));
  EXPECT_EQ(back.landscape.noise_sigma, c.landscape.noise_sigma);
}

void ExpectViolation(std::string_view text, std::string_view key) {
  try {
    ParseSimConfig(text);
    FAIL() << "accepted: " << text;
  } catch (const ProtocolError& e) {
    EXPECT_EQ(std::string(e.what()).rfind(key, 0), 0u) << e.what();
  }
}

TEST(ConfigTest, NamesTheOffendingKey) {
  ExpectViolation("bogus = 1\n", "bogus");
  ExpectViolation("n_rounds = 2.5\n", "n_rounds");
  ExpectViolation("seed = 1\nseed = 2\n", "seed");
  ExpectViolation("kappa_test = 0\n", "kappa_test");
  ExpectViolation("rho_instruct = 0.5\n", "category weights");
  ExpectViolation("noise_sigma = abc\n", "noise_sigma");
  EXPECT_THROW(ParseSimConfig("just words\n"), ProtocolError);
}

TEST(ConfigTest, ProtocolParserRejectsSimKeys) {
  EXPECT_THROW(ParseProtocolParams("n_rounds = 5\n"), ProtocolError);
}

TEST(ConfigTest, MissingFileThrows) {
  EXPECT_THROW(LoadSimConfig("/nonexistent/gradsim.cfg"), ProtocolError);
}

}  // namespace
}  // namespace gradsim
