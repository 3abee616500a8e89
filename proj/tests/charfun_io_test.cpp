// Copyright 2026 The ufls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "ufls/charfun_io.hpp"

using namespace ufls;

TEST(CharfunIo, ReferenceFixtureEchoesValues) {
  const GamePair games = load_charfun(test::data_path("wecc9_reference.charfun"));
  EXPECT_EQ(games.players(), (std::vector<std::string>{"5", "6", "8"}));
  EXPECT_EQ(games.deltaf.worths().size(), 8u);
  EXPECT_DOUBLE_EQ(games.deltaf.worth(Coalition(0)), 0.0);
  EXPECT_DOUBLE_EQ(games.rocof.worth(Coalition(0)), 0.0);
  EXPECT_DOUBLE_EQ(games.deltaf.worth(games.deltaf.coalition_of(std::vector<std::string>{"5"})),
                   1.2757);
  EXPECT_DOUBLE_EQ(games.rocof.grand_worth(), 2.8071);
  for (std::size_t mask = 0; mask < 8; ++mask) {
    const Coalition s(static_cast<Coalition::mask_type>(mask));
    EXPECT_DOUBLE_EQ(games.deltaf.worth(s), test::reference_deltaf().worth(s));
    EXPECT_DOUBLE_EQ(games.rocof.worth(s), test::reference_rocof().worth(s));
  }
}

TEST(CharfunIo, SerializeParsesBackExactly) {
  std::mt19937_64 rng(99);
  for (std::size_t n = 1; n <= 6; ++n) {
    const GamePair games{test::random_game(n, rng), test::random_game(n, rng)};
    const GamePair again = parse_charfun(serialize_charfun(games));
    EXPECT_EQ(again.players(), games.players());
    EXPECT_TRUE(std::equal(again.deltaf.worths().begin(), again.deltaf.worths().end(),
                           games.deltaf.worths().begin()));
    EXPECT_TRUE(std::equal(again.rocof.worths().begin(), again.rocof.worths().end(),
                           games.rocof.worths().begin()));
  }
}

TEST(CharfunIo, FixtureCopyThroughIsVerbatim) {
  const GamePair games = load_charfun(test::data_path("wecc9_reference.charfun"));
  const std::string text = serialize_charfun(games);
  EXPECT_NE(text.find("members=5, delta_f_hz=1.2757, rocof_hz_s=1.1189"), std::string::npos);
  EXPECT_NE(text.find("members=5,6,8, delta_f_hz=3.1883, rocof_hz_s=2.8071"), std::string::npos);
}

TEST(CharfunIo, EmptyCoalitionOptionalButMustBeZero) {
  const std::string body =
      "members=a, delta_f_hz=1, rocof_hz_s=2\n"
      "members=b, delta_f_hz=1, rocof_hz_s=2\n"
      "members=a,b, delta_f_hz=3, rocof_hz_s=4\n";
  EXPECT_NO_THROW(parse_charfun("members=, delta_f_hz=0, rocof_hz_s=0\n" + body));
  EXPECT_THROW(parse_charfun("members=, delta_f_hz=0.1, rocof_hz_s=0\n" + body), ParseError);
}

TEST(CharfunIo, MissingCoalitionIsAnError) {
  try {
    parse_charfun(
        "members=a, delta_f_hz=1, rocof_hz_s=2\n"
        "members=a,b, delta_f_hz=3, rocof_hz_s=4\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("missing coalition {b}"), std::string::npos) << e.what();
  }
}

TEST(CharfunIo, MalformedRowsReportTheLine) {
  try {
    parse_charfun("# comment\nmembers=a, delta_f_hz=1, rocof_hz_s=2\nmembers=b, delta_f_hz=x, rocof_hz_s=1\n",
                  "cf.txt");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("cf.txt:3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_charfun("a=1\n"), ParseError);
  EXPECT_THROW(parse_charfun("members=a, delta_f_hz=1, rocof_hz_s=2\n"
                             "members=a, delta_f_hz=1, rocof_hz_s=2\n"),
               ParseError);
  EXPECT_THROW(parse_charfun("members=a,a, delta_f_hz=1, rocof_hz_s=2\n"), ParseError);
}

TEST(CharfunIo, RestrictToCandidates) {
  const GamePair games = load_charfun(test::data_path("wecc9_reference.charfun"));
  const GamePair sub = games.restrict_to(std::vector<std::string>{"5", "8"});
  EXPECT_DOUBLE_EQ(sub.deltaf.grand_worth(), 2.2727);
  EXPECT_DOUBLE_EQ(sub.rocof.grand_worth(), 2.0092);
}
