// Copyright 2026 The wbseg Authors
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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "wbseg/error.hpp"
#include "wbseg/ngram/model.hpp"

namespace wbseg::ngram {
namespace {

using Lines = std::vector<std::string>;

NgramModel toy_model(int order = 2) {
  return estimate_kn(count_ngrams(Lines{"abab", "abab", "ba b"}, order));
}

TEST(ArpaTest, RoundTripPreservesEveryQuery) {
  for (int order : {2, 3}) {
    const NgramModel model = toy_model(order);
    std::stringstream buf;
    write_arpa(model, buf);
    const NgramModel loaded = read_arpa(buf);
    ASSERT_EQ(loaded.order(), order);
    ASSERT_EQ(loaded.vocabulary(), model.vocabulary());
    const Vocabulary& v = model.vocabulary();
    for (const char* h : {"", "a", "b", "ab", " b", "zz"}) {
      const auto hist = v.encode(h);
      for (TokenId w = 1; w < v.size(); ++w) {
        EXPECT_NEAR(loaded.log_prob(hist, w), model.log_prob(hist, w), 1e-4)
            << "history '" << h << "' token " << w;
      }
    }
  }
}

TEST(ArpaTest, WritesStandardLayout) {
  std::stringstream buf;
  write_arpa(toy_model(), buf);
  const std::string text = buf.str();
  EXPECT_EQ(text.rfind("\\data\\\n", 0), 0u);
  EXPECT_NE(text.find("\\1-grams:"), std::string::npos);
  EXPECT_NE(text.find("\\2-grams:"), std::string::npos);
  EXPECT_NE(text.find("<sp>"), std::string::npos);
  EXPECT_NE(text.find("<unk>"), std::string::npos);
  EXPECT_NE(text.find("-99\t<s>"), std::string::npos);
  EXPECT_EQ(text.substr(text.size() - 6), "\\end\\\n");
}

TEST(ArpaTest, HandWrittenUnigramModel) {
  std::istringstream in(
      "\\data\\\n"
      "ngram 1=2\n"
      "\n"
      "\\1-grams:\n"
      "-0.3010300\ta\n"
      "-0.6020600\tb\n"
      "\n"
      "\\end\\\n");
  const NgramModel model = read_arpa(in);
  EXPECT_EQ(model.order(), 1);
  const Vocabulary& v = model.vocabulary();
  const std::vector<TokenId> hist = v.encode("ab");
  EXPECT_NEAR(model.log_prob(hist, v.id(U'a')), std::log(0.5), 1e-6);
  EXPECT_NEAR(model.log_prob({}, v.id(U'b')), std::log(0.25), 1e-6);
}

TEST(ArpaTest, BackoffQueryOnHandWrittenBigram) {
  std::istringstream in(
      "\\data\\\n"
      "ngram 1=3\n"
      "ngram 2=1\n"
      "\n"
      "\\1-grams:\n"
      "-99\t<s>\t-0.5\n"
      "-0.3010300\ta\t-0.2\n"
      "-0.3010300\tb\t0\n"
      "\n"
      "\\2-grams:\n"
      "-0.1\ta b\n"
      "\\end\\\n");
  const NgramModel model = read_arpa(in);
  const Vocabulary& v = model.vocabulary();
  const TokenId a = v.id(U'a'), b = v.id(U'b');
  const std::vector<TokenId> ha{a};
  const double ln10 = std::log(10.0);
  EXPECT_NEAR(model.log_prob(ha, b), -0.1 * ln10, 1e-9);
  EXPECT_NEAR(model.log_prob(ha, a), (-0.2 - 0.30103) * ln10, 1e-9);
  EXPECT_NEAR(model.log_prob({}, a), (-0.5 - 0.30103) * ln10, 1e-9);
}

void expect_parse_error(const std::string& text, std::size_t line) {
  std::istringstream in(text);
  try {
    read_arpa(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    if (line) EXPECT_EQ(e.line(), line) << e.what();
  }
}

TEST(ArpaTest, MissingEndIsAParseError) {
  expect_parse_error("\\data\\\nngram 1=1\n\n\\1-grams:\n-1\ta\n", 0);
}

TEST(ArpaTest, CountMismatchIsAParseError) {
  expect_parse_error("\\data\\\nngram 1=2\n\n\\1-grams:\n-1\ta\n\\end\\\n", 6);
}

TEST(ArpaTest, NonNumericFieldReportsItsLine) {
  expect_parse_error("\\data\\\nngram 1=1\n\n\\1-grams:\nabc\ta\n\\end\\\n", 5);
}

TEST(ArpaTest, BadSectionHeaderIsAParseError) {
  expect_parse_error("\\data\\\nngram 1=1\n\n\\2-grams:\n-1\ta b\n\\end\\\n", 4);
}

TEST(ArpaTest, MissingDataHeaderIsAParseError) {
  expect_parse_error("ngram 1=1\n\\1-grams:\n-1\ta\n\\end\\\n", 0);
}

TEST(ArpaTest, MissingFileIsALoadError) {
  EXPECT_THROW(read_arpa(std::string("/nonexistent/model.arpa")), LoadError);
}

}  // namespace
}  // namespace wbseg::ngram
