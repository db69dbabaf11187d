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
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles/segment_oracle.hpp"
#include "wbseg/error.hpp"
#include "wbseg/ngram/counts.hpp"
#include "wbseg/ngram/model.hpp"
#include "wbseg/rnn/language_model.hpp"
#include "wbseg/segmenter.hpp"

namespace wbseg {
namespace {

using ngram::NgramModel;
using Search = BeamSearch<NgramModel>;

NgramModel train(const std::vector<std::string>& lines, int order) {
  return ngram::estimate_kn(ngram::count_ngrams(lines, order));
}

const NgramModel& toy_model() {
  static const NgramModel m =
      train({"ab ba", "a b", "bb a ab", "ba ab b", "aab bba"}, 3);
  return m;
}

const NgramModel& english_bigram() {
  static const NgramModel m = train(
      {"the price was fair", "the cat sat", "the end", "he said the word",
       "she ate the pie", "the dog", "we were there"},
      2);
  return m;
}

SegmenterConfig accept_all(std::size_t b = 1024, std::size_t m = 1024) {
  SegmenterConfig c;
  c.threshold = SegmenterConfig::kAcceptAll;
  c.beam_width = b;
  c.num_results = m;
  return c;
}

struct ConstantScorer {
  struct State {};
  Vocabulary vocab = Vocabulary::characters({U'a', U'b', U' '});
  const Vocabulary& vocabulary() const { return vocab; }
  State start_state() const { return {}; }
  double advance(State&, TokenId) const { return -1.0; }
};

bool well_formed(const std::string& s) {
  if (s.empty()) return true;
  if (s.front() == ' ' || s.back() == ' ') return false;
  return s.find("  ") == std::string::npos;
}

TEST(StripBoundaries, Examples) {
  EXPECT_EQ(strip_boundaries("the price was fair", kSpace), "thepricewasfair");
  EXPECT_EQ(strip_boundaries("th e pricew asf air", kSpace), "thepricewasfair");
  EXPECT_EQ(strip_boundaries("", kSpace), "");
}

TEST(StripBoundaries, LenientAndStrict) {
  EXPECT_EQ(strip_boundaries("a\tb c d", kSpace, true), "abcd");
  EXPECT_EQ(strip_boundaries("a\tb d", kSpace, false), "a\tbd");
  EXPECT_EQ(strip_boundaries("a_b", U'_', false), "ab");
  for (std::string s : {"x  y", " \t ", "café au lait", "a_b c"}) {
    const std::string once = strip_boundaries(s, kSpace);
    EXPECT_EQ(strip_boundaries(once, kSpace), once);
  }
}

TEST(SegmenterConfig, Validation) {
  SegmenterConfig c;
  EXPECT_NO_THROW(c.validate());
  c.threshold = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SegmenterConfig{};
  c.beam_width = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SegmenterConfig{};
  c.num_results = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SegmenterConfig{};
  c.beam_width = 2;
  c.num_results = 3;
  EXPECT_THROW(c.validate(), ConfigError);
  c.threshold = std::nan("");
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(SegmenterConfig, BackendDefaults) {
  const auto n = SegmenterConfig::ngram_defaults();
  EXPECT_EQ(n.threshold, 10.0);
  EXPECT_EQ(n.beam_width, 500u);
  EXPECT_FALSE(n.window.bounded());
  const auto r = SegmenterConfig::rnn_defaults();
  EXPECT_EQ(r.threshold, 8.0);
  EXPECT_EQ(r.beam_width, 10u);
  EXPECT_EQ(r.window, Window(64));
}

TEST(Bnd, AcceptAllAlwaysReturns) {
  Search s(toy_model(), accept_all(), "abba");
  auto beam = s.bootstrap();
  for (std::size_t pos = 1; pos < 4; ++pos) {
    ASSERT_TRUE(s.bnd(beam[0], pos).has_value());
    beam = {s.extend(beam[0], pos)};
  }
}

TEST(Bnd, TinyThresholdAlwaysRejects) {
  SegmenterConfig c = accept_all();
  c.threshold = 1e-3;
  Search s(toy_model(), c, "abbaab");
  auto beam = s.bootstrap();
  for (std::size_t pos = 1; pos < s.input().size(); ++pos) {
    for (const auto& cand : beam) EXPECT_FALSE(s.bnd(cand, pos).has_value());
    beam = s.beam_step(beam, pos);
    EXPECT_EQ(beam.size(), 1u);
  }
  EXPECT_EQ(s.run()[0].text, "abbaab");
}

TEST(Bnd, AcceptanceMatchesStatelessRecompute) {
  SegmenterConfig c = accept_all();
  c.threshold = 10;
  const NgramModel& m = english_bigram();
  Search s(m, c, "thepricewasfair");
  // Candidate "the" then a boundary before "p".
  auto cand = s.bootstrap()[0];
  cand = s.extend(cand, 1);
  cand = s.extend(cand, 2);
  const auto withb = s.bnd(cand, 3);
  const auto ids = m.vocabulary().encode(std::string("the p"));
  const double fresh = windowed_score(m, ids, c.window);
  EXPECT_EQ(withb.has_value(), fresh > -c.threshold);
  ASSERT_TRUE(withb.has_value());
  EXPECT_EQ(withb->score, fresh);
  EXPECT_EQ(s.tokens(*withb), ids);
  // Every boundary decision on the line agrees with a from-scratch score.
  for (double t : {0.5, 1.0, 2.0, 3.0, 10.0}) {
    c.threshold = t;
    Search st(m, c, "thepricewasfair");
    auto beam = st.bootstrap();
    for (std::size_t pos = 1; pos < st.input().size(); ++pos) {
      for (const auto& cd : beam) {
        auto toks = st.tokens(cd);
        toks.push_back(st.input().boundary_token);
        toks.push_back(st.input().tokens[pos]);
        const double sc = windowed_score(m, toks, c.window);
        EXPECT_EQ(st.bnd(cd, pos).has_value(), sc > -t);
      }
      beam = st.beam_step(beam, pos);
    }
  }
}

TEST(Xpd, SizeBounds) {
  SegmenterConfig c = accept_all();
  c.threshold = 1e-3;
  Search s(toy_model(), c, "abab");
  const auto one = s.bootstrap();
  EXPECT_EQ(s.xpd(one, 1).size(), 1u);
  Search all(toy_model(), accept_all(), "abab");
  auto beam = all.bootstrap();
  beam = all.xpd(beam, 1);
  beam = all.xpd(beam, 2);
  ASSERT_EQ(beam.size(), 4u);
  EXPECT_EQ(all.xpd(beam, 3).size(), 8u);
}

TEST(Xpd, MatchesStatelessExpansion) {
  const NgramModel& m = toy_model();
  Search s(m, accept_all(), "abba");
  auto beam = s.xpd(s.bootstrap(), 1);
  ASSERT_EQ(beam.size(), 2u);
  const auto out = s.xpd(beam, 2);
  std::set<std::pair<std::string, double>> got, want;
  for (const auto& c : out) got.insert({s.render(c), c.score});
  for (const std::string text : {"abb", "ab b", "a bb", "a b b"}) {
    want.insert({text, sequence_score(m, m.vocabulary().encode(text))});
  }
  EXPECT_EQ(got, want);
}

TEST(TopN, SortsWithoutPruning) {
  Search s(toy_model(), accept_all(), "abab");
  auto beam = s.bootstrap();
  for (std::size_t pos = 1; pos < 4; ++pos) beam = s.xpd(beam, pos);
  const auto sorted = s.top_n(beam, 100);
  ASSERT_EQ(sorted.size(), beam.size());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    EXPECT_TRUE(s.better(sorted[i - 1], sorted[i]));
    EXPECT_FALSE(s.better(sorted[i], sorted[i - 1]));
  }
  std::multiset<std::string> a, b;
  for (const auto& c : beam) a.insert(s.render(c));
  for (const auto& c : sorted) b.insert(s.render(c));
  EXPECT_EQ(a, b);
}

TEST(TopN, TieBreakOnEqualScores) {
  // Every token scores exactly -1, so all segmentations tie.
  const ConstantScorer scorer;
  BeamSearch<ConstantScorer> s(scorer, accept_all(), "abab");
  auto beam = s.bootstrap();
  for (std::size_t pos = 1; pos < 4; ++pos) beam = s.xpd(beam, pos);
  const auto sorted = s.top_n(beam, beam.size());
  std::vector<std::string> order;
  for (const auto& c : sorted) order.push_back(s.render(c));
  const std::vector<std::string> expected = {"abab",  "a bab",  "ab ab",  "aba b",
                                             "a b ab", "a ba b", "ab a b", "a b a b"};
  EXPECT_EQ(order, expected);
}

TEST(TopN, MatchesFullSort) {
  Search s(english_bigram(), accept_all(), "thecat");
  auto beam = s.bootstrap();
  for (std::size_t pos = 1; pos < 4; ++pos) beam = s.xpd(beam, pos);
  beam.resize(5);
  auto full = beam;
  std::sort(full.begin(), full.end(),
            [&](const auto& a, const auto& b) { return a.score > b.score; });
  const auto top = s.top_n(beam, 2);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].score, full[0].score);
  EXPECT_EQ(top[1].score, full[1].score);
}

TEST(BeamStep, WidthOneStaysSingleton) {
  SegmenterConfig c = accept_all(1, 1);
  Search s(toy_model(), c, "abbab");
  auto beam = s.bootstrap();
  for (std::size_t pos = 1; pos < 5; ++pos) {
    beam = s.beam_step(beam, pos);
    EXPECT_EQ(beam.size(), 1u);
  }
}

TEST(BeamStep, UnboundedBeamHoldsEverySegmentation) {
  Search s(toy_model(), accept_all(1 << 12, 1), "abbabab");
  auto beam = s.bootstrap();
  for (std::size_t pos = 1; pos < 7; ++pos) beam = s.beam_step(beam, pos);
  EXPECT_EQ(beam.size(), 64u);
  std::set<std::string> distinct;
  for (const auto& c : beam) distinct.insert(s.render(c));
  EXPECT_EQ(distinct.size(), 64u);
}

TEST(BeamStep, WidthTwoMatchesBruteForceTopTwo) {
  const NgramModel& m = toy_model();
  Search s(m, accept_all(2, 2), "abbab");
  auto beam = s.bootstrap();
  for (std::size_t pos = 1; pos < 5; ++pos) {
    std::vector<std::pair<double, std::string>> expanded;
    for (const auto& c : beam) {
      const std::string base = s.render(c);
      for (const std::string& next : {base + std::string(1, "abbab"[pos]),
                                      base + " " + std::string(1, "abbab"[pos])}) {
        expanded.push_back({sequence_score(m, m.vocabulary().encode(next)), next});
      }
    }
    std::sort(expanded.begin(), expanded.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    beam = s.beam_step(beam, pos);
    ASSERT_EQ(beam.size(), 2u);
    EXPECT_EQ(beam[0].score, expanded[0].first);
    EXPECT_EQ(beam[1].score, expanded[1].first);
  }
}

TEST(SegmentLine, EmptyAndSingleToken) {
  const NgramModel& m = toy_model();
  const auto empty = segment_line("", m, SegmenterConfig{});
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_EQ(empty[0].text, "");
  EXPECT_EQ(empty[0].score, 0.0);
  EXPECT_EQ(segment_line("   ", m, SegmenterConfig{})[0].text, "");
  const auto one = segment_line("a", m, SegmenterConfig{});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].text, "a");
  EXPECT_EQ(one[0].score, m.log_prob({}, m.vocabulary().id(U'a')));
}

// For every input of length <= 10 over the toy alphabet, an exhaustive beam
// returns exactly the enumerated ranking.
TEST(SegmentLine, ExhaustiveOracle) {
  const NgramModel& m = toy_model();
  const SegmenterConfig c = accept_all(1024, 1024);
  for (std::size_t len = 1; len <= 10; ++len) {
    for (std::size_t code = 0; code < (std::size_t{1} << len); ++code) {
      SymbolString sym;
      for (std::size_t i = 0; i < len; ++i) sym.push_back(code >> i & 1 ? U'b' : U'a');
      const auto got = segment_line(encode_utf8(sym), m, c);
      const auto want = testing::enumerate_segmentations(m, sym, kSpace, c.window);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t k = 0; k < got.size(); ++k) {
        ASSERT_EQ(got[k].text, want[k].text) << encode_utf8(sym) << " rank " << k;
        ASSERT_EQ(got[k].score, want[k].score);
      }
    }
  }
}

TEST(SegmentLine, ExhaustiveOracleWithWindow) {
  const NgramModel& m = toy_model();
  SegmenterConfig c = accept_all(512, 512);
  c.window = Window(3);
  for (const std::string in : {"abbaab", "bababbba", "aaaaaaaaa"}) {
    const auto got = segment_line(in, m, c);
    const auto want = testing::enumerate_segmentations(m, decode_utf8(in), kSpace, c.window);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      EXPECT_EQ(got[k].text, want[k].text);
      EXPECT_EQ(got[k].score, want[k].score);
    }
  }
}

TEST(SegmentLine, RoundTripWellFormedAndBounded) {
  const NgramModel& m = english_bigram();
  std::mt19937_64 rng(3);
  const std::string alphabet = "thecatsaw ";
  for (int trial = 0; trial < 60; ++trial) {
    std::string in;
    const int len = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < len; ++i) in += alphabet[rng() % alphabet.size()];
    SegmenterConfig c;
    c.beam_width = 1 + rng() % 8;
    c.num_results = 1 + rng() % c.beam_width;
    c.threshold = 0.5 + static_cast<double>(rng() % 60) / 10.0;
    BeamSearch<NgramModel> s(m, c, in);
    if (s.input().size() == 0) continue;
    auto beam = s.bootstrap();
    for (std::size_t pos = 1; pos < s.input().size(); ++pos) {
      beam = s.beam_step(beam, pos);
      ASSERT_GE(beam.size(), 1u);
      ASSERT_LE(beam.size(), c.beam_width);
    }
    const auto out = segment_line(in, m, c);
    ASSERT_LE(out.size(), c.num_results);
    for (const auto& r : out) {
      EXPECT_EQ(strip_boundaries(r.text, kSpace), strip_boundaries(in, kSpace));
      EXPECT_TRUE(well_formed(r.text)) << r.text;
    }
  }
}

TEST(SegmentLine, BeamNeverBeatsExhaustiveBest) {
  const NgramModel& m = toy_model();
  for (std::size_t b : {1u, 2u, 4u}) {
    for (const std::string in : {"abbaabab", "babababb", "aabbaabb"}) {
      SegmenterConfig c = accept_all(b, 1);
      const auto got = segment_line(in, m, c);
      const auto want = testing::enumerate_segmentations(m, decode_utf8(in), kSpace,
                                                         Window::unbounded());
      EXPECT_LE(got[0].score, want[0].score);
    }
  }
}

TEST(SegmentLine, CharactersOutsideVocabularyArePreserved) {
  const NgramModel& m = english_bigram();
  const auto out = segment_line("theécat", m, accept_all(8, 8));
  for (const auto& r : out) {
    EXPECT_EQ(strip_boundaries(r.text, kSpace), "theécat");
  }
}

TEST(CachedScore, NgramMatchesStatelessRescoring) {
  const NgramModel m = train({"the cat sat on the mat", "a dog ate the log"}, 4);
  SegmenterConfig c;
  c.threshold = 4;
  c.beam_width = 16;
  for (Window w : {Window::unbounded(), Window(5)}) {
    c.window = w;
    Search s(m, c, "thecatsatonthemataloglogdogate");
    auto beam = s.bootstrap();
    for (std::size_t pos = 1; pos < s.input().size(); ++pos) {
      beam = s.beam_step(beam, pos);
      for (const auto& cd : beam) {
        const auto toks = s.tokens(cd);
        ASSERT_LE(toks.size(), 60u);
        EXPECT_NEAR(cd.score, windowed_score(m, toks, w), 1e-9);
      }
    }
  }
}

TEST(CachedScore, RnnMatchesStatelessRescoring) {
  rnn::RnnConfig rc;
  rc.layers = 1;
  rc.width = 16;
  rc.embedding_dim = 8;
  const rnn::RnnLanguageModel m(rnn::RnnModel::initialized(rc));
  SegmenterConfig c = SegmenterConfig::rnn_defaults();
  c.threshold = SegmenterConfig::kAcceptAll;
  c.beam_width = 4;
  c.window = Window(8);
  BeamSearch<rnn::RnnLanguageModel> s(m, c, "cafésociety");
  auto beam = s.bootstrap();
  for (std::size_t pos = 1; pos < s.input().size(); ++pos) {
    beam = s.beam_step(beam, pos);
    for (const auto& cd : beam) {
      const auto toks = s.tokens(cd);
      ASSERT_LE(toks.size(), 32u);
      EXPECT_NEAR(cd.score, windowed_score(m, toks, c.window), 1e-9);
    }
  }
}

TEST(ByteMode, NoBoundaryInsideMultibyteCharacters) {
  rnn::RnnConfig rc;
  rc.layers = 1;
  rc.width = 8;
  rc.embedding_dim = 4;
  const rnn::RnnLanguageModel m(rnn::RnnModel::initialized(rc));
  const auto out = segment_line("éè中", m, accept_all(64, 64));
  // Three characters, so 2^2 segmentations and never more.
  EXPECT_EQ(out.size(), 4u);
  for (const auto& r : out) {
    EXPECT_EQ(strip_boundaries(r.text, kSpace), "éè中");
    EXPECT_EQ(decode_utf8(r.text).size(), count_scalars(r.text));
    EXPECT_EQ(r.text.find("\xef\xbf\xbd"), std::string::npos);
  }
  SegmenterConfig bad = accept_all();
  bad.boundary = U'é';
  EXPECT_THROW(segment_line("ab", m, bad), ConfigError);
}

}  // namespace
}  // namespace wbseg
