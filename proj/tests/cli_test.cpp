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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "wbseg/cli.hpp"
#include "wbseg/corpus.hpp"
#include "wbseg/error.hpp"

namespace wbseg::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int status = run(args, in, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("wbseg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::vector<std::string>& lines) {
    const std::string p = path(name);
    write_lines(lines, p);
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string toy_model(const std::vector<std::string>& lines, int order = 2) {
    const std::string arpa = path("toy.arpa");
    const auto r = call({"train-ngram", "--order", std::to_string(order), "--in",
                         file("toy.txt", lines), "--out", arpa});
    EXPECT_EQ(r.status, 0) << r.err;
    return arpa;
  }

  fs::path dir_;
};

const std::vector<std::string> kClosedWorld = {"ax by cz", "by cz ax", "cz ax by"};

TEST_F(CliTest, NoArgumentsPrintsUsage) {
  const auto r = call({});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_NE(r.err.find("train-ngram"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(call({"frobnicate"}).status, 2);
  EXPECT_EQ(call({"segment", "--model", "x", "--bogus"}).status, 2);
  EXPECT_EQ(call({"segment"}).status, 2);
  const auto help = call({"--help"});
  EXPECT_EQ(help.status, 0);
  EXPECT_NE(help.out.find("Subcommands"), std::string::npos);
}

TEST_F(CliTest, MissingModelAndBackendMismatch) {
  const auto missing = call({"segment", "--model", path("nope.arpa")}, "abc\n");
  EXPECT_EQ(missing.status, 2);
  EXPECT_NE(missing.err.find("cannot open"), std::string::npos);
  const std::string arpa = toy_model(kClosedWorld);
  const auto mismatch = call({"segment", "--model", arpa, "--backend", "rnn"}, "abc\n");
  EXPECT_EQ(mismatch.status, 2);
  EXPECT_NE(mismatch.err.find("--backend rnn"), std::string::npos);
  EXPECT_EQ(call({"segment", "--model", arpa, "--backend", "lstm"}, "a\n").status, 2);
  EXPECT_EQ(call({"segment", "--model", arpa, "-t", "-1"}, "a\n").status, 2);
  EXPECT_EQ(call({"segment", "--model", arpa, "-w", "0"}, "a\n").status, 2);
  EXPECT_EQ(call({"segment", "--model", arpa, "--format", "xml"}, "a\n").status, 2);
}

TEST_F(CliTest, ClosedWorldToyReachesPerfectPrecision) {
  const std::string arpa = toy_model(kClosedWorld);
  const auto r = call({"evaluate", "--model", arpa, "--in", path("toy.txt"), "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["precision"], 1.0);
  EXPECT_EQ(j["total"], 3);
}

TEST_F(CliTest, SegmentPreservesLineOrderAndCount) {
  const std::string arpa = toy_model(kClosedWorld);
  const auto r = call({"segment", "--model", arpa}, "axbycz\n\nczax\nby\n");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "ax by cz\n\ncz ax\nby\n");
  const auto j = call({"segment", "--model", arpa, "--format", "json", "-m", "2"}, "axby\nc\n");
  ASSERT_EQ(j.status, 0) << j.err;
  std::istringstream lines(j.out);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  const auto rec = nlohmann::json::parse(first);
  EXPECT_EQ(rec["input"], "axby");
  EXPECT_EQ(rec["candidates"].size(), 2u);
  EXPECT_EQ(rec["candidates"][0]["text"], "ax by");
  EXPECT_EQ(nlohmann::json::parse(second)["candidates"].size(), 1u);
}

TEST_F(CliTest, EvaluateBothModes) {
  const std::string arpa = toy_model({"omg u serious??", "hi there !!", "hi u"});
  const auto r = call({"evaluate", "--model", arpa, "--in", path("toy.txt"), "--mode", "both",
                       "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream lines(r.out);
  std::string a, b;
  std::getline(lines, a);
  std::getline(lines, b);
  const auto strict = nlohmann::json::parse(a);
  const auto alnum = nlohmann::json::parse(b);
  EXPECT_EQ(strict["mode"], "strict");
  EXPECT_EQ(alnum["mode"], "alnum");
  EXPECT_GE(alnum["precision"].get<double>(), strict["precision"].get<double>());
}

TEST_F(CliTest, TuneSingletonAndDefaults) {
  const std::string arpa = toy_model(kClosedWorld);
  const auto r = call({"tune", "--model", arpa, "--in", path("toy.txt"), "--t-grid", "5",
                       "--b-grid", "7", "--win-grid", "inf", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["grid"].size(), 1u);
  EXPECT_EQ(j["best"]["t"], "5");
  EXPECT_EQ(j["best"]["b"], 7);
  EXPECT_EQ(j["best"]["win"], "inf");
  const auto grid = TuneGrid::defaults();
  auto has = [&](double t, std::size_t b, Window w) {
    return std::count(grid.thresholds.begin(), grid.thresholds.end(), t) &&
           std::count(grid.beam_widths.begin(), grid.beam_widths.end(), b) &&
           std::count(grid.windows.begin(), grid.windows.end(), w);
  };
  EXPECT_TRUE(has(8, 10, Window(64)));
  EXPECT_TRUE(has(10, 500, Window::unbounded()));
}

TEST_F(CliTest, WiderBeamHelpsWhereGreedyFails) {
  const std::string arpa = toy_model({"bb ab", "ab ba ab", "ba ab"});
  const auto r = call({"tune", "--model", arpa, "--in", path("toy.txt"), "--t-grid", "inf",
                       "--b-grid", "1,64", "--win-grid", "inf", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["grid"].size(), 2u);
  const double narrow = j["grid"][0]["precision"];
  const double wide = j["grid"][1]["precision"];
  EXPECT_GE(wide, narrow);
  EXPECT_GT(wide, narrow);
  EXPECT_EQ(j["best"]["b"], 64);
}

TEST(Tune, TiesGoToTheFasterPointAndEmptyGridFails) {
  TuneGrid grid{{8.0}, {10, 20, 30}, {Window::unbounded()}};
  const auto r = tune(grid, SegmenterConfig{}, [](const SegmenterConfig& c) {
    EvalReport rep;
    rep.precision = c.beam_width == 10 ? 0.5 : 0.9;
    rep.elapsed_seconds = c.beam_width == 30 ? 1.0 : 2.0;
    return rep;
  });
  EXPECT_EQ(r.table.size(), 3u);
  EXPECT_EQ(r.best.beam_width, 30u);
  EXPECT_THROW(tune(TuneGrid{{}, {1}, {Window::unbounded()}}, SegmenterConfig{},
                    [](const SegmenterConfig&) { return EvalReport{}; }),
               InputError);
}

TEST(ParseWindow, Values) {
  EXPECT_EQ(parse_window("inf"), Window::unbounded());
  EXPECT_EQ(parse_window("64"), Window(64));
  EXPECT_THROW(parse_window("0"), ConfigError);
  EXPECT_THROW(parse_window("x"), ConfigError);
  EXPECT_EQ(window_name(Window(3)), "3");
}

TEST_F(CliTest, PrepareCleansAndSplits) {
  const std::string raw = file("raw.txt", {"@bob hi #fun", "see http://t.co/x now", "",
                                           "plain text", "<b>tag</b> here", "a\tb"});
  const auto r = call({"--seed", "3", "prepare", "--in", raw, "--out", path("clean.txt"),
                       "--strip-sgml", "--train-out", path("train.txt"), "--dev-out",
                       path("dev.txt"), "--train-n", "3", "--dev-n", "2"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(read_lines(path("clean.txt")),
            (std::vector<std::string>{"hi", "see now", "plain text", "tag here", "a b"}));
  EXPECT_EQ(read_lines(path("train.txt")).size(), 3u);
  EXPECT_EQ(read_lines(path("dev.txt")).size(), 2u);
  EXPECT_EQ(call({"prepare", "--in", raw}).status, 2);
}

TEST_F(CliTest, Stats) {
  const auto r = call({"stats", "--format", "json"}, "ab cd\n");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["words"], 2.0);
  EXPECT_EQ(j["chars"], 5.0);
  EXPECT_EQ(j["bytes"], 5.0);
  EXPECT_EQ(call({"stats"}, "").status, 2);
}

TEST_F(CliTest, RnnTrainSegmentAndSeedDeterminism) {
  const std::string corpus = file("c.txt", kClosedWorld);
  const std::vector<std::string> train = {"train-rnn", "--in", corpus, "--layers", "1",
                                          "--width", "8", "--embedding", "4", "--epochs", "3",
                                          "--batch", "2", "--rho", "8", "--valid", corpus};
  auto a = train;
  a.insert(a.end(), {"--out", path("a.rnn")});
  auto b = train;
  b.insert(b.end(), {"--out", path("b.rnn")});
  const auto ra = call(a);
  ASSERT_EQ(ra.status, 0) << ra.err;
  EXPECT_NE(ra.out.find("validation loss"), std::string::npos);
  ASSERT_EQ(call(b).status, 0);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  EXPECT_EQ(slurp(path("a.rnn")), slurp(path("b.rnn")));
  auto c = b;
  c.insert(c.begin(), {"--seed", "9"});
  ASSERT_EQ(call(c).status, 0);
  EXPECT_NE(slurp(path("a.rnn")), slurp(path("b.rnn")));

  const auto seg = call({"segment", "--model", path("a.rnn")}, "axbycz\n\n");
  ASSERT_EQ(seg.status, 0) << seg.err;
  std::istringstream lines(seg.out);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(strip_boundaries(first, kSpace), "axbycz");
  EXPECT_EQ(second, "");
  EXPECT_EQ(call({"segment", "--model", path("a.rnn"), "--backend", "ngram"}, "ab\n").status,
            2);
  EXPECT_EQ(call({"train-rnn", "--in", corpus, "--out", path("x.rnn"), "--rho", "1"}).status,
            2);
}

}  // namespace
}  // namespace wbseg::cli
