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

#include "wbseg/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "wbseg/corpus.hpp"
#include "wbseg/error.hpp"
#include "wbseg/ngram/counts.hpp"
#include "wbseg/ngram/model.hpp"
#include "wbseg/rnn/checkpoint.hpp"
#include "wbseg/rnn/language_model.hpp"
#include "wbseg/rnn/train.hpp"

namespace wbseg::cli {
namespace {

enum class Backend { kNgram, kRnn };

constexpr std::string_view kRnnMagic = "WBSEGRNN";

Backend parse_backend(const std::string& name) {
  if (name == "ngram") return Backend::kNgram;
  if (name == "rnn") return Backend::kRnn;
  throw ConfigError("unknown backend '" + name + "' (ngram|rnn)");
}

Backend sniff(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open model " + path);
  std::string head(kRnnMagic.size(), '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  return head == kRnnMagic ? Backend::kRnn : Backend::kNgram;
}

// A loaded model of either backend behind one segmentation entry point.
class Model {
 public:
  static Model load(const std::string& path, const std::string& requested) {
    Model m;
    m.backend_ = sniff(path);
    if (!requested.empty() && parse_backend(requested) != m.backend_) {
      throw ConfigError("model " + path + " is a" +
                        (m.backend_ == Backend::kRnn ? "n rnn checkpoint" : "n ARPA file") +
                        " but --backend " + requested + " was given");
    }
    if (m.backend_ == Backend::kNgram) {
      m.ngram_ = std::make_unique<ngram::NgramModel>(ngram::read_arpa(path));
    } else {
      m.rnn_ = std::make_unique<rnn::RnnLanguageModel>(rnn::load_rnn(path));
    }
    return m;
  }

  Backend backend() const { return backend_; }

  SegmenterConfig defaults() const {
    return backend_ == Backend::kNgram ? SegmenterConfig::ngram_defaults()
                                       : SegmenterConfig::rnn_defaults();
  }

  std::vector<Segmentation> segment(std::string_view line, const SegmenterConfig& c) const {
    if (ngram_) return segment_line(line, *ngram_, c);
    return segment_line(line, *rnn_, c);
  }

 private:
  Backend backend_ = Backend::kNgram;
  std::unique_ptr<ngram::NgramModel> ngram_;
  std::unique_ptr<rnn::RnnLanguageModel> rnn_;
};

double parse_threshold(const std::string& text) {
  if (text == "inf" || text == "unbounded") return SegmenterConfig::kAcceptAll;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v > 0)) {
    throw ConfigError("threshold must be a positive number or 'inf', got '" + text + "'");
  }
  return v;
}

std::string threshold_name(double t) { return std::isinf(t) ? "inf" : fmt::format("{:g}", t); }

template <class T>
std::vector<T> parse_list(const std::string& text, T (*parse)(const std::string&)) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    if (!item.empty()) out.push_back(parse(item));
    start = comma + 1;
  }
  return out;
}

std::size_t parse_count(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v == 0) {
    throw ConfigError("expected a positive integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

Symbol parse_boundary(const std::string& text) {
  const SymbolString s = decode_utf8(text);
  if (s.size() != 1) throw ConfigError("boundary must be exactly one character");
  return s[0];
}

struct SearchFlags {
  std::string threshold;
  std::size_t beam_width = 0;
  std::size_t num_results = 0;
  std::string window;
  std::string boundary;

  void add(CLI::App* app) {
    app->add_option("-t,--threshold", threshold,
                    "Max mean negative log-prob of a boundary candidate, or 'inf'");
    app->add_option("-b,--beam", beam_width, "Beam width")->check(CLI::PositiveNumber);
    app->add_option("-m,--results", num_results, "Results kept per line")
        ->check(CLI::PositiveNumber);
    app->add_option("-w,--win", window, "Scoring window in tokens, or 'inf'");
    app->add_option("--boundary", boundary, "Boundary symbol (default: space)");
  }

  SegmenterConfig apply(SegmenterConfig c) const {
    if (!threshold.empty()) c.threshold = parse_threshold(threshold);
    if (beam_width) c.beam_width = beam_width;
    if (num_results) c.num_results = num_results;
    if (!window.empty()) c.window = parse_window(window);
    if (!boundary.empty()) c.boundary = parse_boundary(boundary);
    c.validate();
    return c;
  }
};

std::vector<std::string> read_input(const std::string& path, std::istream& in) {
  if (!path.empty() && path != "-") return read_lines(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> non_empty(std::vector<std::string> lines) {
  std::erase_if(lines, [](const std::string& l) {
    return strip_boundaries(l, kSpace).empty();
  });
  return lines;
}

void check_format(const std::string& format) {
  if (format != "human" && format != "json") {
    throw ConfigError("unknown format '" + format + "' (human|json)");
  }
}

// ---------------------------------------------------------------------------

struct PrepareCmd {
  std::string in, out, train_out, dev_out;
  bool strip_sgml = false;
  std::size_t max_chars = 0, train_n = 0, dev_n = 0;
  std::uint64_t seed = 1;

  void exec(std::istream& is, std::ostream& os) const {
    if (out.empty() && train_out.empty() && dev_out.empty()) {
      throw ConfigError("prepare needs --out or --train-out/--dev-out");
    }
    const auto raw = read_input(in, is);
    PreprocessOptions opts;
    opts.strip_sgml = strip_sgml;
    opts.max_chars = max_chars;
    const auto clean = preprocess(raw, opts);
    if (!out.empty()) write_lines(clean, out);
    os << fmt::format("kept {} of {} lines\n", clean.size(), raw.size());
    if (!train_out.empty() || !dev_out.empty()) {
      const Split s = shuffle_split(clean, {train_n, dev_n, seed});
      if (!train_out.empty()) write_lines(s.train, train_out);
      if (!dev_out.empty()) write_lines(s.dev, dev_out);
      os << fmt::format("train {} dev {}\n", s.train.size(), s.dev.size());
    }
  }
};

struct TrainNgramCmd {
  std::string in, out;
  int order = 6;
  std::uint64_t prune = 1;
  int prune_from = 2;

  void exec(std::istream& is, std::ostream& os) const {
    const auto lines = non_empty(read_input(in, is));
    if (lines.empty()) throw InputError("no training lines");
    if (prune_from < 2) throw ConfigError("--prune-from must be >= 2");
    const auto counts = ngram::count_ngrams(lines, order);
    const auto model = ngram::estimate_kn(counts, ngram::PruneConfig::from_order(prune_from, prune));
    ngram::write_arpa(model, out);
    os << fmt::format("order {} over {} symbols:", order, model.vocabulary().size());
    for (int k = 1; k <= order; ++k) os << fmt::format(" {}", model.num_entries(k));
    os << "\n";
  }
};

struct TrainRnnCmd {
  std::string in, out, valid;
  rnn::RnnConfig config;

  void add(CLI::App* app) {
    app->add_option("--in", in, "Training lines (default: stdin)");
    app->add_option("--out", out, "Checkpoint path")->required();
    app->add_option("--valid", valid, "Validation lines; reports their loss");
    app->add_option("--layers", config.layers, "LSTM layers")->capture_default_str();
    app->add_option("--width", config.width, "Units per layer")->capture_default_str();
    app->add_option("--embedding", config.embedding_dim, "Embedding size")->capture_default_str();
    app->add_option("--rho", config.rho, "TBPTT truncation length")->capture_default_str();
    app->add_option("--lr", config.learning_rate, "Adam learning rate")->capture_default_str();
    app->add_option("--batch", config.batch_size, "Parallel streams")->capture_default_str();
    app->add_option("--epochs", config.epochs, "Passes over the corpus")->capture_default_str();
    app->add_option("--max-steps", config.max_steps, "Stop after this many updates (0: no cap)");
    app->add_option("--clip", config.clip_norm, "Gradient norm clip (0: off)")
        ->capture_default_str();
  }

  void exec(std::istream& is, std::ostream& os, std::uint64_t seed) {
    config.seed = seed;
    const auto lines = non_empty(read_input(in, is));
    const rnn::TrainResult r = rnn::tbptt_train(lines, config);
    rnn::save_rnn(r.model, out);
    for (std::size_t e = 0; e < r.epoch_losses.size(); ++e) {
      os << fmt::format("epoch {} loss {:.6f}\n", e + 1, r.epoch_losses[e]);
    }
    os << fmt::format("updates {}\n", r.step_losses.size());
    if (!valid.empty()) {
      const auto v = non_empty(read_lines(valid));
      os << fmt::format("validation loss {:.17g}\n", rnn::evaluate_loss(r.model, v));
    }
  }
};

void print_segmentation(std::ostream& os, const std::string& line,
                        const std::vector<Segmentation>& result, bool json) {
  if (json) {
    nlohmann::ordered_json j;
    j["input"] = line;
    auto& c = j["candidates"] = nlohmann::ordered_json::array();
    for (const auto& s : result) c.push_back({{"text", s.text}, {"score", s.score}});
    os << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    return;
  }
  if (result.size() == 1) {
    os << result[0].text << '\n';
    return;
  }
  for (std::size_t k = 0; k < result.size(); ++k) {
    os << (k ? "\t" : "") << result[k].text << '\t' << fmt::format("{:.6f}", result[k].score);
  }
  os << '\n';
}

}  // namespace

Window parse_window(const std::string& text) {
  if (text == "inf" || text == "unbounded") return Window::unbounded();
  return Window(parse_count(text));
}

std::string window_name(Window w) {
  return w.bounded() ? std::to_string(w.tokens()) : "inf";
}

TuneGrid TuneGrid::defaults() {
  return {{8.0, 10.0}, {10, 500}, {Window(64), Window::unbounded()}};
}

TuneResult tune(const TuneGrid& grid, const SegmenterConfig& base,
                const std::function<EvalReport(const SegmenterConfig&)>& run_point) {
  if (grid.size() == 0) throw InputError("tuning grid is empty");
  TuneResult r;
  for (double t : grid.thresholds) {
    for (std::size_t b : grid.beam_widths) {
      for (Window w : grid.windows) {
        SegmenterConfig c = base;
        c.threshold = t;
        c.beam_width = b;
        c.num_results = std::min(c.num_results, b);
        c.window = w;
        const EvalReport rep = run_point(c);
        r.table.push_back({t, b, w, rep.precision, rep.elapsed_seconds});
      }
    }
  }
  r.best = r.table.front();
  for (const auto& p : r.table) {
    if (p.precision > r.best.precision ||
        (p.precision == r.best.precision && p.elapsed_seconds < r.best.elapsed_seconds)) {
      r.best = p;
    }
  }
  return r;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"wbseg: word boundary segmentation with character and byte language models",
               "wbseg"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Seed for every random choice")->capture_default_str();

  PrepareCmd prepare;
  auto* p = app.add_subcommand(
      "prepare",
      "Clean raw lines: control characters become spaces; tokens starting with @x "
      "(mentions), #x (hashtags), scheme:// or www. (URLs) are removed; spaces collapse; "
      "empty lines are dropped. Optionally shuffle and split.");
  p->add_option("--in", prepare.in, "Raw lines (default: stdin)");
  p->add_option("--out", prepare.out, "Cleaned lines");
  p->add_flag("--strip-sgml", prepare.strip_sgml, "Remove <...> tags");
  p->add_option("--max-chars", prepare.max_chars, "Drop lines longer than this");
  p->add_option("--train-out", prepare.train_out, "Shuffled training split");
  p->add_option("--dev-out", prepare.dev_out, "Held-out split (taken from the end)");
  p->add_option("--train-n", prepare.train_n, "Training lines");
  p->add_option("--dev-n", prepare.dev_n, "Held-out lines");

  TrainNgramCmd tn;
  auto* n = app.add_subcommand("train-ngram", "Estimate a Kneser-Ney character model (ARPA)");
  n->add_option("--in", tn.in, "Training lines (default: stdin)");
  n->add_option("--out", tn.out, "ARPA output path")->required();
  n->add_option("--order", tn.order, "Model order")->capture_default_str();
  n->add_option("--prune", tn.prune, "Minimum count of stored n-grams")->capture_default_str();
  n->add_option("--prune-from", tn.prune_from, "Lowest order the minimum count applies to")
      ->capture_default_str();

  TrainRnnCmd tr;
  auto* r = app.add_subcommand("train-rnn", "Train a byte-level LSTM model");
  tr.add(r);

  std::string model_path, backend, input, format = "human", mode = "strict";
  SearchFlags search;
  bool per_line = false;
  auto* s = app.add_subcommand("segment", "Segment lines, one output line per input line");
  auto* e = app.add_subcommand("evaluate", "Exact-match precision against reference lines");
  auto* t = app.add_subcommand("tune", "Grid search over threshold, beam width and window");
  for (auto* sub : {s, e, t}) {
    sub->add_option("--model", model_path, "ARPA file or rnn checkpoint")->required();
    sub->add_option("--backend", backend, "ngram|rnn (default: detected from the file)");
    sub->add_option("--in", input, "Input lines (default: stdin)");
    sub->add_option("--format", format, "human|json")->capture_default_str();
    search.add(sub);
  }
  for (auto* sub : {e, t}) {
    sub->add_option("--mode", mode, "strict|alnum (evaluate also accepts both)")
        ->capture_default_str();
  }
  e->add_flag("--per-line", per_line, "List every line's verdict");
  std::string t_grid, b_grid, w_grid;
  t->add_option("--t-grid", t_grid, "Comma-separated thresholds (default 8,10)");
  t->add_option("--b-grid", b_grid, "Comma-separated beam widths (default 10,500)");
  t->add_option("--win-grid", w_grid, "Comma-separated windows (default 64,inf)");

  std::string stats_in;
  auto* st = app.add_subcommand("stats", "Per-line averages of words, characters and bytes");
  st->add_option("--in", stats_in, "Lines (default: stdin)");
  st->add_option("--format", format, "human|json")->capture_default_str();

  if (args.empty()) {
    err << app.help();
    return 2;
  }
  std::vector<const char*> argv{"wbseg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex, out, err);
    return 2;
  }

  try {
    check_format(format);
    const bool json = format == "json";
    if (*p) {
      prepare.seed = seed;
      prepare.exec(in, out);
    } else if (*n) {
      tn.exec(in, out);
    } else if (*r) {
      tr.exec(in, out, seed);
    } else if (*st) {
      const auto stats = corpus_stats(read_input(stats_in, in));
      out << (json ? stats_json(stats) + "\n" : format_stats(stats));
    } else if (*s) {
      const Model m = Model::load(model_path, backend);
      const SegmenterConfig c = search.apply(m.defaults());
      for (const auto& line : read_input(input, in)) {
        print_segmentation(out, line, m.segment(line, c), json);
      }
    } else if (*e || *t) {
      const Model m = Model::load(model_path, backend);
      const SegmenterConfig base = search.apply(m.defaults());
      const auto pairs = make_test_pairs(non_empty(read_input(input, in)), base.boundary);
      const bool both = *e && mode == "both";
      const EvalMode em = both ? EvalMode::kStrict : parse_eval_mode(mode);
      auto run_point = [&](const SegmenterConfig& c) {
        return evaluate([&](std::string_view x) { return m.segment(x, c)[0].text; }, pairs, em,
                        c.boundary);
      };
      if (*e) {
        const EvalReport rep = run_point(base);
        std::vector<EvalReport> reports{rep};
        if (both) reports.push_back(rejudge(rep, EvalMode::kAlnum, base.boundary));
        for (const auto& x : reports) {
          out << (json ? report_json(x, {per_line, true}) + "\n"
                       : report_human(x, {per_line, true}));
        }
      } else {
        TuneGrid grid = TuneGrid::defaults();
        if (!t_grid.empty()) grid.thresholds = parse_list<double>(t_grid, parse_threshold);
        if (!b_grid.empty()) grid.beam_widths = parse_list<std::size_t>(b_grid, parse_count);
        if (!w_grid.empty()) grid.windows = parse_list<Window>(w_grid, parse_window);
        const TuneResult res = tune(grid, base, run_point);
        if (json) {
          nlohmann::ordered_json j;
          auto row = [](const TunePoint& x) {
            return nlohmann::ordered_json{{"t", threshold_name(x.threshold)},
                                          {"b", x.beam_width},
                                          {"win", window_name(x.window)},
                                          {"precision", x.precision},
                                          {"elapsed_seconds", x.elapsed_seconds}};
          };
          j["grid"] = nlohmann::ordered_json::array();
          for (const auto& x : res.table) j["grid"].push_back(row(x));
          j["best"] = row(res.best);
          out << j.dump() << '\n';
        } else {
          out << fmt::format("{:>8} {:>6} {:>6} {:>10} {:>10}\n", "t", "b", "win", "precision",
                             "seconds");
          for (const auto& x : res.table) {
            out << fmt::format("{:>8} {:>6} {:>6} {:>10.4f} {:>10.3f}\n",
                               threshold_name(x.threshold), x.beam_width,
                               window_name(x.window), x.precision, x.elapsed_seconds);
          }
          out << fmt::format("best: t={} b={} win={} precision={:.4f}\n",
                             threshold_name(res.best.threshold), res.best.beam_width,
                             window_name(res.best.window), res.best.precision);
        }
      }
    }
  } catch (const std::exception& ex) {
    err << "wbseg: error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace wbseg::cli
