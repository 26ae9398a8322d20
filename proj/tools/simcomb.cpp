/*
 * Copyright 2026 The simcomb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// simcomb command-line front end. Everything goes through the C interface.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "simcomb/simcomb.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitUsage = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Base line number of the chunk being processed, for error messages.
thread_local std::size_t g_line_base = 0;
thread_local std::string g_current_input;

void check(int rc) {
  if (rc == SIMCOMB_OK) return;
  std::string msg = simcomb_last_error_message();
  const std::size_t line = simcomb_last_error_line();
  if (line > 0) {
    const auto colon = msg.find(": ");
    if (msg.rfind("line ", 0) == 0 && colon != std::string::npos) msg = msg.substr(colon + 2);
    msg = g_current_input + ":" + std::to_string(g_line_base + line) + ": " + msg;
  }
  throw InputError(msg);
}

class Text {
 public:
  Text() = default;
  Text(const Text&) = delete;
  Text& operator=(const Text&) = delete;
  ~Text() { simcomb_text_destroy(h_); }

  simcomb_text_t* out() {
    simcomb_text_destroy(h_);
    h_ = nullptr;
    return &h_;
  }
  std::string_view view() const {
    const char* data = nullptr;
    std::size_t len = 0;
    if (h_ == nullptr || simcomb_text_view(h_, &data, &len) != SIMCOMB_OK) return {};
    return {data, len};
  }

 private:
  simcomb_text_t h_ = nullptr;
};

template <typename T, int (*Destroy)(T)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(h_); }
  T* out() { return &h_; }
  T get() const { return h_; }

 private:
  T h_ = nullptr;
};

using Corpus = Handle<simcomb_corpus_t, simcomb_corpus_destroy>;
using Truecaser = Handle<simcomb_truecaser_t, simcomb_truecaser_destroy>;
using Bpe = Handle<simcomb_bpe_t, simcomb_bpe_destroy>;
using Lm = Handle<simcomb_lm_t, simcomb_lm_destroy>;

// --- file plumbing -------------------------------------------------------------

std::string read_all(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Input {
 public:
  explicit Input(const std::string& path) : name_(path.empty() || path == "-" ? "<stdin>" : path) {
    if (path.empty() || path == "-") {
      in_ = &std::cin;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw InputError("cannot open '" + path + "' for reading");
      in_ = &file_;
    }
  }

  const std::string& name() const { return name_; }

  /// Up to max_lines LF-terminated lines into buf; returns the count read.
  std::size_t read_chunk(std::string& buf, std::size_t max_lines) {
    buf.clear();
    std::size_t n = 0;
    std::string line;
    while (n < max_lines && std::getline(*in_, line)) {
      buf += line;
      buf.push_back('\n');
      ++n;
    }
    if (in_->bad()) throw InputError("read error on '" + name_ + "'");
    return n;
  }

 private:
  std::string name_;
  std::ifstream file_;
  std::istream* in_ = nullptr;
};

class Output {
 public:
  explicit Output(const std::string& path) : name_(path.empty() || path == "-" ? "<stdout>" : path) {
    if (path.empty() || path == "-") {
      out_ = &std::cout;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw InputError("cannot open '" + path + "' for writing");
      out_ = &file_;
    }
  }

  void write(std::string_view data) {
    out_->write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!*out_) throw InputError("write to '" + name_ + "' failed");
  }
  std::ostream& stream() { return *out_; }
  void close() {
    out_->flush();
    if (!*out_) throw InputError("write to '" + name_ + "' failed");
  }

 private:
  std::string name_;
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

void write_file(const fs::path& path, std::string_view data) {
  Output out(path.string());
  out.write(data);
  out.close();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory '" + dir + "'");
}

std::string extension_or(const std::string& path, const std::string& fallback) {
  const std::string ext = fs::path(path).extension().string();
  return ext.size() > 1 ? ext.substr(1) : fallback;
}

using LineFn = std::function<int(const char*, std::size_t, simcomb_text_t*)>;

std::size_t chunk_lines(unsigned threads) { return 8192 * std::max(1u, threads); }

// Bounded-memory line streaming: one chunk in flight at a time.
void stream(const std::string& in_path, const std::string& out_path, unsigned threads, const LineFn& fn) {
  Input in(in_path);
  Output out(out_path);
  g_current_input = in.name();
  g_line_base = 0;
  std::string buf;
  Text result;
  while (std::size_t n = in.read_chunk(buf, chunk_lines(threads))) {
    check(fn(buf.data(), buf.size(), result.out()));
    out.write(result.view());
    g_line_base += n;
  }
  out.close();
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// --- options -------------------------------------------------------------------

struct Options {
  unsigned threads = 1;
  std::string config;

  std::string input = "-";
  std::string output = "-";
  std::vector<std::string> inputs;
  std::string model;
  std::string codes;

  std::string src;
  std::string tgt;
  std::string outdir;
  std::size_t min_len = 7;
  std::size_t max_len = 100;
  double max_ratio = 9.0;
  std::uint64_t seed = 42;
  std::size_t dev = 0;
  std::size_t test = 0;
  std::string patterns;
  std::string src_lang = "src";
  std::string tgt_lang = "tgt";
  std::string prefix;

  std::size_t merges = 10000;
  bool per_side = false;

  std::string refs;
  std::size_t order = 4;
  bool lowercase = false;
  bool tsv = false;

  std::size_t lm_order = 5;
  std::string level = "word";
  std::size_t unk_floor = 1;
  std::string names = "A,B";
  std::size_t dist_order = 7;
  std::string dist_level = "char";

  std::string strategy = "bt";
  std::string source;
  std::string cands;
  std::string backs;
  std::string weights;
  std::string priority;
  bool geometric = false;
};

int lm_level(const std::string& name) {
  if (name == "word") return SIMCOMB_LM_WORD;
  if (name == "char") return SIMCOMB_LM_CHAR;
  throw CLI::ValidationError("--level", "expected 'word' or 'char', got '" + name + "'");
}

void add_io(CLI::App* sub, Options& o) {
  sub->add_option("input", o.input, "Input file (default: standard input)");
  sub->add_option("-o,--output", o.output, "Output file (default: standard output)");
}

// --- subcommands ---------------------------------------------------------------

void cmd_truecase_train(const Options& o) {
  std::string text;
  for (const auto& p : o.inputs.empty() ? std::vector<std::string>{"-"} : o.inputs) {
    text += read_all(p);
    if (!text.empty() && text.back() != '\n') text.push_back('\n');
  }
  Truecaser tc;
  check(simcomb_truecaser_train(text.data(), text.size(), o.threads, tc.out()));
  check(simcomb_truecaser_save(tc.get(), o.model.c_str()));
  std::size_t n = 0;
  check(simcomb_truecaser_size(tc.get(), &n));
  std::cerr << "truecase model: " << n << " entries -> " << o.model << '\n';
}

simcomb_pipeline_config pipeline(const Options& o) {
  simcomb_pipeline_config cfg;
  simcomb_pipeline_config_init(&cfg);
  cfg.min_len = o.min_len;
  cfg.max_len = o.max_len;
  cfg.max_ratio = o.max_ratio;
  cfg.seed = o.seed;
  cfg.dev_size = o.dev;
  cfg.test_size = o.test;
  return cfg;
}

void load_corpus(const Options& o, Corpus& c) {
  const std::string s = read_all(o.src);
  const std::string t = read_all(o.tgt);
  check(simcomb_corpus_create(s.data(), s.size(), t.data(), t.size(), c.out()));
}

std::string side_text(const Corpus& c, int side) {
  Text t;
  check(simcomb_corpus_side(c.get(), side, t.out()));
  return std::string(t.view());
}

void write_pair(const Corpus& c, const fs::path& src_path, const fs::path& tgt_path) {
  if (src_path == tgt_path) throw InputError("source and target outputs would both be '" + src_path.string() + "'");
  write_file(src_path, side_text(c, SIMCOMB_SIDE_SRC));
  write_file(tgt_path, side_text(c, SIMCOMB_SIDE_TGT));
}

void cmd_clean(const Options& o) {
  Corpus in, out;
  load_corpus(o, in);
  const auto cfg = pipeline(o);
  simcomb_clean_report rep{};
  check(simcomb_corpus_clean(in.get(), &cfg, out.out(), &rep));
  ensure_dir(o.outdir);
  const fs::path dir(o.outdir);
  write_pair(out, dir / fs::path(o.src).filename(), dir / fs::path(o.tgt).filename());
  std::ostringstream report;
  report << "kept\t" << rep.kept << "\ntoo_short\t" << rep.too_short << "\ntoo_long\t" << rep.too_long << "\nratio\t"
         << rep.ratio << '\n';
  write_file(dir / "clean.report", report.str());
  std::cerr << report.str();
}

void cmd_dedup(const Options& o) {
  Corpus in, out;
  load_corpus(o, in);
  const std::string patterns = o.patterns.empty() ? std::string() : read_all(o.patterns);
  simcomb_dedup_report rep{};
  check(simcomb_corpus_dedup(in.get(), o.patterns.empty() ? nullptr : patterns.c_str(), out.out(), &rep));
  ensure_dir(o.outdir);
  const fs::path dir(o.outdir);
  write_pair(out, dir / fs::path(o.src).filename(), dir / fs::path(o.tgt).filename());
  std::ostringstream report;
  report << "kept\t" << rep.kept << "\nduplicate\t" << rep.duplicates << "\nmetadata\t" << rep.metadata << '\n';
  write_file(dir / "dedup.report", report.str());
  std::cerr << report.str();
}

void cmd_split(const Options& o) {
  Corpus in, dev, test, rest;
  load_corpus(o, in);
  const auto cfg = pipeline(o);
  check(simcomb_corpus_split(in.get(), &cfg, dev.out(), test.out(), rest.out()));
  ensure_dir(o.outdir);
  const fs::path dir(o.outdir);
  const std::string se = extension_or(o.src, "src");
  const std::string te = extension_or(o.tgt, "tgt");
  for (const auto& [name, part] : {std::pair<const char*, const Corpus*>{"dev", &dev}, {"test", &test}, {"rest", &rest}})
    write_pair(*part, dir / (std::string(name) + "." + se), dir / (std::string(name) + "." + te));
}

void cmd_copy_corpus(const Options& o) {
  const std::string mono = read_all(o.input);
  Corpus c;
  check(simcomb_corpus_copied(mono.data(), mono.size(), c.out()));
  write_pair(c, o.prefix + "." + o.src_lang, o.prefix + "." + o.tgt_lang);
}

void cmd_pseudo_merge(const Options& o) {
  const std::string tgt = read_all(o.tgt);
  const std::string src = read_all(o.src);
  Corpus c;
  check(simcomb_corpus_pseudo_parallel(tgt.data(), tgt.size(), src.data(), src.size(), c.out()));
  write_pair(c, o.prefix + "." + o.src_lang, o.prefix + "." + o.tgt_lang);
}

void learn_codes(const std::string& text, const Options& o, const std::string& path) {
  Bpe codes;
  check(simcomb_bpe_learn(text.data(), text.size(), o.merges, o.threads, codes.out()));
  check(simcomb_bpe_save(codes.get(), path.c_str()));
  std::size_t n = 0;
  check(simcomb_bpe_size(codes.get(), &n));
  std::cerr << "bpe: " << n << " merges -> " << path << '\n';
}

void cmd_bpe_learn(const Options& o) {
  const auto inputs = o.inputs.empty() ? std::vector<std::string>{"-"} : o.inputs;
  if (o.per_side) {
    for (const auto& p : inputs) learn_codes(read_all(p), o, o.codes + "." + extension_or(p, "txt"));
    return;
  }
  std::string text;
  for (const auto& p : inputs) {
    text += read_all(p);
    if (!text.empty() && text.back() != '\n') text.push_back('\n');
  }
  learn_codes(text, o, o.codes);
}

void cmd_bleu(const Options& o) {
  const std::string hyp = read_all(o.input);
  const std::string ref = read_all(o.refs);
  simcomb_bleu_result r{};
  check(simcomb_corpus_bleu(hyp.data(), hyp.size(), ref.data(), ref.size(), o.order, o.lowercase ? 1 : 0, o.threads,
                            &r));
  Output out(o.output);
  auto& os = out.stream();
  if (o.tsv) {
    os << "bleu\tbp";
    for (std::size_t k = 0; k < r.order; ++k) os << "\tp" << k + 1;
    os << "\thyp_len\tref_len\n";
    os << format("%.4f", 100.0 * r.value) << '\t' << format("%.6f", r.brevity_penalty);
    for (std::size_t k = 0; k < r.order; ++k) os << '\t' << format("%.6f", r.precisions[k]);
    os << '\t' << r.hyp_len << '\t' << r.ref_len << '\n';
  } else {
    os << "BLEU = " << format("%.2f", 100.0 * r.value) << " (BP=" << format("%.3f", r.brevity_penalty) << ", p1..p"
       << r.order << '=';
    for (std::size_t k = 0; k < r.order; ++k) os << (k ? "/" : "") << format("%.1f", 100.0 * r.precisions[k]);
    os << ", hyp_len=" << r.hyp_len << ", ref_len=" << r.ref_len << ")\n";
  }
  out.close();
  if (r.empty_hypotheses) std::cerr << "warning: all hypotheses are empty\n";
}

void cmd_sentence_bleu(const Options& o) {
  Input hyp(o.input);
  Input ref(o.refs);
  Output out(o.output);
  std::string hb, rb;
  std::vector<double> scores;
  g_current_input = hyp.name();
  g_line_base = 0;
  for (;;) {
    const std::size_t nh = hyp.read_chunk(hb, chunk_lines(o.threads));
    const std::size_t nr = ref.read_chunk(rb, chunk_lines(o.threads));
    if (nh != nr)
      throw InputError("hypotheses and references differ in length (after line " + std::to_string(g_line_base) + ")");
    if (nh == 0) break;
    scores.assign(nh, 0.0);
    std::size_t count = nh;
    check(simcomb_sentence_bleu(hb.data(), hb.size(), rb.data(), rb.size(), o.order, o.lowercase ? 1 : 0, o.threads,
                                scores.data(), &count));
    std::string chunk;
    for (double s : scores) chunk += format("%.6f", s) + "\n";
    out.write(chunk);
    g_line_base += nh;
  }
  out.close();
}

std::vector<double> read_numbers(const std::string& path) {
  std::istringstream in(read_all(path));
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || line.find_first_not_of(" \t\r", used) != std::string::npos)
      throw InputError(path + ":" + std::to_string(lineno) + ": not a number: '" + line + "'");
    out.push_back(v);
  }
  return out;
}

void cmd_correlate(const Options& o) {
  double r = 0.0;
  std::size_t n = 0;
  if (!o.cands.empty()) {
    const std::string src = read_all(o.source), refs = read_all(o.refs), cands = read_all(o.cands),
                      backs = read_all(o.backs);
    check(simcomb_bt_correlation(src.data(), src.size(), refs.data(), refs.size(), cands.data(), cands.size(),
                                 backs.data(), backs.size(), o.order, &r, &n));
  } else {
    if (o.inputs.size() != 2) throw CLI::ValidationError("correlate", "expects two value files or --cands/--backs");
    const auto xs = read_numbers(o.inputs[0]);
    const auto ys = read_numbers(o.inputs[1]);
    if (xs.size() != ys.size())
      throw InputError("value files differ in length: " + std::to_string(xs.size()) + " vs " +
                       std::to_string(ys.size()));
    check(simcomb_pearson(xs.data(), ys.data(), xs.size(), &r));
    n = xs.size();
  }
  Output out(o.output);
  out.stream() << "r = " << format("%.6f", r) << " (n=" << n << ")\n";
  out.close();
}

void cmd_lm_train(const Options& o) {
  const std::string text = read_all(o.input);
  simcomb_lm_options opts;
  simcomb_lm_options_init(&opts);
  opts.order = o.lm_order;
  opts.level = lm_level(o.level);
  opts.unk_floor = o.unk_floor;
  Lm lm;
  check(simcomb_lm_train(text.data(), text.size(), &opts, lm.out()));
  Text warnings;
  check(simcomb_lm_warnings(lm.get(), warnings.out()));
  std::istringstream ws{std::string(warnings.view())};
  for (std::string w; std::getline(ws, w);) std::cerr << "warning: " << w << '\n';
  check(simcomb_lm_save(lm.get(), o.model.c_str()));
}

void cmd_lm_ppl(const Options& o) {
  Lm lm;
  check(simcomb_lm_load(o.model.c_str(), lm.out()));
  const std::string text = read_all(o.input);
  simcomb_ppl_report rep{};
  check(simcomb_lm_perplexity(lm.get(), text.data(), text.size(), o.threads, &rep));
  Output out(o.output);
  out.stream() << "ppl = " << format("%.4f", rep.perplexity) << " log10prob = " << format("%.4f", rep.log10_prob)
               << " events = " << rep.events << " oov = " << rep.oov << " sentences = " << rep.sentences << '\n';
  out.close();
}

void cmd_lang_dist(const Options& o) {
  if (o.inputs.size() != 2) throw CLI::ValidationError("lang-dist", "expects exactly two corpora");
  const std::string a = read_all(o.inputs[0]);
  const std::string b = read_all(o.inputs[1]);
  simcomb_distance_options opts;
  simcomb_distance_options_init(&opts);
  opts.order = o.dist_order;
  opts.level = lm_level(o.dist_level);
  opts.seed = o.seed;
  opts.threads = o.threads;
  simcomb_distance_report rep{};
  check(simcomb_language_distance(a.data(), a.size(), b.data(), b.size(), &opts, &rep));
  const auto comma = o.names.find(',');
  const std::string na = comma == std::string::npos ? o.names : o.names.substr(0, comma);
  const std::string nb = comma == std::string::npos ? "B" : o.names.substr(comma + 1);
  Output out(o.output);
  out.stream() << "lang_a\tlang_b\tppl_ab\tppl_ba\tdistance\n"
               << na << '\t' << nb << '\t' << format("%.4f", rep.ppl_ab) << '\t' << format("%.4f", rep.ppl_ba) << '\t'
               << format("%.4f", rep.distance) << '\n';
  out.close();
}

void cmd_combine(const Options& o) {
  const std::string src = read_all(o.source);
  const std::string cands = read_all(o.cands);
  const bool need_backs = o.strategy == "bt";
  if (need_backs && o.backs.empty()) throw CLI::ValidationError("--backs", "required by the bt strategy");
  const std::string backs = need_backs ? read_all(o.backs) : std::string();
  simcomb_combine_config cfg;
  simcomb_combine_config_init(&cfg);
  cfg.strategy = o.strategy.c_str();
  cfg.weights = o.weights.c_str();
  cfg.priority = o.priority.c_str();
  cfg.geometric = o.geometric ? 1 : 0;
  cfg.bleu_order = o.order;
  cfg.threads = o.threads;
  Text selections, summary;
  check(simcomb_combine(src.data(), src.size(), cands.data(), cands.size(), need_backs ? backs.data() : nullptr,
                        backs.size(), &cfg, selections.out(), summary.out()));
  Output out(o.output);
  out.write(selections.view());
  out.close();
  std::cerr << summary.view();
}

// --- argument handling -----------------------------------------------------------

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string suggest(std::string_view word, const std::vector<std::string>& choices) {
  std::string best;
  std::size_t best_d = std::max<std::size_t>(2, word.size() / 3) + 1;
  for (const auto& c : choices) {
    const std::size_t d = edit_distance(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<std::string> long_flags(const CLI::App* app) {
  std::vector<std::string> out;
  for (const CLI::Option* opt : app->get_options())
    for (const auto& n : opt->get_lnames()) out.push_back("--" + n);
  return out;
}

CLI::App* find_subcommand(CLI::App& app, const std::vector<std::string>& args) {
  for (const auto& a : args) {
    if (a.empty() || a[0] == '-') continue;
    if (auto* sub = app.get_subcommand_no_throw(a)) return sub;
  }
  return nullptr;
}

bool given(const CLI::Option* opt, const std::vector<std::string>& args) {
  for (const auto& a : args) {
    for (const auto& n : opt->get_lnames())
      if (a == "--" + n || a.rfind("--" + n + "=", 0) == 0) return true;
    for (const auto& n : opt->get_snames())
      if (a.rfind("-" + n, 0) == 0 && a.rfind("--", 0) != 0) return true;
  }
  return false;
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// `key = value` lines become `--key value` unless the flag is already on the
// command line.
std::vector<std::string> apply_config(CLI::App& app, CLI::App* sub, std::vector<std::string> args) {
  const std::string path = config_path(args);
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key == "config") continue;
    const CLI::Option* opt = sub != nullptr ? sub->get_option_no_throw("--" + key) : nullptr;
    if (opt == nullptr) opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr || !opt->nonpositional()) {
      std::cerr << "simcomb: note: config key '" << key << "' does not apply here; ignored\n";
      continue;
    }
    if (given(opt, args)) continue;
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1" || value == "yes" || value == "on") args.push_back("--" + key);
      continue;
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

void build(CLI::App& app, Options& o, std::map<CLI::App*, std::function<void()>>& actions) {
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("simcomb ") + simcomb_version() + " (" + simcomb_build_id() + ")");
  app.add_option("-j,--threads", o.threads, "Worker threads; output does not depend on it")
      ->check(CLI::PositiveNumber);
  app.add_option("--config", o.config, "File of `key = value` defaults; command-line flags win");

  auto add = [&](const char* name, const char* help, std::function<void()> fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    actions[sub] = std::move(fn);
    return sub;
  };

  auto* s = add("normalize", "NFC plus typographic cleanup, one line at a time", [&] {
    stream(o.input, o.output, o.threads,
           [&](const char* d, std::size_t n, simcomb_text_t* out) { return simcomb_normalize(d, n, o.threads, out); });
  });
  add_io(s, o);

  s = add("tokenize", "Split punctuation from words", [&] {
    stream(o.input, o.output, o.threads,
           [&](const char* d, std::size_t n, simcomb_text_t* out) { return simcomb_tokenize(d, n, o.threads, out); });
  });
  add_io(s, o);

  s = add("detokenize", "Rejoin tokenized text", [&] {
    stream(o.input, o.output, o.threads,
           [&](const char* d, std::size_t n, simcomb_text_t* out) { return simcomb_detokenize(d, n, o.threads, out); });
  });
  add_io(s, o);

  s = add("truecase-train", "Learn a truecasing model", [&] { cmd_truecase_train(o); });
  s->add_option("inputs", o.inputs, "Tokenized training text");
  s->add_option("-m,--model", o.model, "Model file to write")->required();

  s = add("truecase", "Apply a truecasing model", [&] {
    Truecaser tc;
    check(simcomb_truecaser_load(o.model.c_str(), tc.out()));
    stream(o.input, o.output, o.threads, [&](const char* d, std::size_t n, simcomb_text_t* out) {
      return simcomb_truecaser_apply(tc.get(), d, n, o.threads, out);
    });
  });
  add_io(s, o);
  s->add_option("-m,--model", o.model, "Truecasing model")->required();

  s = add("detruecase", "Capitalize the first word of each line", [&] {
    stream(o.input, o.output, o.threads,
           [&](const char* d, std::size_t n, simcomb_text_t* out) { return simcomb_detruecase(d, n, o.threads, out); });
  });
  add_io(s, o);

  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("src", o.src, "Source side")->required();
    sub->add_option("tgt", o.tgt, "Target side")->required();
    sub->add_option("outdir", o.outdir, "Output directory")->required();
  };

  s = add("clean", "Drop pairs by length and length ratio", [&] { cmd_clean(o); });
  add_pair(s);
  s->add_option("--min", o.min_len, "Minimum tokens per side")->capture_default_str();
  s->add_option("--max", o.max_len, "Maximum tokens per side")->capture_default_str();
  s->add_option("--ratio", o.max_ratio, "Maximum length ratio")->capture_default_str();

  s = add("dedup", "Drop duplicate pairs and metadata lines", [&] { cmd_dedup(o); });
  add_pair(s);
  s->add_option("--patterns", o.patterns, "Metadata regexes, one per line");

  s = add("split", "Carve dev and test sets out of a corpus", [&] { cmd_split(o); });
  add_pair(s);
  s->add_option("--dev", o.dev, "Dev set size")->capture_default_str();
  s->add_option("--test", o.test, "Test set size")->capture_default_str();
  s->add_option("--seed", o.seed, "Shuffle seed")->capture_default_str();

  s = add("copy-corpus", "Target monolingual text on both sides", [&] { cmd_copy_corpus(o); });
  s->add_option("input", o.input, "Monolingual target text")->required();
  s->add_option("-o,--prefix", o.prefix, "Output prefix")->required();
  s->add_option("--src-lang", o.src_lang, "Source language extension")->capture_default_str();
  s->add_option("--tgt-lang", o.tgt_lang, "Target language extension")->capture_default_str();

  s = add("pseudo-merge", "Pair monolingual target text with its machine translation", [&] { cmd_pseudo_merge(o); });
  s->add_option("tgt", o.tgt, "Monolingual target text")->required();
  s->add_option("src", o.src, "Its translation into the source language")->required();
  s->add_option("-o,--prefix", o.prefix, "Output prefix")->required();
  s->add_option("--src-lang", o.src_lang, "Source language extension")->capture_default_str();
  s->add_option("--tgt-lang", o.tgt_lang, "Target language extension")->capture_default_str();

  s = add("bpe-learn", "Learn BPE merge operations", [&] { cmd_bpe_learn(o); });
  s->add_option("inputs", o.inputs, "Tokenized training text");
  s->add_option("-s,--merges", o.merges, "Number of merge operations")->capture_default_str();
  s->add_option("-c,--codes", o.codes, "Merge table to write")->required();
  s->add_flag("--per-side", o.per_side, "One table per input, written to <codes>.<input extension>");

  s = add("bpe-apply", "Segment text with a merge table", [&] {
    Bpe codes;
    check(simcomb_bpe_load(o.codes.c_str(), codes.out()));
    stream(o.input, o.output, o.threads, [&](const char* d, std::size_t n, simcomb_text_t* out) {
      return simcomb_bpe_apply(codes.get(), d, n, o.threads, out);
    });
  });
  add_io(s, o);
  s->add_option("-c,--codes", o.codes, "Merge table")->required();

  s = add("bpe-undo", "Remove BPE segmentation", [&] {
    stream(o.input, o.output, o.threads,
           [&](const char* d, std::size_t n, simcomb_text_t* out) { return simcomb_bpe_undo(d, n, o.threads, out); });
  });
  add_io(s, o);

  s = add("bleu", "Corpus BLEU of tokenized hypotheses", [&] { cmd_bleu(o); });
  add_io(s, o);
  s->add_option("-r,--refs", o.refs, "Reference file")->required();
  s->add_option("--order", o.order, "Maximum n-gram order")->capture_default_str();
  s->add_flag("--lowercase", o.lowercase, "Compare lowercased tokens");
  s->add_flag("--tsv", o.tsv, "Tab-separated output");

  s = add("sentence-bleu", "Smoothed BLEU per line", [&] { cmd_sentence_bleu(o); });
  add_io(s, o);
  s->add_option("-r,--refs", o.refs, "Reference file")->required();
  s->add_option("--order", o.order, "Maximum n-gram order")->capture_default_str();
  s->add_flag("--lowercase", o.lowercase, "Compare lowercased tokens");

  s = add("correlate", "Pearson correlation of two value files, or of translation vs round-trip quality",
          [&] { cmd_correlate(o); });
  s->add_option("inputs", o.inputs, "Two files of one number per line");
  s->add_option("-o,--output", o.output, "Output file");
  s->add_option("--source", o.source, "Source sentences");
  s->add_option("-r,--refs", o.refs, "References");
  s->add_option("--cands", o.cands, "Candidate TSV");
  s->add_option("--backs", o.backs, "Back-translation TSV");
  s->add_option("--order", o.order, "Sentence BLEU order")->capture_default_str();

  s = add("lm-train", "Train a Kneser-Ney language model", [&] { cmd_lm_train(o); });
  s->add_option("input", o.input, "Training text");
  s->add_option("-m,--model", o.model, "ARPA file to write")->required();
  s->add_option("--order", o.lm_order, "Model order")->capture_default_str();
  s->add_option("--level", o.level, "word or char")->capture_default_str();
  s->add_option("--unk-floor", o.unk_floor, "Map symbols seen fewer times to <unk>")->capture_default_str();

  s = add("lm-ppl", "Perplexity of text under a model", [&] { cmd_lm_ppl(o); });
  add_io(s, o);
  s->add_option("-m,--model", o.model, "ARPA model")->required();

  s = add("lang-dist", "Perplexity-based distance between two languages", [&] { cmd_lang_dist(o); });
  s->add_option("inputs", o.inputs, "Corpus A and corpus B")->required();
  s->add_option("-o,--output", o.output, "Output file");
  s->add_option("--order", o.dist_order, "Model order")->capture_default_str();
  s->add_option("--level", o.dist_level, "word or char")->capture_default_str();
  s->add_option("--seed", o.seed, "Held-out split seed")->capture_default_str();
  s->add_option("--names", o.names, "Language names, comma separated")->capture_default_str();

  s = add("combine", "Pick one candidate translation per sentence", [&] { cmd_combine(o); });
  s->add_option("--strategy", o.strategy, "bt, mbr or ratio")
      ->check(CLI::IsMember({"bt", "mbr", "ratio"}))
      ->capture_default_str();
  s->add_option("--source", o.source, "Source sentences, line i is sent_id i")->required();
  s->add_option("--cands", o.cands, "Candidate TSV: sent_id, system, text")->required();
  s->add_option("--backs", o.backs, "Back-translation TSV: sent_id, fwd, back, text");
  s->add_option("--weights", o.weights, "Back-system weights, e.g. pb=1,nmt=1");
  s->add_option("--priority", o.priority, "Systems best first, e.g. nmt,pb");
  s->add_flag("--geometric", o.geometric, "Weighted geometric mean of back-translation scores");
  s->add_option("--bleu-order", o.order, "Sentence BLEU order")->capture_default_str();
  s->add_option("-o,--output", o.output, "Selections TSV (default: standard output)");
}

int usage_error(const std::string& msg) {
  std::cerr << "simcomb: error: " << msg << "\nRun 'simcomb --help' for usage.\n";
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  std::map<CLI::App*, std::function<void()>> actions;
  CLI::App app{"simcomb: corpus preparation, evaluation and system combination for machine translation"};
  app.name("simcomb");
  build(app, o, actions);

  std::vector<std::string> args(argv + 1, argv + argc);
  CLI::App* sub = find_subcommand(app, args);
  try {
    args = apply_config(app, sub, std::move(args));
  } catch (const InputError& e) {
    std::cerr << "simcomb: error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ExtrasError&) {
    for (const auto& a : args) {
      if (a.rfind("--", 0) == 0) {
        const std::string name = a.substr(0, a.find('='));
        std::vector<std::string> flags = long_flags(&app);
        if (sub != nullptr) {
          const auto more = long_flags(sub);
          flags.insert(flags.end(), more.begin(), more.end());
        }
        if (std::find(flags.begin(), flags.end(), name) != flags.end()) continue;
        const std::string hint = suggest(name, flags);
        return usage_error("unknown option '" + name + "'" + (hint.empty() ? "" : "; did you mean '" + hint + "'?"));
      }
    }
    if (sub == nullptr) {
      std::vector<std::string> names;
      for (const auto* s : app.get_subcommands({})) names.push_back(s->get_name());
      for (const auto& a : args) {
        if (a.empty() || a[0] == '-') continue;
        const std::string hint = suggest(a, names);
        return usage_error("unknown command '" + a + "'" + (hint.empty() ? "" : "; did you mean '" + hint + "'?"));
      }
    }
    return usage_error("unexpected arguments for '" + sub->get_name() + "'");
  } catch (const CLI::ParseError& e) {
    if (sub == nullptr && !args.empty()) {
      std::vector<std::string> names;
      for (const auto* s : app.get_subcommands({})) names.push_back(s->get_name());
      for (const auto& a : args) {
        if (a.empty() || a[0] == '-') continue;
        const std::string hint = suggest(a, names);
        return usage_error("unknown command '" + a + "'" + (hint.empty() ? "" : "; did you mean '" + hint + "'?"));
      }
    }
    return usage_error(e.what());
  }

  for (auto& [cmd, fn] : actions) {
    if (!cmd->parsed()) continue;
    try {
      fn();
      return 0;
    } catch (const InputError& e) {
      std::cerr << "simcomb: error: " << e.what() << '\n';
      return kExitInput;
    } catch (const CLI::ValidationError& e) {
      return usage_error(e.what());
    } catch (const std::exception& e) {
      std::cerr << "simcomb: error: " << e.what() << '\n';
      return kExitInput;
    }
  }
  return usage_error("no command given");
}
