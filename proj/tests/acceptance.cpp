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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "simcomb/bpe.hpp"
#include "simcomb/combine.hpp"
#include "simcomb/lm.hpp"
#include "simcomb/metrics.hpp"
#include "simcomb/simcomb.h"
#include "simcomb/textkit.hpp"

using namespace simcomb;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 3) failures_.push_back(what);
    ok_ = ok_ && ok;
  }
  Outcome outcome(std::string detail) const {
    if (ok_) return {true, std::move(detail)};
    std::string msg;
    for (const auto& f : failures_) msg += (msg.empty() ? "" : "; ") + f;
    return {false, msg};
  }

 private:
  bool ok_ = true;
  std::vector<std::string> failures_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// --- 1 ------------------------------------------------------------------------

Outcome bleu_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  Check c;
  double worst = 0.0;
  std::vector<TokenLine> hyps, refs;
  for (int i = 0; i < 200; ++i) {
    const std::size_t alphabet = 2 + rng() % 4;
    const auto h = oracle::random_lines(rng, 1, alphabet, 12, 1)[0];
    const auto r = oracle::random_lines(rng, 1, alphabet, 12, 1)[0];
    hyps.push_back(h);
    refs.push_back(r);
    const double ds = std::abs(sentence_bleu(h, r) - oracle::sentence_bleu(h, r));
    const double dc = std::abs(corpus_bleu({h}, {r}).value - oracle::corpus_bleu({h}, {r}));
    worst = std::max({worst, ds, dc});
    c.expect(ds <= 1e-9, "sentence_bleu pair " + std::to_string(i));
    c.expect(dc <= 1e-9, "corpus_bleu pair " + std::to_string(i));
  }
  const double whole = std::abs(corpus_bleu(hyps, refs).value - oracle::corpus_bleu(hyps, refs));
  worst = std::max(worst, whole);
  c.expect(whole <= 1e-9, "corpus_bleu over all 200 pairs");
  const double t = seconds_since(t0);
  c.expect(t < 5.0, "runtime " + fmt("%.2f s", t));
  return c.outcome("200 pairs, max |diff| = " + fmt("%.1e", worst) + ", " + fmt("%.3f s", t));
}

// --- 2 ------------------------------------------------------------------------

Outcome bleu_identity() {
  Check c;
  std::mt19937_64 rng(1002);
  for (int i = 0; i < 50; ++i) {
    const auto lines = oracle::random_lines(rng, 5, 5, 12, 4);
    const auto s = corpus_bleu(lines, lines);
    c.expect(fmt("%.2f", 100.0 * s.value) == "100.00" && s.value == 1.0, "identity trial " + std::to_string(i));
  }
  // Unigrams and bigrams match, no trigram does.
  const auto zero = corpus_bleu({{"a", "b", "x", "c", "d"}}, {{"a", "b", "y", "c", "d"}});
  c.expect(zero.precisions[2] == 0.0, "trigram precision should be 0");
  c.expect(zero.value == 0.0 && fmt("%.2f", 100.0 * zero.value) == "0.00", "p3 = 0 should give 0.00");
  const auto no_unigram = corpus_bleu({{"q", "r", "s", "t"}}, {{"a", "b", "c", "d"}});
  c.expect(no_unigram.value == 0.0, "p1 = 0 should give 0.00");
  return c.outcome("hyp == ref gives 100.00; p_n = 0 gives 0.00");
}

// --- 3 ------------------------------------------------------------------------

Outcome mbr_exactness() {
  Check c;
  std::mt19937_64 rng(1003);
  std::size_t ties = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 1 + rng() % 6;
    const auto cands = oracle::random_lines(rng, k, 2 + rng() % 4, 8, 1);
    CandidateSet cs;
    for (std::size_t i = 0; i < k; ++i) cs.candidates.push_back({"sys" + std::to_string(i), cands[i]});
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    CombinerConfig cfg;
    for (std::size_t i : order) cfg.system_priority.push_back(cs.candidates[i].system);
    const std::size_t expected = oracle::mbr(cands, order);
    const auto got = mbr_select(cs, cfg);
    for (std::size_t i = 0; i < k; ++i)
      if (i != expected && std::abs(got.scores.at(cs.candidates[i].system) - got.scores.at(got.chosen_system)) < 1e-12)
        ++ties;
    c.expect(got.chosen_system == cs.candidates[expected].system, "trial " + std::to_string(trial));
  }
  return c.outcome("500 sets, " + std::to_string(ties) + " tied runners-up resolved by priority");
}

// --- 4 ------------------------------------------------------------------------

Outcome bt_selection() {
  Check c;
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> weight(0.05, 5.0);
  std::size_t selected = 0;
  std::size_t invariant = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto source = oracle::random_lines(rng, 1, 6, 10, 3)[0];
    const std::size_t systems = 2 + rng() % 4;
    const std::size_t backs = 1 + rng() % 3;
    const std::size_t winner = rng() % systems;
    CandidateSet cs;
    cs.source = source;
    CombinerConfig cfg;
    std::vector<BackTranslationRecord> bts, noisy;
    for (std::size_t b = 0; b < backs; ++b) cfg.back_system_weights["back" + std::to_string(b)] = weight(rng);
    for (std::size_t s = 0; s < systems; ++s) {
      const std::string sys = "fwd" + std::to_string(s);
      cs.candidates.push_back({sys, oracle::random_lines(rng, 1, 6, 10, 1)[0]});
      cfg.system_priority.push_back(sys);
      for (std::size_t b = 0; b < backs; ++b) {
        TokenLine text = source;
        if (s != winner)
          do text = oracle::random_lines(rng, 1, 6, 10, 1)[0];
          while (text == source);
        bts.push_back({0, sys, "back" + std::to_string(b), text});
        noisy.push_back({0, sys, "back" + std::to_string(b), oracle::random_lines(rng, 1, 6, 10, 1)[0]});
      }
    }
    std::shuffle(cfg.system_priority.begin(), cfg.system_priority.end(), rng);
    const auto chosen = bt_select(cs, bts, cfg).chosen_system;
    if (chosen == cs.candidates[winner].system) ++selected;

    bool same = true;
    const auto base = bt_select(cs, noisy, cfg).chosen_system;
    for (double scale : {1e-3, 3.7, 1e4}) {
      CombinerConfig scaled = cfg;
      for (auto& [b, w] : scaled.back_system_weights) w *= scale;
      same = same && bt_select(cs, noisy, scaled).chosen_system == base &&
             bt_select(cs, bts, scaled).chosen_system == chosen;
    }
    if (same) ++invariant;
  }
  c.expect(selected == 100, "verbatim system selected in " + std::to_string(selected) + "/100");
  c.expect(invariant == 100, "rescaling invariant in " + std::to_string(invariant) + "/100");
  return c.outcome("selected " + std::to_string(selected) + "/100, rescaling invariant " + std::to_string(invariant) +
                   "/100");
}

// --- 5 ------------------------------------------------------------------------

std::vector<TokenLine> random_words(std::mt19937_64& rng, std::size_t lines, const std::vector<std::string>& alphabet) {
  std::vector<TokenLine> out(lines);
  for (auto& l : out) {
    for (std::size_t i = 0, n = rng() % 8; i < n; ++i) {
      std::string w;
      for (std::size_t k = 0, len = 1 + rng() % 9; k < len; ++k) w += alphabet[rng() % alphabet.size()];
      l.push_back(w);
    }
  }
  return out;
}

std::string serialized(const MergeTable& t) {
  std::ostringstream ss;
  t.write(ss);
  return ss.str();
}

Outcome bpe_round_trip() {
  Check c;
  std::mt19937_64 rng(1005);
  const std::vector<std::string> alphabet{"a", "b", "c", "d", "e", "\xC3\xA9", "\xE2\x82\xAC", "x", "-", "."};
  std::size_t checked = 0;
  for (int table = 0; table < 20; ++table) {
    MergeTable t;
    if (table % 2 == 0) {
      t = learn_bpe(random_words(rng, 200, alphabet), rng() % 400);
    } else {
      // Arbitrary table: merges that the learner would never produce.
      for (int k = 0; k < 40; ++k) {
        const std::string l = alphabet[rng() % alphabet.size()] + (rng() % 2 ? alphabet[rng() % alphabet.size()] : "");
        const std::string r = alphabet[rng() % alphabet.size()] + (rng() % 3 ? "" : "</w>");
        if (!t.rank(l, r)) t.add(l, r);
      }
    }
    for (const auto& line : random_words(rng, 50, alphabet)) {
      ++checked;
      c.expect(undo_bpe(apply_bpe(t, line)) == line, "round trip under table " + std::to_string(table));
    }
  }
  const auto corpus = random_words(rng, 2000, alphabet);
  const std::string first = serialized(learn_bpe(corpus, 500, 1));
  for (int run = 0; run < 3; ++run)
    for (unsigned threads : {1u, 4u})
      c.expect(serialized(learn_bpe(corpus, 500, threads)) == first,
               "learn_bpe differs at " + std::to_string(threads) + " threads");
  return c.outcome(std::to_string(checked) + " lines round-trip; learn_bpe byte-identical over 3 runs x {1, 4} threads");
}

// --- 6 ------------------------------------------------------------------------

double prob(const KnModel& m, const TokenLine& h, const std::string& w) { return std::pow(10.0, m.log10_prob(h, w)); }

Outcome kn_normalization() {
  Check c;
  std::mt19937_64 rng(1006);
  const auto corpus = oracle::random_lines(rng, 1000, 8, 15, 1);
  double worst = 0.0;
  std::size_t contexts = 0;
  for (std::size_t order = 2; order <= 5; ++order) {
    const auto m = KnModel::train(corpus, {order});
    for (int k = 0; k < 100; ++k) {
      TokenLine h;
      if (k % 4 == 0) h.push_back("<s>");
      const std::size_t len = rng() % order;
      for (std::size_t i = 0; i < len; ++i)
        h.push_back(k % 5 == 4 ? "unseen" + std::to_string(i) : std::string(1, static_cast<char>('a' + rng() % 8)));
      ++contexts;
      double sum = 0.0;
      for (const auto& w : m.vocab())
        if (w != "<s>") sum += prob(m, h, w);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  c.expect(worst <= 1e-6, "max |sum - 1| = " + fmt("%.2e", worst));

  // Hand-computed instance: corpus "a b" / "a c", order 2, D = 0.5.
  const auto small = KnModel::train({{"a", "b"}, {"a", "c"}}, {2});
  const std::vector<std::tuple<TokenLine, std::string, double>> table{
      {{}, "a", 0.18},       {{}, "</s>", 0.38},    {{}, "<unk>", 0.08},   {{"a"}, "b", 0.34},
      {{"a"}, "a", 0.09},    {{"a"}, "</s>", 0.19}, {{"<s>"}, "a", 0.795},
  };
  double hand = 0.0;
  for (const auto& [h, w, p] : table) hand = std::max(hand, std::abs(prob(small, h, w) - p));
  c.expect(hand <= 1e-9, "hand-computed table off by " + fmt("%.2e", hand));

  double rec = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t order = 1 + trial % 3;
    const auto tiny = oracle::random_lines(rng, 4 + trial, 4, 6);
    const auto m = KnModel::train(tiny, {order});
    const oracle::KneserNey o(tiny, order);
    std::vector<TokenLine> hs{{}, {"<s>"}, {"a"}, {"b", "a"}, {"<s>", "c"}, {"zz"}};
    for (const auto& h : hs)
      for (const auto& w : m.vocab())
        if (w != "<s>") rec = std::max(rec, std::abs(prob(m, h, w) - o.prob(h, w)));
  }
  c.expect(rec <= 1e-9, "recursive oracle off by " + fmt("%.2e", rec));
  return c.outcome(std::to_string(contexts) + " contexts, max |sum - 1| = " + fmt("%.1e", worst) +
                   "; small instances within " + fmt("%.1e", std::max(hand, rec)));
}

// --- 7 ------------------------------------------------------------------------

using Chain = std::vector<std::vector<double>>;

Chain random_chain(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Chain m(n, std::vector<double>(n));
  for (auto& row : m) {
    double sum = 0.0;
    for (auto& p : row) sum += (p = std::pow(u(rng), 4.0));
    for (auto& p : row) p /= sum;
  }
  return m;
}

std::vector<std::string> sample_language(std::mt19937_64& rng, const Chain& m, const std::string& symbols,
                                         std::size_t lines, std::size_t len) {
  std::vector<std::string> out;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t l = 0; l < lines; ++l) {
    std::string s;
    std::size_t state = rng() % symbols.size();
    for (std::size_t i = 0; i < len; ++i) {
      double x = u(rng);
      std::size_t next = 0;
      while (next + 1 < m[state].size() && (x -= m[state][next]) > 0) ++next;
      state = next;
      s += symbols[state];
    }
    out.push_back(s);
  }
  return out;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
  return r;
}

Outcome language_distance_properties() {
  Check c;
  std::mt19937_64 rng(1007);
  const std::string sym_a = "abcdefghij ";
  const std::string sym_b = "klmnopqrst_";
  const Chain base = random_chain(rng, sym_a.size());
  const Chain other = random_chain(rng, sym_a.size());
  const auto lang_a = sample_language(rng, base, sym_a, 1500, 40);
  const auto disjoint = sample_language(rng, random_chain(rng, sym_b.size()), sym_b, 1500, 40);
  DistanceOptions opts;
  const double self = language_distance(lang_a, lang_a, opts).distance;
  const double far = language_distance(lang_a, disjoint, opts).distance;
  c.expect(self < far, "d(A,A) = " + fmt("%.2f", self) + " not below d(A,B) = " + fmt("%.2f", far));

  const std::vector<double> lambdas{0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<double> dist;
  for (double lambda : lambdas) {
    Chain mix = base;
    for (std::size_t i = 0; i < mix.size(); ++i)
      for (std::size_t j = 0; j < mix.size(); ++j) mix[i][j] = (1 - lambda) * base[i][j] + lambda * other[i][j];
    dist.push_back(language_distance(lang_a, sample_language(rng, mix, sym_a, 1500, 40), opts).distance);
  }
  const double rho = pearson(ranks(lambdas), ranks(dist));
  c.expect(rho >= 0.9, "Spearman " + fmt("%.3f", rho));
  c.expect(dist.front() < dist.back(), "closer pair not below farther pair");
  std::string series;
  for (double d : dist) series += (series.empty() ? "" : ", ") + fmt("%.2f", d);
  return c.outcome("d(A,A) = " + fmt("%.2f", self) + " < d(A,B) = " + fmt("%.2f", far) + "; distances [" + series +
                   "], Spearman " + fmt("%.3f", rho));
}

// --- 8 ------------------------------------------------------------------------

std::string words(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? " t" : "t") + std::to_string(i);
  return s;
}

Outcome cleaning_thresholds() {
  Check c;
  ParallelCorpus corpus;
  std::vector<std::pair<std::size_t, std::size_t>> expected;
  for (std::size_t a = 1; a <= 120; ++a)
    for (std::size_t b = 1; b <= 120; ++b) {
      corpus.src.push_back(words(a));
      corpus.tgt.push_back(words(b));
      const bool in_range = a >= 7 && a <= 100 && b >= 7 && b <= 100;
      if (in_range && static_cast<double>(std::max(a, b)) / static_cast<double>(std::min(a, b)) <= 9.0)
        expected.emplace_back(a, b);
    }
  const PipelineConfig cfg;
  const auto result = clean_parallel(corpus, cfg);
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  for (std::size_t i = 0; i < result.corpus.size(); ++i)
    kept.emplace_back(split_tokens(result.corpus.src[i]).size(), split_tokens(result.corpus.tgt[i]).size());
  c.expect(kept == expected, "surviving pairs differ from the filter oracle");
  c.expect(result.report.kept == expected.size(), "report kept count");
  c.expect(result.report.kept + result.report.dropped() == corpus.size(), "report totals");
  return c.outcome(std::to_string(kept.size()) + " of " + std::to_string(corpus.size()) +
                   " pairs survive with thresholds (7, 100, 9); oracle agrees");
}

// --- 9 ------------------------------------------------------------------------

Outcome correlation() {
  Check c;
  const std::vector<double> x{1, 2, 3, 4, 5, 6.5, 0.25}, y{2.1, 3.9, 6.2, 7.8, 10.1, 9, -1};
  const double d = std::abs(pearson(x, y) - oracle::pearson(x, y));
  c.expect(d <= 1e-12, "textbook formula off by " + fmt("%.1e", d));
  std::vector<double> pos, neg;
  for (double v : x) {
    pos.push_back(2 * v + 1);
    neg.push_back(-3 * v);
  }
  c.expect(std::abs(pearson(x, pos) - 1.0) <= 1e-12, "positive linear should give 1");
  c.expect(std::abs(pearson(x, neg) + 1.0) <= 1e-12, "negative linear should give -1");
  return c.outcome("r = " + fmt("%.6f", pearson(x, y)) + ", |diff| = " + fmt("%.1e", d) + "; +-1 on linear inputs");
}

// --- 10 -----------------------------------------------------------------------

std::string synthetic_side(std::mt19937_64& rng, std::size_t lines, bool target) {
  static const char* vocab[] = {"The", "house", "is", "small", "\xE2\x80\x9Cquoted\xE2\x80\x9D", "(aside)",
                                "3.14", "caf\x65\xCC\x81", "end.", "world!", "Prague,", "tak\xC5\xBE\x65",
                                "\xC5\xBC\x79\x63\x69\x65", "and", "of", "to", "...", "e-mail", "Mr.", "it\xE2\x80\x99s"};
  std::string out;
  for (std::size_t i = 0; i < lines; ++i) {
    const std::size_t n = 1 + rng() % (target ? 40 : 35);
    for (std::size_t k = 0; k < n; ++k) {
      if (k) out += rng() % 17 ? " " : "  ";
      out += vocab[rng() % 20];
    }
    out += '\n';
  }
  return out;
}

struct TextGuard {
  simcomb_text_t t = nullptr;
  ~TextGuard() { simcomb_text_destroy(t); }
  std::string str() const {
    const char* d = nullptr;
    size_t n = 0;
    simcomb_text_view(t, &d, &n);
    return std::string(d, n);
  }
};

void ok(int rc) {
  if (rc != SIMCOMB_OK) throw std::runtime_error(simcomb_last_error_message());
}

std::string pipe_lines(int (*fn)(const char*, size_t, unsigned, simcomb_text_t*), const std::string& in,
                       unsigned threads) {
  TextGuard g;
  ok(fn(in.data(), in.size(), threads, &g.t));
  return g.str();
}

// normalize -> tokenize -> truecase -> clean -> bpe-apply on both sides.
std::string run_pipeline(const std::string& src, const std::string& tgt, unsigned threads) {
  std::string sides[2] = {src, tgt};
  for (auto& s : sides) {
    s = pipe_lines(simcomb_normalize, s, threads);
    s = pipe_lines(simcomb_tokenize, s, threads);
    simcomb_truecaser_t tc = nullptr;
    ok(simcomb_truecaser_train(s.data(), s.size(), threads, &tc));
    TextGuard g;
    const int rc = simcomb_truecaser_apply(tc, s.data(), s.size(), threads, &g.t);
    simcomb_truecaser_destroy(tc);
    ok(rc);
    s = g.str();
  }
  simcomb_corpus_t corpus = nullptr, cleaned = nullptr;
  ok(simcomb_corpus_create(sides[0].data(), sides[0].size(), sides[1].data(), sides[1].size(), &corpus));
  simcomb_pipeline_config cfg;
  simcomb_pipeline_config_init(&cfg);
  simcomb_clean_report rep{};
  const int rc = simcomb_corpus_clean(corpus, &cfg, &cleaned, &rep);
  simcomb_corpus_destroy(corpus);
  ok(rc);
  std::string out = "kept " + std::to_string(rep.kept) + "\n";
  for (int side : {SIMCOMB_SIDE_SRC, SIMCOMB_SIDE_TGT}) {
    TextGuard text;
    ok(simcomb_corpus_side(cleaned, side, &text.t));
    const std::string s = text.str();
    simcomb_bpe_t codes = nullptr;
    ok(simcomb_bpe_learn(s.data(), s.size(), 1000, threads, &codes));
    TextGuard seg;
    const int arc = simcomb_bpe_apply(codes, s.data(), s.size(), threads, &seg.t);
    simcomb_bpe_destroy(codes);
    ok(arc);
    out += seg.str();
  }
  simcomb_corpus_destroy(cleaned);
  return out;
}

Outcome throughput() {
  Check c;
  std::mt19937_64 rng(1010);
  const std::string src = synthetic_side(rng, 100000, false);
  const std::string tgt = synthetic_side(rng, 100000, true);
  auto t0 = Clock::now();
  const std::string one = run_pipeline(src, tgt, 1);
  const double t1 = seconds_since(t0);
  t0 = Clock::now();
  const std::string eight = run_pipeline(src, tgt, 8);
  const double t8 = seconds_since(t0);
  c.expect(t1 < 60.0, "single-threaded run took " + fmt("%.1f s", t1));
  c.expect(one == eight, "outputs differ between 1 and 8 threads");
  c.expect(one.size() > 1000, "pipeline produced almost nothing");
  return c.outcome("100k lines in " + fmt("%.1f s", t1) + " (1 thread), " + fmt("%.1f s", t8) + " (8 threads), " +
                   std::to_string(one.size()) + " identical bytes");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"BLEU oracle equivalence", bleu_oracle},
      {"BLEU identity", bleu_identity},
      {"MBR exactness", mbr_exactness},
      {"back-translation selection", bt_selection},
      {"BPE round trip and determinism", bpe_round_trip},
      {"KN normalization", kn_normalization},
      {"language distance properties", language_distance_properties},
      {"cleaning thresholds", cleaning_thresholds},
      {"correlation diagnostic", correlation},
      {"determinism and throughput", throughput},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
