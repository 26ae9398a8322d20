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

#include "simcomb/lm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "simcomb/error.hpp"
#include "simcomb/parallel.hpp"
#include "simcomb/rng.hpp"
#include "simcomb/unicode.hpp"
#include "simcomb/version.hpp"

namespace simcomb {

namespace {

constexpr std::uint32_t kUnkId = 0;
constexpr std::uint32_t kBosId = 1;
constexpr std::uint32_t kEosId = 2;
constexpr double kLog10Zero = -99.0;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t lineno) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrorCode::Parse, "ARPA line " + std::to_string(lineno) + ": bad number '" + std::string(s) + "'");
  return v;
}

bool is_special(std::string_view s) { return s == kUnk || s == kBos || s == kEos; }

}  // namespace

const char* lm_level_name(LmLevel level) noexcept { return level == LmLevel::Char ? "char" : "word"; }

LmLevel parse_lm_level(std::string_view name) {
  if (name == "word") return LmLevel::Word;
  if (name == "char") return LmLevel::Char;
  fail(ErrorCode::Config, "unknown LM level '" + std::string(name) + "' (expected word or char)");
}

TokenLine char_symbols(std::string_view line) {
  TokenLine out;
  const std::string joined = join_tokens(split_tokens(line));
  for (auto& ch : unicode::split_chars(joined)) out.push_back(ch == " " ? std::string(kSpaceSymbol) : std::move(ch));
  return out;
}

// --- KnModel accessors ---------------------------------------------------------

std::uint32_t KnModel::intern(const std::string& symbol) {
  const auto [it, inserted] = ids_.emplace(symbol, static_cast<std::uint32_t>(vocab_.size()));
  if (inserted) vocab_.push_back(symbol);
  return it->second;
}

std::uint32_t KnModel::id(std::string_view symbol) const {
  const auto it = ids_.find(std::string(symbol));
  return it == ids_.end() ? kUnkId : it->second;
}

bool KnModel::in_vocab(std::string_view symbol) const { return ids_.count(std::string(symbol)) > 0; }

std::size_t KnModel::ngram_count(std::size_t n) const {
  return n >= 1 && n <= grams_.size() ? grams_[n - 1].size() : 0;
}

TokenLine KnModel::symbols(const TokenLine& line) const {
  return level_ == LmLevel::Char ? char_symbols(join_tokens(line)) : line;
}

double KnModel::log10_prob(std::span<const std::uint32_t> history, std::uint32_t word) const {
  const std::size_t context = std::min(history.size(), order_ - 1);
  std::u32string key;
  double backoff = 0.0;
  for (std::size_t len = context;; --len) {
    key.assign(history.end() - static_cast<std::ptrdiff_t>(len), history.end());
    key.push_back(static_cast<char32_t>(word));
    const auto& table = grams_[len];
    if (const auto it = table.find(key); it != table.end()) return backoff + it->second.log10_prob;
    if (len == 0) return backoff + kLog10Zero;
    key.pop_back();
    const auto& lower = grams_[len - 1];
    if (const auto it = lower.find(key); it != lower.end() && it->second.has_backoff)
      backoff += it->second.log10_backoff;
  }
}

double KnModel::log10_prob(const std::vector<std::string>& history, std::string_view word) const {
  std::vector<std::uint32_t> ids;
  ids.reserve(history.size());
  for (const auto& h : history) ids.push_back(id(h));
  return log10_prob(ids, id(word));
}

// --- training ------------------------------------------------------------------

class KnTrainer {
 public:
  static KnModel run(const std::vector<TokenLine>& corpus, const KnOptions& options) {
    KnModel m;
    m.order_ = options.order;
    m.level_ = options.level;
    m.intern(std::string(kUnk));
    m.intern(std::string(kBos));
    m.intern(std::string(kEos));

    std::vector<TokenLine> lines;
    lines.reserve(corpus.size());
    std::map<std::string, std::size_t> freq;
    for (const auto& line : corpus) {
      lines.push_back(m.symbols(line));
      for (const auto& s : lines.back())
        if (!is_special(s)) ++freq[s];
    }
    for (const auto& [s, n] : freq)
      if (n >= options.unk_floor) m.intern(s);

    const std::size_t N = options.order;
    // adjusted[k] holds (k+1)-grams: raw counts for the highest order and for
    // grams starting with <s>, continuation counts otherwise.
    std::vector<std::unordered_map<std::u32string, std::size_t>> adjusted(N);
    std::u32string padded;
    for (const auto& line : lines) {
      padded.clear();
      padded.push_back(kBosId);
      for (const auto& s : line) padded.push_back(static_cast<char32_t>(is_special(s) ? kUnkId : m.id(s)));
      padded.push_back(kEosId);
      for (std::size_t i = 1; i < padded.size(); ++i) {
        const std::size_t len = std::min(N, i + 1);
        ++adjusted[len - 1][padded.substr(i + 1 - len, len)];
      }
    }
    for (std::size_t k = N - 1; k >= 1; --k)
      for (const auto& [gram, count] : adjusted[k]) ++adjusted[k - 1][gram.substr(1)];

    m.discounts_.resize(N);
    for (std::size_t k = 0; k < N; ++k) m.discounts_[k] = estimate_discounts(adjusted[k], k + 1, m.warnings_);

    m.grams_.assign(N, {});
    std::vector<std::unordered_map<std::u32string, double>> prob(N);

    // Unigrams: interpolate with the uniform distribution over everything
    // but <s>, which is how <unk> gets its mass.
    {
      const Discounts& d = m.discounts_[0];
      ContextStats stats;
      for (const auto& [gram, a] : adjusted[0]) stats.add(a);
      const double vocab_size = static_cast<double>(m.vocab_.size() - 1);
      const double gamma = stats.total > 0 ? stats.mass(d) / static_cast<double>(stats.total) : 1.0;
      for (std::uint32_t w = 0; w < m.vocab_.size(); ++w) {
        const std::u32string key(1, static_cast<char32_t>(w));
        if (w == kBosId) {
          m.grams_[0][key].log10_prob = kLog10Zero;
          continue;
        }
        const auto it = adjusted[0].find(key);
        const std::size_t a = it == adjusted[0].end() ? 0 : it->second;
        double p = gamma / vocab_size;
        if (a > 0) p += (static_cast<double>(a) - d(a)) / static_cast<double>(stats.total);
        prob[0][key] = p;
        m.grams_[0][key].log10_prob = std::log10(p);
      }
    }

    for (std::size_t k = 1; k < N; ++k) {
      const Discounts& d = m.discounts_[k];
      std::unordered_map<std::u32string, ContextStats> contexts;
      for (const auto& [gram, a] : adjusted[k]) contexts[gram.substr(0, k)].add(a);
      for (const auto& [gram, a] : adjusted[k]) {
        const auto& ctx = contexts.at(gram.substr(0, k));
        const double total = static_cast<double>(ctx.total);
        const double gamma = ctx.mass(d) / total;
        const double lower = prob[k - 1].at(gram.substr(1));
        const double p = (static_cast<double>(a) - d(a)) / total + gamma * lower;
        prob[k][gram] = p;
        m.grams_[k][gram].log10_prob = std::log10(p);
      }
      for (const auto& [context, ctx] : contexts) {
        auto& entry = m.grams_[k - 1].at(context);
        entry.has_backoff = true;
        entry.log10_backoff = std::log10(ctx.mass(d) / static_cast<double>(ctx.total));
      }
    }
    return m;
  }

 private:
  struct ContextStats {
    std::size_t total = 0;
    std::size_t n1 = 0, n2 = 0, n3 = 0;

    void add(std::size_t a) {
      total += a;
      if (a == 1)
        ++n1;
      else if (a == 2)
        ++n2;
      else if (a >= 3)
        ++n3;
    }
    double mass(const Discounts& d) const {
      return d.d1 * static_cast<double>(n1) + d.d2 * static_cast<double>(n2) + d.d3 * static_cast<double>(n3);
    }
  };

  static Discounts estimate_discounts(const std::unordered_map<std::u32string, std::size_t>& counts, std::size_t n,
                                      std::vector<std::string>& warnings) {
    double coc[5] = {0, 0, 0, 0, 0};
    for (const auto& [gram, a] : counts)
      if (a >= 1 && a <= 4) coc[a] += 1.0;
    Discounts d;
    bool ok = coc[1] > 0 && coc[2] > 0 && coc[3] > 0;
    if (ok) {
      const double y = coc[1] / (coc[1] + 2.0 * coc[2]);
      d.d1 = 1.0 - 2.0 * y * coc[2] / coc[1];
      d.d2 = 2.0 - 3.0 * y * coc[3] / coc[2];
      d.d3 = 3.0 - 4.0 * y * coc[4] / coc[3];
      ok = d.d1 > 0 && d.d1 < 1 && d.d2 > 0 && d.d2 < 2 && d.d3 > 0 && d.d3 < 3;
    }
    if (!ok) {
      std::ostringstream msg;
      msg << "order " << n << ": counts-of-counts n1=" << coc[1] << " n2=" << coc[2] << " n3=" << coc[3]
          << " n4=" << coc[4] << " do not give valid discounts; using 0.5";
      warnings.push_back(msg.str());
      d = Discounts{0.5, 0.5, 0.5, true};
    }
    return d;
  }
};

KnModel KnModel::train(const std::vector<TokenLine>& corpus, const KnOptions& options) {
  if (corpus.empty()) fail(ErrorCode::Config, "cannot train a language model on an empty corpus");
  if (options.order < 1) fail(ErrorCode::Config, "LM order must be >= 1");
  if (options.unk_floor < 1) fail(ErrorCode::Config, "unknown-word floor must be >= 1");
  return KnTrainer::run(corpus, options);
}

// --- ARPA ----------------------------------------------------------------------

void KnModel::write_arpa(std::ostream& out) const {
  out << "# " << kBuildId << " interpolated modified Kneser-Ney\n";
  out << "# order=" << order_ << " level=" << lm_level_name(level_) << '\n';
  for (std::size_t k = 0; k < discounts_.size(); ++k) {
    const auto& d = discounts_[k];
    out << "# discounts " << (k + 1) << ' ' << format_double(d.d1) << ' ' << format_double(d.d2) << ' '
        << format_double(d.d3) << (d.fallback ? " fallback" : "") << '\n';
  }
  out << "\n\\data\\\n";
  for (std::size_t k = 0; k < grams_.size(); ++k) out << "ngram " << (k + 1) << '=' << grams_[k].size() << '\n';
  for (std::size_t k = 0; k < grams_.size(); ++k) {
    out << "\n\\" << (k + 1) << "-grams:\n";
    std::vector<std::pair<std::vector<std::string_view>, const Entry*>> rows;
    rows.reserve(grams_[k].size());
    for (const auto& [key, entry] : grams_[k]) {
      std::vector<std::string_view> words;
      for (char32_t id : key) words.emplace_back(vocab_[id]);
      rows.emplace_back(std::move(words), &entry);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [words, entry] : rows) {
      out << format_double(entry->log10_prob) << '\t';
      for (std::size_t i = 0; i < words.size(); ++i) out << (i ? " " : "") << words[i];
      if (entry->has_backoff) out << '\t' << format_double(entry->log10_backoff);
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

KnModel KnModel::read_arpa(std::istream& in) {
  KnModel m;
  m.intern(std::string(kUnk));
  m.intern(std::string(kBos));
  m.intern(std::string(kEos));
  std::vector<std::size_t> declared;
  std::map<std::size_t, Discounts> discounts;
  std::string line;
  std::size_t lineno = 0;
  enum class Section { Preamble, Data, Grams, End } section = Section::Preamble;
  std::size_t current = 0;

  auto fields_of = [](const std::string& s) {
    std::vector<std::string> f;
    std::istringstream ss(s);
    for (std::string w; ss >> w;) f.push_back(w);
    return f;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (section == Section::Preamble) {
      if (line == "\\data\\") {
        section = Section::Data;
      } else if (line.rfind("# ", 0) == 0) {
        const auto f = fields_of(line.substr(2));
        for (const auto& field : f)
          if (field.rfind("level=", 0) == 0) m.level_ = parse_lm_level(field.substr(6));
        if (f.size() >= 5 && f[0] == "discounts") {
          Discounts d;
          d.d1 = parse_double(f[2], lineno);
          d.d2 = parse_double(f[3], lineno);
          d.d3 = parse_double(f[4], lineno);
          d.fallback = f.size() > 5 && f[5] == "fallback";
          discounts[std::stoul(f[1])] = d;
        }
      }
      continue;
    }
    if (line.empty()) continue;
    if (line == "\\end\\") {
      section = Section::End;
      break;
    }
    if (line.front() == '\\') {
      std::size_t n = 0;
      const auto res = std::from_chars(line.data() + 1, line.data() + line.size(), n);
      if (res.ec != std::errc() || std::string_view(res.ptr) != "-grams:" || n < 1 || n > declared.size())
        fail(ErrorCode::Parse, "ARPA line " + std::to_string(lineno) + ": bad section header '" + line + "'");
      current = n;
      section = Section::Grams;
      continue;
    }
    if (section == Section::Data) {
      std::size_t n = 0, count = 0;
      if (std::sscanf(line.c_str(), "ngram %zu=%zu", &n, &count) != 2 || n != declared.size() + 1)
        fail(ErrorCode::Parse, "ARPA line " + std::to_string(lineno) + ": bad count line '" + line + "'");
      declared.push_back(count);
      m.grams_.emplace_back();
      continue;
    }
    const auto f = fields_of(line);
    if (f.size() != current + 1 && f.size() != current + 2)
      fail(ErrorCode::Parse, "ARPA line " + std::to_string(lineno) + ": expected " + std::to_string(current) +
                                 " symbols");
    Entry entry;
    entry.log10_prob = parse_double(f[0], lineno);
    if (f.size() == current + 2) {
      entry.has_backoff = true;
      entry.log10_backoff = parse_double(f.back(), lineno);
    }
    std::u32string key;
    for (std::size_t i = 1; i <= current; ++i) {
      if (current > 1 && !m.ids_.count(f[i]))
        fail(ErrorCode::Parse, "ARPA line " + std::to_string(lineno) + ": symbol '" + f[i] + "' missing from unigrams");
      key.push_back(static_cast<char32_t>(m.intern(f[i])));
    }
    if (!m.grams_[current - 1].emplace(std::move(key), entry).second)
      fail(ErrorCode::Parse, "ARPA line " + std::to_string(lineno) + ": duplicate n-gram");
  }
  if (section != Section::End) fail(ErrorCode::Parse, "ARPA file ends before \\end\\");
  if (declared.empty()) fail(ErrorCode::Parse, "ARPA file declares no n-gram orders");
  for (std::size_t k = 0; k < declared.size(); ++k)
    if (declared[k] != m.grams_[k].size())
      fail(ErrorCode::Parse, "ARPA section " + std::to_string(k + 1) + " declares " + std::to_string(declared[k]) +
                                 " n-grams but holds " + std::to_string(m.grams_[k].size()));
  m.order_ = declared.size();
  m.discounts_.resize(m.order_);
  for (const auto& [n, d] : discounts)
    if (n >= 1 && n <= m.order_) m.discounts_[n - 1] = d;
  return m;
}

// --- scoring -------------------------------------------------------------------

SentenceScore score_sentence(const KnModel& model, const TokenLine& line) {
  SentenceScore score;
  std::vector<std::uint32_t> history{kBosId};
  const TokenLine symbols = model.symbols(line);
  for (const auto& s : symbols) {
    const bool known = !is_special(s) && model.in_vocab(s);
    const std::uint32_t w = known ? model.id(s) : kUnkId;
    if (!known) ++score.oov;
    score.log10_prob += model.log10_prob(history, w);
    history.push_back(w);
  }
  score.log10_prob += model.log10_prob(history, kEosId);
  score.events = symbols.size() + 1;
  return score;
}

double log_prob(const KnModel& model, const TokenLine& line) { return score_sentence(model, line).log10_prob; }

PerplexityReport perplexity(const KnModel& model, const std::vector<TokenLine>& corpus, unsigned threads) {
  if (corpus.empty()) fail(ErrorCode::Size, "perplexity needs at least one line");
  const auto scores = parallel_map(corpus, threads, [&](const TokenLine& line) { return score_sentence(model, line); });
  PerplexityReport report;
  report.sentences = corpus.size();
  for (const auto& s : scores) {
    report.log10_prob += s.log10_prob;
    report.events += s.events;
    report.oov += s.oov;
  }
  report.perplexity = std::pow(10.0, -report.log10_prob / static_cast<double>(report.events));
  return report;
}

// --- language distance -----------------------------------------------------------

namespace {

struct HeldOut {
  std::vector<TokenLine> train;
  std::vector<TokenLine> eval;
};

HeldOut split_held_out(const std::vector<std::string>& corpus, std::uint64_t seed, const std::string& tag) {
  if (corpus.size() < 2)
    fail(ErrorCode::Size, "corpus " + tag + " has " + std::to_string(corpus.size()) +
                              " lines; language distance needs at least 2 to hold some out");
  const std::size_t eval_n = std::max<std::size_t>(1, corpus.size() / 10);
  const auto perm = seeded_permutation(corpus.size(), seed);
  HeldOut out;
  for (std::size_t k = 0; k < perm.size(); ++k)
    (k < eval_n ? out.eval : out.train).push_back(split_tokens(corpus[perm[k]]));
  return out;
}

}  // namespace

DistanceReport language_distance(const std::vector<std::string>& corpus_a, const std::vector<std::string>& corpus_b,
                                 const DistanceOptions& options) {
  const HeldOut a = split_held_out(corpus_a, options.seed, options.lang_a);
  const HeldOut b = split_held_out(corpus_b, options.seed, options.lang_b);
  KnOptions kn;
  kn.order = options.order;
  kn.level = options.level;
  const KnModel lm_a = KnModel::train(a.train, kn);
  const KnModel lm_b = KnModel::train(b.train, kn);
  DistanceReport report;
  report.lang_a = options.lang_a;
  report.lang_b = options.lang_b;
  report.ppl_ab = perplexity(lm_a, b.eval, options.threads).perplexity;
  report.ppl_ba = perplexity(lm_b, a.eval, options.threads).perplexity;
  report.distance = 0.5 * (report.ppl_ab + report.ppl_ba);
  return report;
}

}  // namespace simcomb
