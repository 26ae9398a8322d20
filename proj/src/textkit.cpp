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

#include "simcomb/textkit.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include "simcomb/error.hpp"
#include "simcomb/parallel.hpp"
#include "simcomb/rng.hpp"
#include "simcomb/unicode.hpp"
#include "simcomb/version.hpp"

namespace simcomb {

void ParallelCorpus::check_aligned() const {
  if (src.size() != tgt.size())
    fail(ErrorCode::Alignment, "misaligned corpus: " + std::to_string(src.size()) + " source lines vs " +
                                   std::to_string(tgt.size()) + " target lines");
}

void PipelineConfig::validate() const {
  if (min_len < 1 || min_len > max_len)
    fail(ErrorCode::Config, "length bounds must satisfy 1 <= min <= max (got " + std::to_string(min_len) +
                                ", " + std::to_string(max_len) + ")");
  if (!(max_ratio >= 1.0)) fail(ErrorCode::Config, "max ratio must be >= 1");
}

TokenLine split_tokens(std::string_view line) {
  TokenLine out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

std::string join_tokens(const TokenLine& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

// --- normalize ---------------------------------------------------------------

namespace {

// Typographic characters folded to ASCII. Published in README.md; changing it
// changes outputs.
const char* typographic_replacement(char32_t cp) {
  switch (cp) {
    case U'‘':  // left single quotation mark
    case U'’':  // right single quotation mark
    case U'‚':  // single low-9 quotation mark
    case U'‛':  // single high-reversed-9 quotation mark
    case U'′':  // prime
    case U'‹':  // single left-pointing angle quotation mark
    case U'›':  // single right-pointing angle quotation mark
      return "'";
    case U'“':
    case U'”':
    case U'„':
    case U'‟':
    case U'″':  // double prime
    case U'«':
    case U'»':
      return "\"";
    case U'‐':  // hyphen
    case U'‑':  // non-breaking hyphen
    case U'‒':  // figure dash
    case U'–':  // en dash
    case U'\u2014':  // em dash
    case U'―':  // horizontal bar
    case U'−':  // minus sign
      return "-";
    case U'…':
      return "...";
    default:
      return nullptr;
  }
}

}  // namespace

std::string normalize(std::string_view line) {
  unicode::validate_utf8(line);
  const std::u32string composed = unicode::decode(unicode::to_nfc(line));
  std::string out;
  out.reserve(line.size());
  bool pending_space = false;
  for (char32_t cp : composed) {
    if (unicode::is_whitespace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    if (const char* rep = typographic_replacement(cp))
      out += rep;
    else
      unicode::append_utf8(out, cp);
  }
  return out;
}

// --- tokenize / detokenize ---------------------------------------------------

namespace {

void tokenize_chunk(std::u32string_view chunk, TokenLine& out) {
  std::size_t begin = 0;
  std::size_t end = chunk.size();
  while (begin < end && unicode::is_punct_or_symbol(chunk[begin])) {
    std::size_t run = begin + 1;
    while (run < end && chunk[run] == chunk[begin]) ++run;
    out.push_back(unicode::encode(chunk.substr(begin, run - begin)));
    begin = run;
  }
  std::vector<std::string> trailing;
  while (end > begin && unicode::is_punct_or_symbol(chunk[end - 1])) {
    std::size_t run = end - 1;
    while (run > begin && chunk[run - 1] == chunk[end - 1]) --run;
    trailing.push_back(unicode::encode(chunk.substr(run, end - run)));
    end = run;
  }
  if (end > begin) out.push_back(unicode::encode(chunk.substr(begin, end - begin)));
  out.insert(out.end(), trailing.rbegin(), trailing.rend());
}

bool all_in(std::string_view token, std::string_view set) {
  return !token.empty() && token.find_first_not_of(set) == std::string_view::npos;
}

bool is_closing(std::string_view token) { return all_in(token, ".,!?:;)]}"); }
bool is_opening(std::string_view token) { return all_in(token, "([{"); }

bool is_word(std::string_view token) {
  for (char32_t cp : unicode::decode(token))
    if (!unicode::is_punct_or_symbol(cp)) return true;
  return false;
}

}  // namespace

TokenLine tokenize(std::string_view line) {
  const std::u32string text = unicode::decode(line);
  TokenLine out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && unicode::is_whitespace(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !unicode::is_whitespace(text[i])) ++i;
    if (i > start) tokenize_chunk(std::u32string_view(text).substr(start, i - start), out);
  }
  return out;
}

std::string detokenize(const TokenLine& tokens) {
  std::string out;
  std::vector<bool> word(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) word[i] = is_word(tokens[i]);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) {
      const bool glue_left =
          is_closing(tokens[i]) && (word[i - 1] || tokens[i - 1].back() != tokens[i].front());
      const bool glue_right = is_opening(tokens[i - 1]) && word[i];
      if (!glue_left && !glue_right) out.push_back(' ');
    }
    out += tokens[i];
  }
  return out;
}

// --- truecasing --------------------------------------------------------------

void TruecaseCounts::add(const TokenLine& tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto& forms = forms_[unicode::to_lower(tokens[i])];
    ++(i == 0 ? forms.initial : forms.inner)[tokens[i]];
  }
}

void TruecaseCounts::merge(const TruecaseCounts& other) {
  for (const auto& [key, f] : other.forms_) {
    auto& mine = forms_[key];
    for (const auto& [form, n] : f.inner) mine.inner[form] += n;
    for (const auto& [form, n] : f.initial) mine.initial[form] += n;
  }
}

TruecaseModel TruecaseModel::from_counts(const TruecaseCounts& counts) {
  TruecaseModel model;
  for (const auto& [key, f] : counts.forms_) {
    const auto& evidence = f.inner.empty() ? f.initial : f.inner;
    model.evidence_[key] = evidence;
  }
  model.finalize();
  return model;
}

TruecaseModel TruecaseModel::train(const std::vector<TokenLine>& corpus, unsigned threads) {
  if (corpus.empty()) fail(ErrorCode::Config, "cannot train a truecaser on an empty corpus");
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, corpus.size()));
  std::vector<TruecaseCounts> partial(workers);
  const std::size_t chunk = (corpus.size() + workers - 1) / workers;
  parallel_ranges(workers, threads, [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      const std::size_t end = std::min(corpus.size(), (w + 1) * chunk);
      for (std::size_t i = w * chunk; i < end; ++i) partial[w].add(corpus[i]);
    }
  });
  for (std::size_t w = 1; w < workers; ++w) partial[0].merge(partial[w]);
  return from_counts(partial[0]);
}

void TruecaseModel::add_evidence(const std::string& cased, std::size_t count) {
  evidence_[unicode::to_lower(cased)][cased] += count;
}

void TruecaseModel::finalize() {
  best_.clear();
  for (const auto& [key, forms] : evidence_) {
    TruecaseEntry entry;
    // std::map iterates cased forms in byte order, so the first maximum wins
    // the lexicographic tie-break.
    for (const auto& [form, n] : forms) {
      entry.total += n;
      if (n > entry.best_count) {
        entry.best_count = n;
        entry.best = form;
      }
    }
    best_.emplace(key, std::move(entry));
  }
}

TruecaseModel TruecaseModel::read(std::istream& in) {
  TruecaseModel model;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.rfind("# ", 0) == 0) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      fail(ErrorCode::Parse, "truecase model line " + std::to_string(lineno) + ": expected casedForm<TAB>count");
    const std::string form = line.substr(0, tab);
    std::size_t count = 0;
    try {
      std::size_t used = 0;
      count = std::stoull(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, "truecase model line " + std::to_string(lineno) + ": bad count");
    }
    if (count == 0) fail(ErrorCode::Parse, "truecase model line " + std::to_string(lineno) + ": zero count");
    model.add_evidence(form, count);
  }
  model.finalize();
  return model;
}

void TruecaseModel::write(std::ostream& out) const {
  out << "# " << kBuildId << " truecase\n";
  for (const auto& [key, forms] : evidence_)
    for (const auto& [form, n] : forms) out << form << '\t' << n << '\n';
}

const TruecaseEntry* TruecaseModel::find(std::string_view lowered) const {
  const auto it = best_.find(std::string(lowered));
  return it == best_.end() ? nullptr : &it->second;
}

TokenLine truecase(const TruecaseModel& model, const TokenLine& tokens) {
  TokenLine out = tokens;
  if (!out.empty())
    if (const auto* entry = model.find(unicode::to_lower(out.front()))) out.front() = entry->best;
  return out;
}

TokenLine detruecase(const TokenLine& tokens) {
  TokenLine out = tokens;
  for (auto& token : out) {
    std::u32string cps = unicode::decode(token);
    const auto it = std::find_if(cps.begin(), cps.end(), unicode::is_alpha);
    if (it == cps.end()) continue;
    *it = unicode::to_upper(*it);
    token = unicode::encode(cps);
    break;
  }
  return out;
}

// --- clean -------------------------------------------------------------------

void CleanReport::write(std::ostream& out) const {
  out << "kept\t" << kept << '\n'
      << "too_short\t" << too_short << '\n'
      << "too_long\t" << too_long << '\n'
      << "ratio\t" << ratio << '\n';
}

CleanVerdict clean_verdict(std::size_t src_len, std::size_t tgt_len, const PipelineConfig& cfg) {
  if (src_len < cfg.min_len || tgt_len < cfg.min_len) return CleanVerdict::TooShort;
  if (src_len > cfg.max_len || tgt_len > cfg.max_len) return CleanVerdict::TooLong;
  const auto longer = static_cast<double>(std::max(src_len, tgt_len));
  const auto shorter = static_cast<double>(std::min(src_len, tgt_len));
  if (longer / shorter > cfg.max_ratio) return CleanVerdict::Ratio;
  return CleanVerdict::Kept;
}

CleanResult clean_parallel(const ParallelCorpus& corpus, const PipelineConfig& cfg) {
  corpus.check_aligned();
  cfg.validate();
  CleanResult result;
  result.corpus.name = corpus.name;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto verdict = clean_verdict(split_tokens(corpus.src[i]).size(), split_tokens(corpus.tgt[i]).size(), cfg);
    switch (verdict) {
      case CleanVerdict::Kept:
        ++result.report.kept;
        result.corpus.src.push_back(corpus.src[i]);
        result.corpus.tgt.push_back(corpus.tgt[i]);
        break;
      case CleanVerdict::TooShort: ++result.report.too_short; break;
      case CleanVerdict::TooLong: ++result.report.too_long; break;
      case CleanVerdict::Ratio: ++result.report.ratio; break;
    }
  }
  return result;
}

// --- dedup / metadata ----------------------------------------------------------

MetadataFilter::MetadataFilter(const std::vector<std::string>& patterns) : custom_(true) {
  for (const auto& p : patterns) {
    try {
      patterns_.emplace_back(p, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      fail(ErrorCode::Config, "bad metadata pattern '" + p + "': " + e.what());
    }
  }
}

MetadataFilter MetadataFilter::from_pattern_text(std::string_view text) {
  std::vector<std::string> patterns;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() != '#') patterns.push_back(std::move(line));
    pos = nl + 1;
  }
  return MetadataFilter(patterns);
}

bool MetadataFilter::matches(std::string_view line) const {
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return true;
  if (!custom_) {
    const auto last = line.find_last_not_of(" \t\r");
    return line[first] == '<' && line[last] == '>';
  }
  const std::string s(line);
  return std::any_of(patterns_.begin(), patterns_.end(), [&](const std::regex& re) { return std::regex_match(s, re); });
}

void DedupReport::write(std::ostream& out) const {
  out << "kept\t" << kept << '\n' << "duplicate\t" << duplicates << '\n' << "metadata\t" << metadata << '\n';
}

DedupResult dedup_and_strip_meta(const ParallelCorpus& corpus, const MetadataFilter& filter) {
  corpus.check_aligned();
  DedupResult result;
  result.corpus.name = corpus.name;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (filter.matches(corpus.src[i]) || filter.matches(corpus.tgt[i])) {
      ++result.report.metadata;
      continue;
    }
    // Lines never contain '\n', so it is a safe pair separator.
    if (!seen.insert(corpus.src[i] + '\n' + corpus.tgt[i]).second) {
      ++result.report.duplicates;
      continue;
    }
    ++result.report.kept;
    result.corpus.src.push_back(corpus.src[i]);
    result.corpus.tgt.push_back(corpus.tgt[i]);
  }
  return result;
}

// --- split / monolingual incorporation ---------------------------------------

SplitResult split_dev_test(const ParallelCorpus& corpus, const PipelineConfig& cfg) {
  corpus.check_aligned();
  const std::size_t n = corpus.size();
  if (cfg.dev_size > n || cfg.test_size > n - cfg.dev_size)
    fail(ErrorCode::Size, "dev (" + std::to_string(cfg.dev_size) + ") + test (" + std::to_string(cfg.test_size) +
                              ") exceed corpus size " + std::to_string(n));
  const auto perm = seeded_permutation(n, cfg.rng_seed);
  SplitResult out;
  out.dev.name = corpus.name + ".dev";
  out.test.name = corpus.name + ".test";
  out.rest.name = corpus.name + ".rest";
  std::vector<bool> taken(n, false);
  for (std::size_t k = 0; k < cfg.dev_size + cfg.test_size; ++k) {
    auto& part = k < cfg.dev_size ? out.dev : out.test;
    part.src.push_back(corpus.src[perm[k]]);
    part.tgt.push_back(corpus.tgt[perm[k]]);
    taken[perm[k]] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (taken[i]) continue;
    out.rest.src.push_back(corpus.src[i]);
    out.rest.tgt.push_back(corpus.tgt[i]);
  }
  return out;
}

ParallelCorpus make_copied_corpus(const std::vector<std::string>& mono) {
  ParallelCorpus out;
  out.name = "copied";
  out.src = mono;
  out.tgt = mono;
  return out;
}

ParallelCorpus make_pseudo_parallel(const std::vector<std::string>& mono_tgt,
                                    const std::vector<std::string>& translated_src) {
  if (mono_tgt.size() != translated_src.size())
    fail(ErrorCode::Alignment, "pseudo-parallel sides differ: " + std::to_string(translated_src.size()) +
                                   " translated lines vs " + std::to_string(mono_tgt.size()) + " monolingual lines");
  ParallelCorpus out;
  out.name = "pseudo";
  out.src = translated_src;
  out.tgt = mono_tgt;
  return out;
}

}  // namespace simcomb
