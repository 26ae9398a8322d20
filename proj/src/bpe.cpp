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

#include "simcomb/bpe.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include "simcomb/error.hpp"
#include "simcomb/parallel.hpp"
#include "simcomb/unicode.hpp"

namespace simcomb {

namespace {

constexpr std::string_view kMergeHeader = "#version: simcomb-bpe 1";

bool valid_symbol(std::string_view s) {
  return !s.empty() && s.find_first_of(" \t\r\n") == std::string_view::npos;
}

std::string& scratch_key(std::string_view left, std::string_view right) {
  thread_local std::string key;
  key.assign(left);
  key.push_back(' ');
  key.append(right);
  return key;
}

std::vector<std::string> initial_symbols(std::string_view word) {
  auto chars = unicode::split_chars(word);
  if (!chars.empty()) chars.back().append(kEndOfWord);
  return chars;
}

}  // namespace

// --- MergeTable --------------------------------------------------------------

void MergeTable::add(std::string left, std::string right) {
  if (!valid_symbol(left) || !valid_symbol(right))
    fail(ErrorCode::InvalidArgument, "merge symbols must be non-empty and whitespace-free");
  std::string key = left + ' ' + right;
  if (ranks_.count(key)) fail(ErrorCode::InvalidArgument, "duplicate merge '" + key + "'");
  ranks_.emplace(std::move(key), merges_.size());
  merges_.emplace_back(std::move(left), std::move(right));
}

std::optional<std::size_t> MergeTable::rank(std::string_view left, std::string_view right) const {
  const auto it = ranks_.find(scratch_key(left, right));
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

MergeTable MergeTable::prefix(std::size_t k) const {
  MergeTable out;
  for (std::size_t i = 0; i < std::min(k, merges_.size()); ++i) out.add(merges_[i].first, merges_[i].second);
  return out;
}

MergeTable MergeTable::read(std::istream& in) {
  MergeTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.rfind("#version:", 0) == 0) continue;
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos || line.find(' ', sp + 1) != std::string::npos)
      fail(ErrorCode::Parse, "merge table line " + std::to_string(lineno) + ": expected 'left right'");
    try {
      table.add(line.substr(0, sp), line.substr(sp + 1));
    } catch (const Error& e) {
      fail(ErrorCode::Parse, "merge table line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return table;
}

void MergeTable::write(std::ostream& out) const {
  out << kMergeHeader << '\n';
  for (const auto& [l, r] : merges_) out << l << ' ' << r << '\n';
}

// --- learning ----------------------------------------------------------------

WordCounts count_words(const std::vector<TokenLine>& corpus, unsigned threads) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, corpus.size()));
  std::vector<std::unordered_map<std::string, std::size_t>> partial(workers);
  const std::size_t chunk = (corpus.size() + workers - 1) / workers;
  parallel_ranges(workers, threads, [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      const std::size_t end = std::min(corpus.size(), (w + 1) * chunk);
      for (std::size_t i = w * chunk; i < end; ++i)
        for (const auto& tok : corpus[i])
          if (!tok.empty()) ++partial[w][tok];
    }
  });
  WordCounts counts;
  for (const auto& p : partial)
    for (const auto& [word, n] : p) counts[word] += n;
  return counts;
}

namespace {

using PairKey = std::uint64_t;

PairKey pair_key(std::uint32_t l, std::uint32_t r) { return (static_cast<PairKey>(l) << 32) | r; }
std::uint32_t key_left(PairKey k) { return static_cast<std::uint32_t>(k >> 32); }
std::uint32_t key_right(PairKey k) { return static_cast<std::uint32_t>(k & 0xffffffffu); }

class Learner {
 public:
  explicit Learner(const WordCounts& counts) {
    words_.reserve(counts.size());
    for (const auto& [word, n] : counts) {
      Word w;
      w.count = static_cast<std::int64_t>(n);
      for (const auto& s : initial_symbols(word)) w.syms.push_back(intern(s));
      words_.push_back(std::move(w));
    }
    visited_.assign(words_.size(), 0);
    for (std::uint32_t i = 0; i < words_.size(); ++i) {
      std::unordered_map<PairKey, std::int64_t> delta;
      add_pairs(words_[i], +1, delta, i);
      apply(delta);
    }
  }

  MergeTable run(std::size_t num_merges) {
    MergeTable table;
    std::uint32_t step = 0;
    while (table.size() < num_merges && !queue_.empty()) {
      const Candidate best = *queue_.begin();
      if (best.freq < 2) break;
      // A pair can resurface when a later merge rebuilds an existing symbol
      // string; the earlier rank already covers it.
      if (!table.rank(symbols_[best.left], symbols_[best.right])) table.add(symbols_[best.left], symbols_[best.right]);
      merge(best.left, best.right, ++step);
    }
    return table;
  }

 private:
  struct Word {
    std::vector<std::uint32_t> syms;
    std::int64_t count = 0;
  };

  struct Candidate {
    std::int64_t freq;
    std::uint32_t left;
    std::uint32_t right;
  };

  struct CandidateOrder {
    const std::vector<std::string>* symbols;
    bool operator()(const Candidate& a, const Candidate& b) const {
      if (a.freq != b.freq) return a.freq > b.freq;
      const auto& sa = (*symbols)[a.left];
      const auto& sb = (*symbols)[b.left];
      if (sa != sb) return sa < sb;
      return (*symbols)[a.right] < (*symbols)[b.right];
    }
  };

  std::uint32_t intern(const std::string& s) {
    const auto [it, inserted] = ids_.emplace(s, static_cast<std::uint32_t>(symbols_.size()));
    if (inserted) symbols_.push_back(s);
    return it->second;
  }

  void add_pairs(const Word& w, int sign, std::unordered_map<PairKey, std::int64_t>& delta, std::uint32_t idx) {
    for (std::size_t j = 0; j + 1 < w.syms.size(); ++j) {
      const PairKey k = pair_key(w.syms[j], w.syms[j + 1]);
      delta[k] += sign * w.count;
      if (sign > 0) where_[k].push_back(idx);
    }
  }

  void apply(const std::unordered_map<PairKey, std::int64_t>& delta) {
    for (const auto& [k, d] : delta) {
      if (d == 0) continue;
      auto& f = freq_[k];
      if (f > 0) queue_.erase(Candidate{f, key_left(k), key_right(k)});
      f += d;
      if (f > 0) queue_.insert(Candidate{f, key_left(k), key_right(k)});
    }
  }

  void merge(std::uint32_t left, std::uint32_t right, std::uint32_t stamp) {
    const std::uint32_t merged = intern(symbols_[left] + symbols_[right]);
    const PairKey target = pair_key(left, right);
    // add_pairs appends to where_ during this loop.
    const std::vector<std::uint32_t> occurrences = where_[target];
    std::unordered_map<PairKey, std::int64_t> delta;
    for (std::uint32_t idx : occurrences) {
      if (visited_[idx] == stamp) continue;
      visited_[idx] = stamp;
      Word& w = words_[idx];
      bool contains = false;
      for (std::size_t j = 0; j + 1 < w.syms.size(); ++j)
        if (w.syms[j] == left && w.syms[j + 1] == right) contains = true;
      if (!contains) continue;
      add_pairs(w, -1, delta, idx);
      std::vector<std::uint32_t> next;
      next.reserve(w.syms.size());
      for (std::size_t j = 0; j < w.syms.size(); ++j) {
        if (j + 1 < w.syms.size() && w.syms[j] == left && w.syms[j + 1] == right) {
          next.push_back(merged);
          ++j;
        } else {
          next.push_back(w.syms[j]);
        }
      }
      w.syms = std::move(next);
      add_pairs(w, +1, delta, idx);
    }
    where_.erase(target);
    apply(delta);
  }

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<Word> words_;
  std::vector<std::uint32_t> visited_;
  std::unordered_map<PairKey, std::int64_t> freq_;
  std::unordered_map<PairKey, std::vector<std::uint32_t>> where_;
  std::set<Candidate, CandidateOrder> queue_{CandidateOrder{&symbols_}};
};

}  // namespace

MergeTable learn_bpe(const WordCounts& counts, std::size_t num_merges) {
  if (num_merges == 0) return {};
  return Learner(counts).run(num_merges);
}

MergeTable learn_bpe(const std::vector<TokenLine>& corpus, std::size_t num_merges, unsigned threads) {
  if (corpus.empty()) fail(ErrorCode::Config, "cannot learn BPE from an empty corpus");
  return learn_bpe(count_words(corpus, threads), num_merges);
}

// --- application -------------------------------------------------------------

std::vector<std::string> segment_word(const MergeTable& table, std::string_view word) {
  std::vector<std::string> syms = initial_symbols(word);
  if (syms.size() < 2 || table.empty()) return syms;
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  auto rank_at = [&](std::size_t j) { return table.rank(syms[j], syms[j + 1]).value_or(kNone); };
  // ranks[j] is the rank of the pair (syms[j], syms[j + 1]).
  std::vector<std::size_t> ranks(syms.size() - 1);
  for (std::size_t j = 0; j + 1 < syms.size(); ++j) ranks[j] = rank_at(j);
  while (!ranks.empty()) {
    const auto best = std::min_element(ranks.begin(), ranks.end());
    if (*best == kNone) break;
    const auto j = static_cast<std::size_t>(best - ranks.begin());
    syms[j] += syms[j + 1];
    syms.erase(syms.begin() + static_cast<std::ptrdiff_t>(j + 1));
    ranks.erase(ranks.begin() + static_cast<std::ptrdiff_t>(j));
    if (j < ranks.size()) ranks[j] = rank_at(j);
    if (j > 0) ranks[j - 1] = rank_at(j - 1);
  }
  return syms;
}

SubwordLine apply_bpe(const MergeTable& table, const TokenLine& tokens, SegmentCache* cache) {
  SubwordLine out;
  out.reserve(tokens.size() * 2);
  for (const auto& token : tokens) {
    if (token.empty()) continue;
    const std::vector<std::string>* units = nullptr;
    std::vector<std::string> local;
    if (cache) {
      auto it = cache->find(token);
      if (it == cache->end()) it = cache->emplace(token, segment_word(table, token)).first;
      units = &it->second;
    } else {
      local = segment_word(table, token);
      units = &local;
    }
    for (std::size_t j = 0; j < units->size(); ++j) {
      const std::string& u = (*units)[j];
      if (j + 1 < units->size())
        out.push_back(u + std::string(kContinuation));
      else
        out.push_back(u.substr(0, u.size() - kEndOfWord.size()));
    }
  }
  return out;
}

TokenLine undo_bpe(const SubwordLine& units) {
  TokenLine out;
  std::string current;
  bool open = false;
  for (const auto& u : units) {
    const bool continues = u.size() >= kContinuation.size() &&
                           u.compare(u.size() - kContinuation.size(), kContinuation.size(), kContinuation) == 0;
    if (continues) {
      current.append(u, 0, u.size() - kContinuation.size());
      open = true;
    } else {
      current += u;
      out.push_back(std::move(current));
      current.clear();
      open = false;
    }
  }
  if (open) fail(ErrorCode::Malformed, "dangling continuation unit at end of line");
  return out;
}

}  // namespace simcomb
