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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "simcomb/textkit.hpp"

namespace simcomb {

inline constexpr std::string_view kUnk = "<unk>";
inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
/// Stands in for whitespace in character-level models.
inline constexpr std::string_view kSpaceSymbol = "▁";

enum class LmLevel { Word, Char };

const char* lm_level_name(LmLevel level) noexcept;
/// "word" or "char"; anything else throws Error(Config).
LmLevel parse_lm_level(std::string_view name);

struct KnOptions {
  std::size_t order = 5;
  LmLevel level = LmLevel::Word;
  /// Symbols seen fewer times than this map to <unk>. 1 keeps everything.
  std::size_t unk_floor = 1;
};

/// Modified Kneser-Ney discounts for counts 1, 2 and 3+ at one order.
struct Discounts {
  double d1 = 0.5;
  double d2 = 0.5;
  double d3 = 0.5;
  bool fallback = false;

  double operator()(std::size_t count) const noexcept { return count == 1 ? d1 : count == 2 ? d2 : d3; }
};

/// Interpolated modified Kneser-Ney n-gram model, stored in backoff form:
/// each seen n-gram keeps its interpolated log10 probability, each seen
/// context its log10 backoff weight.
class KnModel {
 public:
  static KnModel train(const std::vector<TokenLine>& corpus, const KnOptions& options);

  /// Standard ARPA text. Comment lines before `\data\` carry the build id,
  /// level and discounts; they are optional on input.
  static KnModel read_arpa(std::istream& in);
  void write_arpa(std::ostream& out) const;

  std::size_t order() const noexcept { return order_; }
  LmLevel level() const noexcept { return level_; }
  /// Index 0 is <unk>, 1 is <s>, 2 is </s>.
  const std::vector<std::string>& vocab() const noexcept { return vocab_; }
  std::uint32_t id(std::string_view symbol) const;
  bool in_vocab(std::string_view symbol) const;
  /// Per order, index 0 for unigrams.
  const std::vector<Discounts>& discounts() const noexcept { return discounts_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  std::size_t ngram_count(std::size_t n) const;

  /// log10 P(word | history) with ARPA backoff; only the last order-1
  /// history symbols are used. Unknown symbols score as <unk>.
  double log10_prob(std::span<const std::uint32_t> history, std::uint32_t word) const;
  double log10_prob(const std::vector<std::string>& history, std::string_view word) const;

  /// Model symbols for one line: tokens for word models, code points (with
  /// whitespace as kSpaceSymbol) for character models.
  TokenLine symbols(const TokenLine& line) const;

 private:
  struct Entry {
    double log10_prob = 0.0;
    double log10_backoff = 0.0;
    bool has_backoff = false;
  };

  std::uint32_t intern(const std::string& symbol);

  std::size_t order_ = 0;
  LmLevel level_ = LmLevel::Word;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  // grams_[n - 1] holds the n-grams, keyed by their id sequence.
  std::vector<std::unordered_map<std::u32string, Entry>> grams_;
  std::vector<Discounts> discounts_;
  std::vector<std::string> warnings_;

  friend class KnTrainer;
};

/// Code points of the line's tokens joined by single spaces, spaces rendered
/// as kSpaceSymbol.
TokenLine char_symbols(std::string_view line);

struct SentenceScore {
  double log10_prob = 0.0;
  std::size_t events = 0;  // symbols + the end-of-sentence transition
  std::size_t oov = 0;
};

SentenceScore score_sentence(const KnModel& model, const TokenLine& line);

/// Includes the end-of-sentence transition.
double log_prob(const KnModel& model, const TokenLine& line);

struct PerplexityReport {
  double perplexity = 0.0;
  double log10_prob = 0.0;
  std::size_t events = 0;
  std::size_t oov = 0;
  std::size_t sentences = 0;
};

/// 10^(-sum log10 P / events). Throws Error(Size) on an empty corpus.
PerplexityReport perplexity(const KnModel& model, const std::vector<TokenLine>& corpus, unsigned threads = 1);

struct DistanceOptions {
  std::size_t order = 7;
  LmLevel level = LmLevel::Char;
  std::uint64_t seed = 42;
  std::string lang_a = "A";
  std::string lang_b = "B";
  unsigned threads = 1;
};

struct DistanceReport {
  std::string lang_a;
  std::string lang_b;
  double ppl_ab = 0.0;  // LM(A) on held-out B
  double ppl_ba = 0.0;  // LM(B) on held-out A
  double distance = 0.0;
};

/// Each corpus is split 90/10 into train/eval with the same seeded
/// permutation; distance is the mean of the two cross perplexities.
/// Throws Error(Size) when a corpus has fewer than two lines.
DistanceReport language_distance(const std::vector<std::string>& corpus_a, const std::vector<std::string>& corpus_b,
                                 const DistanceOptions& options);

}  // namespace simcomb
