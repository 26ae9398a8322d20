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
#include <map>
#include <regex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace simcomb {

/// One sentence as ordered, non-empty, whitespace-free tokens.
using TokenLine = std::vector<std::string>;

/// Two sentence-aligned sides. Lines are kept as text; token counts are taken
/// by whitespace splitting where an operation needs them.
struct ParallelCorpus {
  std::vector<std::string> src;
  std::vector<std::string> tgt;
  std::string name;

  std::size_t size() const noexcept { return src.size(); }
  /// Throws Error(Alignment) with both side lengths.
  void check_aligned() const;
};

struct PipelineConfig {
  std::size_t min_len = 7;
  std::size_t max_len = 100;
  double max_ratio = 9.0;
  std::uint64_t rng_seed = 42;
  std::size_t dev_size = 0;
  std::size_t test_size = 0;

  void validate() const;
};

/// Splits on whitespace; never produces empty tokens.
TokenLine split_tokens(std::string_view line);
std::string join_tokens(const TokenLine& tokens);

// --- normalization and tokenization -----------------------------------------

/// NFC, then the fixed typographic table (see README), then whitespace
/// collapse and trim. Throws Error(Decode) on ill-formed UTF-8.
std::string normalize(std::string_view line);

/// Whitespace split, then leading/trailing punctuation peeled off each chunk.
/// A run of one repeated punctuation character ("...", "!!") stays a single
/// token; punctuation inside a chunk ("3.14", "e-mail") is never split.
TokenLine tokenize(std::string_view line);

/// Joins with spaces, dropping the space between a word and a following
/// closing-punctuation token and between an opening-punctuation token and a
/// following word.
std::string detokenize(const TokenLine& tokens);

// --- truecasing --------------------------------------------------------------

struct TruecaseEntry {
  std::string best;
  std::size_t best_count = 0;
  std::size_t total = 0;
};

/// Evidence counts gathered from a corpus. Merging is associative and
/// commutative, so chunks may be counted independently.
class TruecaseCounts {
 public:
  void add(const TokenLine& tokens);
  void merge(const TruecaseCounts& other);

 private:
  friend class TruecaseModel;
  struct Forms {
    std::map<std::string, std::size_t> inner;
    std::map<std::string, std::size_t> initial;
  };
  std::unordered_map<std::string, Forms> forms_;
};

class TruecaseModel {
 public:
  TruecaseModel() = default;

  /// Throws Error(Config) on an empty corpus.
  static TruecaseModel train(const std::vector<TokenLine>& corpus, unsigned threads = 1);
  static TruecaseModel from_counts(const TruecaseCounts& counts);

  /// Reads `casedForm<TAB>count` lines; a leading "# ..." banner is skipped.
  static TruecaseModel read(std::istream& in);
  void write(std::ostream& out) const;

  const TruecaseEntry* find(std::string_view lowered) const;
  std::size_t size() const noexcept { return best_.size(); }

 private:
  void add_evidence(const std::string& cased, std::size_t count);
  void finalize();

  // lowered form -> cased form -> count, restricted to the evidence that
  // decides the winner (non-initial when any exists).
  std::map<std::string, std::map<std::string, std::size_t>> evidence_;
  std::unordered_map<std::string, TruecaseEntry> best_;
};

TokenLine truecase(const TruecaseModel& model, const TokenLine& tokens);
TokenLine detruecase(const TokenLine& tokens);

// --- corpus-level filters ----------------------------------------------------

struct CleanReport {
  std::size_t kept = 0;
  std::size_t too_short = 0;
  std::size_t too_long = 0;
  std::size_t ratio = 0;

  std::size_t dropped() const noexcept { return too_short + too_long + ratio; }
  void write(std::ostream& out) const;
};

struct CleanResult {
  ParallelCorpus corpus;
  CleanReport report;
};

enum class CleanVerdict { Kept, TooShort, TooLong, Ratio };

/// Drop reason for a pair of token counts. Length violations on either side
/// take precedence over the ratio test, short before long.
CleanVerdict clean_verdict(std::size_t src_len, std::size_t tgt_len, const PipelineConfig& cfg);

CleanResult clean_parallel(const ParallelCorpus& corpus, const PipelineConfig& cfg);

/// Decides whether a line carries metadata rather than a sentence. The empty
/// (or all-whitespace) line always matches. Without custom patterns a line
/// matches when, trimmed, it begins with '<' and ends with '>'. Custom
/// patterns are ECMAScript regexes that must match the whole line.
class MetadataFilter {
 public:
  MetadataFilter() = default;
  explicit MetadataFilter(const std::vector<std::string>& patterns);

  /// One pattern per line; blank lines and lines starting with '#' ignored.
  static MetadataFilter from_pattern_text(std::string_view text);

  bool matches(std::string_view line) const;

 private:
  std::vector<std::regex> patterns_;
  bool custom_ = false;
};

struct DedupReport {
  std::size_t kept = 0;
  std::size_t duplicates = 0;
  std::size_t metadata = 0;

  void write(std::ostream& out) const;
};

struct DedupResult {
  ParallelCorpus corpus;
  DedupReport report;
};

DedupResult dedup_and_strip_meta(const ParallelCorpus& corpus, const MetadataFilter& filter = {});

struct SplitResult {
  ParallelCorpus dev;
  ParallelCorpus test;
  ParallelCorpus rest;
};

/// dev and test come from a SplitMix64-seeded Fisher-Yates permutation (in
/// permuted order); rest keeps original order.
SplitResult split_dev_test(const ParallelCorpus& corpus, const PipelineConfig& cfg);

ParallelCorpus make_copied_corpus(const std::vector<std::string>& mono);
ParallelCorpus make_pseudo_parallel(const std::vector<std::string>& mono_tgt,
                                    const std::vector<std::string>& translated_src);

}  // namespace simcomb
