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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simcomb/textkit.hpp"

namespace simcomb {

/// Suffix marking the last character of a word while learning and in merge
/// files ("a b</w>").
inline constexpr std::string_view kEndOfWord = "</w>";
/// Suffix on every non-final unit of a segmented word ("aa@@ b").
inline constexpr std::string_view kContinuation = "@@";

/// Segmented text; undo_bpe restores the TokenLine it came from.
using SubwordLine = std::vector<std::string>;

/// Ordered merge rules. Rank is the position in the table.
class MergeTable {
 public:
  MergeTable() = default;

  /// Throws Error(InvalidArgument) on a duplicate pair or a symbol that is
  /// empty or contains whitespace.
  void add(std::string left, std::string right);

  std::size_t size() const noexcept { return merges_.size(); }
  bool empty() const noexcept { return merges_.empty(); }
  const std::vector<std::pair<std::string, std::string>>& merges() const noexcept { return merges_; }

  std::optional<std::size_t> rank(std::string_view left, std::string_view right) const;

  /// The first k merges.
  MergeTable prefix(std::size_t k) const;

  /// `#version: simcomb-bpe 1` header, then `left right` per line.
  static MergeTable read(std::istream& in);
  void write(std::ostream& out) const;

  friend bool operator==(const MergeTable& a, const MergeTable& b) { return a.merges_ == b.merges_; }

 private:
  std::vector<std::pair<std::string, std::string>> merges_;
  std::unordered_map<std::string, std::size_t> ranks_;
};

/// Word-type frequencies; the input to the greedy learner.
using WordCounts = std::map<std::string, std::size_t>;

WordCounts count_words(const std::vector<TokenLine>& corpus, unsigned threads = 1);

/// Greedy BPE over word types: repeatedly merges the most frequent adjacent
/// pair (weighted by type count), ties broken by byte order of (left, right),
/// stopping after num_merges or when no pair occurs at least twice.
MergeTable learn_bpe(const WordCounts& counts, std::size_t num_merges);

/// Throws Error(Config) on an empty corpus.
MergeTable learn_bpe(const std::vector<TokenLine>& corpus, std::size_t num_merges, unsigned threads = 1);

/// Units of one word before markers are attached: the last unit carries
/// kEndOfWord. Merges the lowest-rank adjacent pair (leftmost on ties) until
/// none applies.
std::vector<std::string> segment_word(const MergeTable& table, std::string_view word);

/// Per-worker memo of word segmentations.
using SegmentCache = std::unordered_map<std::string, std::vector<std::string>>;

SubwordLine apply_bpe(const MergeTable& table, const TokenLine& tokens, SegmentCache* cache = nullptr);

/// Throws Error(Malformed) if the line ends in a continuation unit.
TokenLine undo_bpe(const SubwordLine& units);

}  // namespace simcomb
