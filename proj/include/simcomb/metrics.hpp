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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "simcomb/textkit.hpp"

namespace simcomb {

using Ngram = std::vector<std::string>;
using NgramCounts = std::map<Ngram, std::size_t>;

/// All contiguous windows of length n with multiplicities. n < 1 throws
/// Error(InvalidArgument).
NgramCounts ngram_counts(const TokenLine& tokens, std::size_t n);

/// Clipped match statistics for one or more sentence pairs. Additive.
struct BleuStats {
  std::vector<std::size_t> match;  // match[k] is for order k + 1
  std::vector<std::size_t> total;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  explicit BleuStats(std::size_t order = 4) : match(order, 0), total(order, 0) {}

  std::size_t order() const noexcept { return match.size(); }
  BleuStats& operator+=(const BleuStats& other);
};

/// Single-reference statistics for one sentence pair.
BleuStats bleu_stats(const TokenLine& hyp, const TokenLine& ref, std::size_t order = 4);

struct BleuScore {
  double value = 0.0;
  double brevity_penalty = 0.0;
  std::vector<double> precisions;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  /// Set when every hypothesis was empty; value is 0 and BP is reported as 0.
  bool empty_hypotheses = false;
};

double brevity_penalty(std::size_t hyp_len, std::size_t ref_len);

/// Unsmoothed BLEU from accumulated statistics.
BleuScore bleu_from_stats(const BleuStats& stats);

/// Throws Error(Alignment) on differing lengths, Error(Size) on empty input.
BleuScore corpus_bleu(const std::vector<TokenLine>& hyps, const std::vector<TokenLine>& refs,
                      std::size_t order = 4, unsigned threads = 1);

/// Add-one smoothing on numerator and denominator for orders >= 2; order 1
/// unsmoothed. An empty hypothesis scores 0.
double sentence_bleu(const TokenLine& hyp, const TokenLine& ref, std::size_t order = 4);

/// Pearson product-moment correlation. Throws Error(Alignment) on differing
/// lengths, Error(Size) for fewer than two points and Error(Undefined) when
/// either side has zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

TokenLine lowercase_tokens(const TokenLine& tokens);

}  // namespace simcomb
