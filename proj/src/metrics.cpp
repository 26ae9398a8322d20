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

#include "simcomb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "simcomb/error.hpp"
#include "simcomb/parallel.hpp"
#include "simcomb/unicode.hpp"

namespace simcomb {

NgramCounts ngram_counts(const TokenLine& tokens, std::size_t n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n-gram order must be >= 1");
  NgramCounts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                   tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  if (other.order() != order()) fail(ErrorCode::InvalidArgument, "cannot add BLEU stats of different orders");
  for (std::size_t k = 0; k < order(); ++k) {
    match[k] += other.match[k];
    total[k] += other.total[k];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  return *this;
}

namespace {

// Per-order counts keyed by the space-joined n-gram; tokens carry no
// whitespace so the key is unambiguous.
std::vector<std::unordered_map<std::string, std::size_t>> counts_by_order(const TokenLine& tokens,
                                                                          std::size_t order) {
  std::vector<std::unordered_map<std::string, std::size_t>> out(order);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < order && i + k < tokens.size(); ++k) {
      if (k) key.push_back(' ');
      key += tokens[i + k];
      ++out[k][key];
    }
  }
  return out;
}

}  // namespace

BleuStats bleu_stats(const TokenLine& hyp, const TokenLine& ref, std::size_t order) {
  if (order < 1) fail(ErrorCode::InvalidArgument, "BLEU order must be >= 1");
  BleuStats stats(order);
  stats.hyp_len = hyp.size();
  stats.ref_len = ref.size();
  const auto hyp_counts = counts_by_order(hyp, order);
  const auto ref_counts = counts_by_order(ref, order);
  for (std::size_t k = 0; k < order; ++k) {
    stats.total[k] = hyp.size() > k ? hyp.size() - k : 0;
    for (const auto& [gram, n] : hyp_counts[k]) {
      const auto it = ref_counts[k].find(gram);
      if (it != ref_counts[k].end()) stats.match[k] += std::min(n, it->second);
    }
  }
  return stats;
}

double brevity_penalty(std::size_t hyp_len, std::size_t ref_len) {
  if (hyp_len == 0) return 0.0;
  if (hyp_len >= ref_len) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
}

BleuScore bleu_from_stats(const BleuStats& stats) {
  BleuScore score;
  score.hyp_len = stats.hyp_len;
  score.ref_len = stats.ref_len;
  score.precisions.assign(stats.order(), 0.0);
  score.empty_hypotheses = stats.hyp_len == 0;
  score.brevity_penalty = brevity_penalty(stats.hyp_len, stats.ref_len);
  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t k = 0; k < stats.order(); ++k) {
    if (stats.total[k] == 0 || stats.match[k] == 0) {
      zero = true;
      continue;
    }
    score.precisions[k] = static_cast<double>(stats.match[k]) / static_cast<double>(stats.total[k]);
    log_sum += std::log(score.precisions[k]);
  }
  score.value = zero ? 0.0 : score.brevity_penalty * std::exp(log_sum / static_cast<double>(stats.order()));
  return score;
}

BleuScore corpus_bleu(const std::vector<TokenLine>& hyps, const std::vector<TokenLine>& refs, std::size_t order,
                      unsigned threads) {
  if (hyps.size() != refs.size())
    fail(ErrorCode::Alignment, "BLEU needs aligned input: " + std::to_string(hyps.size()) + " hypotheses vs " +
                                   std::to_string(refs.size()) + " references");
  if (hyps.empty()) fail(ErrorCode::Size, "BLEU needs at least one sentence");
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, hyps.size()));
  std::vector<BleuStats> partial(workers, BleuStats(order));
  const std::size_t chunk = (hyps.size() + workers - 1) / workers;
  parallel_ranges(workers, threads, [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      const std::size_t end = std::min(hyps.size(), (w + 1) * chunk);
      for (std::size_t i = w * chunk; i < end; ++i) partial[w] += bleu_stats(hyps[i], refs[i], order);
    }
  });
  // Integer sums: the result does not depend on how sentences were grouped.
  BleuStats total(order);
  for (const auto& p : partial) total += p;
  return bleu_from_stats(total);
}

double sentence_bleu(const TokenLine& hyp, const TokenLine& ref, std::size_t order) {
  if (hyp.empty()) return 0.0;
  const BleuStats stats = bleu_stats(hyp, ref, order);
  if (stats.match[0] == 0) return 0.0;
  double log_sum = std::log(static_cast<double>(stats.match[0]) / static_cast<double>(stats.total[0]));
  for (std::size_t k = 1; k < order; ++k)
    log_sum += std::log((static_cast<double>(stats.match[k]) + 1.0) / (static_cast<double>(stats.total[k]) + 1.0));
  return brevity_penalty(stats.hyp_len, stats.ref_len) * std::exp(log_sum / static_cast<double>(order));
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    fail(ErrorCode::Alignment, "correlation needs aligned input: " + std::to_string(xs.size()) + " vs " +
                                   std::to_string(ys.size()) + " values");
  if (xs.size() < 2) fail(ErrorCode::Size, "correlation needs at least two points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) fail(ErrorCode::Undefined, "correlation undefined: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

TokenLine lowercase_tokens(const TokenLine& tokens) {
  TokenLine out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(unicode::to_lower(t));
  return out;
}

}  // namespace simcomb
