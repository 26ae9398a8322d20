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
#include <string>
#include <string_view>
#include <vector>

#include "simcomb/textkit.hpp"

namespace simcomb {

struct Candidate {
  std::string system;
  TokenLine text;
};

/// All systems' outputs for one source sentence.
struct CandidateSet {
  std::size_t sent_id = 0;
  TokenLine source;
  std::vector<Candidate> candidates;
};

/// A back-translation of `fwd_system`'s output into the source language,
/// produced by `back_system`.
struct BackTranslationRecord {
  std::size_t sent_id = 0;
  std::string fwd_system;
  std::string back_system;
  TokenLine text;
};

enum class Strategy { BackTranslation, Mbr, Ratio };

const char* strategy_name(Strategy s) noexcept;
/// "bt", "mbr" or "ratio"; anything else throws Error(Config).
Strategy parse_strategy(std::string_view name);

struct CombinerConfig {
  Strategy strategy = Strategy::BackTranslation;
  /// Back system -> weight. Empty means equal weights over the back systems
  /// present in the input. Weights are normalized to sum to one.
  std::map<std::string, double> back_system_weights;
  /// Best first. Empty means order of first appearance in the candidates.
  std::vector<std::string> system_priority;
  /// Aggregate back-translation scores by weighted geometric mean instead of
  /// the weighted arithmetic mean.
  bool geometric = false;
  std::size_t bleu_order = 4;
  unsigned threads = 1;
};

struct SelectionResult {
  std::size_t sent_id = 0;
  std::string chosen_system;
  TokenLine chosen_text;
  std::map<std::string, double> scores;
  Strategy strategy = Strategy::BackTranslation;
};

/// Weights normalized to sum to one. Throws Error(Config) on a negative
/// weight or a zero sum.
std::map<std::string, double> normalized_weights(const std::map<std::string, double>& weights);

/// score(s) = sum_b w_b * sentence_bleu(back(s, b), source). Ties go to the
/// earlier system in cfg.system_priority. `bts` may hold records for other
/// sentences; only matching sent_ids are used. Throws Error(Incomplete)
/// naming (sent_id, fwd, back) for a missing record.
SelectionResult bt_select(const CandidateSet& cs, const std::vector<BackTranslationRecord>& bts,
                          const CombinerConfig& cfg);

/// score(h) = mean over h' != h of sentence_bleu(h, h'); a lone candidate
/// scores 1.
SelectionResult mbr_select(const CandidateSet& cs, const CombinerConfig& cfg);

/// Picks the candidate whose token count is closest to the source's. The
/// reported score is the length ratio. Throws Error(Undefined) on an empty
/// source.
SelectionResult ratio_select(const CandidateSet& cs, const CombinerConfig& cfg);

/// Pearson r between forward quality and round-trip quality.
double bt_correlation(const std::vector<double>& quality, const std::vector<double>& bt_quality);

// --- file-level driver -------------------------------------------------------

/// Parses `sent_id<TAB>system_id<TAB>text` lines. Throws Error(Parse) with
/// the line number.
std::vector<std::pair<std::size_t, Candidate>> parse_candidates(std::istream& in);
/// Parses `sent_id<TAB>fwd<TAB>back<TAB>text` lines.
std::vector<BackTranslationRecord> parse_back_translations(std::istream& in);

/// Groups candidates by sentence, attaching source line sent_id (0-based).
/// Throws Error(Incomplete) naming any gap in the sent_id range.
std::vector<CandidateSet> build_candidate_sets(const std::vector<std::string>& source_lines,
                                               const std::vector<std::pair<std::size_t, Candidate>>& candidates);

struct CombinationOutput {
  std::vector<SelectionResult> selections;
  /// System -> number of sentences it won, for every system seen.
  std::map<std::string, std::size_t> summary;
};

/// Runs the configured strategy on every set. Back-translations are only
/// consulted by the bt strategy.
CombinationOutput run_combination(const std::vector<CandidateSet>& sets,
                                  const std::vector<BackTranslationRecord>& bts, const CombinerConfig& cfg);

/// `sent_id<TAB>chosen_system<TAB>text` per selection.
void write_selections(std::ostream& out, const std::vector<SelectionResult>& selections);
void write_summary(std::ostream& out, const CombinationOutput& output, Strategy strategy);

/// Per (sentence, fwd, back) record: forward quality sentence_bleu(cand, ref)
/// and round-trip quality sentence_bleu(back, source).
struct QualityPair {
  std::size_t sent_id = 0;
  std::string fwd_system;
  std::string back_system;
  double quality = 0.0;
  double bt_quality = 0.0;
};

std::vector<QualityPair> quality_pairs(const std::vector<CandidateSet>& sets, const std::vector<std::string>& refs,
                                       const std::vector<BackTranslationRecord>& bts, std::size_t bleu_order = 4);

}  // namespace simcomb
