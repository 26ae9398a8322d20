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

#include "simcomb/combine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <tuple>

#include "simcomb/error.hpp"
#include "simcomb/metrics.hpp"
#include "simcomb/parallel.hpp"

namespace simcomb {

const char* strategy_name(Strategy s) noexcept {
  switch (s) {
    case Strategy::BackTranslation: return "bt";
    case Strategy::Mbr: return "mbr";
    case Strategy::Ratio: return "ratio";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "bt") return Strategy::BackTranslation;
  if (name == "mbr") return Strategy::Mbr;
  if (name == "ratio") return Strategy::Ratio;
  fail(ErrorCode::Config, "unknown strategy '" + std::string(name) + "' (expected bt, mbr or ratio)");
}

std::map<std::string, double> normalized_weights(const std::map<std::string, double>& weights) {
  double sum = 0.0;
  for (const auto& [tag, w] : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail(ErrorCode::Config, "weight for '" + tag + "' must be finite and >= 0");
    sum += w;
  }
  if (!(sum > 0.0)) fail(ErrorCode::Config, "back-system weights sum to zero");
  std::map<std::string, double> out;
  for (const auto& [tag, w] : weights) out[tag] = w / sum;
  return out;
}

namespace {

// Candidate indices, best priority first.
std::vector<std::size_t> priority_order(const CandidateSet& cs, const CombinerConfig& cfg) {
  std::vector<std::size_t> order(cs.candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (cfg.system_priority.empty()) return order;
  std::vector<std::size_t> rank(cs.candidates.size());
  for (std::size_t i = 0; i < cs.candidates.size(); ++i) {
    const auto& sys = cs.candidates[i].system;
    const auto it = std::find(cfg.system_priority.begin(), cfg.system_priority.end(), sys);
    if (it == cfg.system_priority.end())
      fail(ErrorCode::Config, "system '" + sys + "' is missing from the priority list");
    rank[i] = static_cast<std::size_t>(it - cfg.system_priority.begin());
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
  return order;
}

void check_candidates(const CandidateSet& cs) {
  if (cs.candidates.empty()) fail(ErrorCode::InvalidArgument, "sentence " + std::to_string(cs.sent_id) + " has no candidates");
}

// Scores within this distance are ties.
constexpr double kTieEpsilon = 1e-12;

// Highest score wins; ties keep the earlier system in priority order.
SelectionResult pick_max(const CandidateSet& cs, const CombinerConfig& cfg, const std::vector<double>& scores,
                         Strategy strategy) {
  const auto order = priority_order(cs, cfg);
  std::size_t best = order.front();
  for (std::size_t i : order)
    if (scores[i] > scores[best] + kTieEpsilon) best = i;
  SelectionResult r;
  r.sent_id = cs.sent_id;
  r.strategy = strategy;
  r.chosen_system = cs.candidates[best].system;
  r.chosen_text = cs.candidates[best].text;
  for (std::size_t i = 0; i < scores.size(); ++i) r.scores[cs.candidates[i].system] = scores[i];
  return r;
}

std::map<std::string, double> default_weights(const std::vector<BackTranslationRecord>& bts) {
  std::map<std::string, double> w;
  for (const auto& r : bts) w[r.back_system] = 1.0;
  return w;
}

}  // namespace

SelectionResult bt_select(const CandidateSet& cs, const std::vector<BackTranslationRecord>& bts,
                          const CombinerConfig& cfg) {
  check_candidates(cs);
  const auto weights = normalized_weights(cfg.back_system_weights.empty() ? default_weights(bts)
                                                                          : cfg.back_system_weights);
  std::map<std::pair<std::string, std::string>, const BackTranslationRecord*> index;
  for (const auto& r : bts)
    if (r.sent_id == cs.sent_id) index[{r.fwd_system, r.back_system}] = &r;
  std::vector<double> scores(cs.candidates.size(), 0.0);
  for (std::size_t i = 0; i < cs.candidates.size(); ++i) {
    const auto& fwd = cs.candidates[i].system;
    double arith = 0.0;
    double log_geo = 0.0;
    bool geo_zero = false;
    for (const auto& [back, w] : weights) {
      const auto it = index.find({fwd, back});
      if (it == index.end())
        fail(ErrorCode::Incomplete, "missing back-translation for (sent_id=" + std::to_string(cs.sent_id) +
                                        ", fwd=" + fwd + ", back=" + back + ")");
      const double s = sentence_bleu(it->second->text, cs.source, cfg.bleu_order);
      arith += w * s;
      if (w > 0.0) {
        if (s <= 0.0)
          geo_zero = true;
        else
          log_geo += w * std::log(s);
      }
    }
    scores[i] = cfg.geometric ? (geo_zero ? 0.0 : std::exp(log_geo)) : arith;
  }
  return pick_max(cs, cfg, scores, Strategy::BackTranslation);
}

SelectionResult mbr_select(const CandidateSet& cs, const CombinerConfig& cfg) {
  check_candidates(cs);
  const std::size_t k = cs.candidates.size();
  std::vector<double> scores(k, 1.0);
  if (k > 1) {
    for (std::size_t i = 0; i < k; ++i) {
      double gain = 0.0;
      for (std::size_t j = 0; j < k; ++j)
        if (j != i) gain += sentence_bleu(cs.candidates[i].text, cs.candidates[j].text, cfg.bleu_order);
      scores[i] = gain / static_cast<double>(k - 1);
    }
  }
  return pick_max(cs, cfg, scores, Strategy::Mbr);
}

SelectionResult ratio_select(const CandidateSet& cs, const CombinerConfig& cfg) {
  check_candidates(cs);
  if (cs.source.empty())
    fail(ErrorCode::Undefined, "length ratio undefined for empty source (sent_id=" + std::to_string(cs.sent_id) + ")");
  const std::size_t src_len = cs.source.size();
  // Compare |len - src_len| as integers: a shared denominator, and exact ties.
  const auto distance = [&](std::size_t i) {
    const std::size_t len = cs.candidates[i].text.size();
    return len > src_len ? len - src_len : src_len - len;
  };
  const auto order = priority_order(cs, cfg);
  std::size_t best = order.front();
  for (std::size_t i : order)
    if (distance(i) < distance(best)) best = i;
  SelectionResult r;
  r.sent_id = cs.sent_id;
  r.strategy = Strategy::Ratio;
  r.chosen_system = cs.candidates[best].system;
  r.chosen_text = cs.candidates[best].text;
  for (const auto& c : cs.candidates)
    r.scores[c.system] = static_cast<double>(c.text.size()) / static_cast<double>(src_len);
  return r;
}

double bt_correlation(const std::vector<double>& quality, const std::vector<double>& bt_quality) {
  return pearson(quality, bt_quality);
}

// --- parsing -------------------------------------------------------------------

namespace {

std::vector<std::string_view> split_fields(std::string_view line, std::size_t fields) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (out.size() + 1 < fields) {
    const auto tab = line.find('\t', pos);
    if (tab == std::string_view::npos) break;
    out.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  out.push_back(line.substr(pos));
  return out;
}

std::size_t parse_id(std::string_view s, std::size_t lineno, const char* what) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrorCode::Parse, std::string(what) + " line " + std::to_string(lineno) + ": bad sent_id '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<std::pair<std::size_t, Candidate>> parse_candidates(std::istream& in) {
  std::vector<std::pair<std::size_t, Candidate>> out;
  std::set<std::pair<std::size_t, std::string>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line, 3);
    if (f.size() != 3 || f[1].empty())
      fail(ErrorCode::Parse, "candidate line " + std::to_string(lineno) + ": expected sent_id<TAB>system<TAB>text");
    const std::size_t id = parse_id(f[0], lineno, "candidate");
    Candidate c{std::string(f[1]), split_tokens(f[2])};
    if (!seen.emplace(id, c.system).second)
      fail(ErrorCode::Parse, "candidate line " + std::to_string(lineno) + ": duplicate system '" + c.system +
                                 "' for sent_id " + std::to_string(id));
    out.emplace_back(id, std::move(c));
  }
  return out;
}

std::vector<BackTranslationRecord> parse_back_translations(std::istream& in) {
  std::vector<BackTranslationRecord> out;
  std::set<std::tuple<std::size_t, std::string, std::string>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line, 4);
    if (f.size() != 4 || f[1].empty() || f[2].empty())
      fail(ErrorCode::Parse,
           "back-translation line " + std::to_string(lineno) + ": expected sent_id<TAB>fwd<TAB>back<TAB>text");
    BackTranslationRecord r{parse_id(f[0], lineno, "back-translation"), std::string(f[1]), std::string(f[2]),
                            split_tokens(f[3])};
    if (!seen.emplace(r.sent_id, r.fwd_system, r.back_system).second)
      fail(ErrorCode::Parse, "back-translation line " + std::to_string(lineno) + ": duplicate record (" +
                                 std::to_string(r.sent_id) + ", " + r.fwd_system + ", " + r.back_system + ")");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CandidateSet> build_candidate_sets(const std::vector<std::string>& source_lines,
                                               const std::vector<std::pair<std::size_t, Candidate>>& candidates) {
  if (candidates.empty()) fail(ErrorCode::Incomplete, "no candidates given");
  std::map<std::size_t, CandidateSet> by_id;
  for (const auto& [id, c] : candidates) {
    auto& cs = by_id[id];
    cs.sent_id = id;
    cs.candidates.push_back(c);
  }
  const std::size_t first = by_id.begin()->first;
  const std::size_t last = by_id.rbegin()->first;
  if (last - first + 1 != by_id.size()) {
    std::string gaps;
    std::size_t listed = 0;
    for (std::size_t id = first; id <= last && listed < 10; ++id)
      if (!by_id.count(id)) {
        gaps += (listed++ ? ", " : "") + std::to_string(id);
      }
    fail(ErrorCode::Incomplete, "candidate sent_ids are not contiguous; missing " + gaps);
  }
  if (last >= source_lines.size())
    fail(ErrorCode::Incomplete, "no source line for sent_id " + std::to_string(last) + " (source has " +
                                    std::to_string(source_lines.size()) + " lines)");
  std::vector<CandidateSet> sets;
  sets.reserve(by_id.size());
  for (auto& [id, cs] : by_id) {
    cs.source = split_tokens(source_lines[id]);
    sets.push_back(std::move(cs));
  }
  return sets;
}

CombinationOutput run_combination(const std::vector<CandidateSet>& sets,
                                  const std::vector<BackTranslationRecord>& bts, const CombinerConfig& cfg) {
  CombinerConfig effective = cfg;
  std::map<std::size_t, std::vector<BackTranslationRecord>> bt_by_id;
  if (cfg.strategy == Strategy::BackTranslation) {
    if (effective.back_system_weights.empty()) effective.back_system_weights = default_weights(bts);
    if (effective.back_system_weights.empty()) fail(ErrorCode::Incomplete, "bt strategy needs back-translations");
    for (const auto& r : bts) bt_by_id[r.sent_id].push_back(r);
  }
  static const std::vector<BackTranslationRecord> kNone;
  CombinationOutput out;
  out.selections = parallel_map(sets, cfg.threads, [&](const CandidateSet& cs) {
    switch (effective.strategy) {
      case Strategy::BackTranslation: {
        const auto it = bt_by_id.find(cs.sent_id);
        return bt_select(cs, it == bt_by_id.end() ? kNone : it->second, effective);
      }
      case Strategy::Mbr: return mbr_select(cs, effective);
      case Strategy::Ratio: break;
    }
    return ratio_select(cs, effective);
  });
  for (const auto& cs : sets)
    for (const auto& c : cs.candidates) out.summary.emplace(c.system, 0);
  for (const auto& s : out.selections) ++out.summary[s.chosen_system];
  return out;
}

void write_selections(std::ostream& out, const std::vector<SelectionResult>& selections) {
  for (const auto& s : selections) out << s.sent_id << '\t' << s.chosen_system << '\t' << join_tokens(s.chosen_text) << '\n';
}

void write_summary(std::ostream& out, const CombinationOutput& output, Strategy strategy) {
  out << "# strategy=" << strategy_name(strategy) << " sentences=" << output.selections.size() << '\n';
  for (const auto& [sys, n] : output.summary) out << sys << '\t' << n << '\n';
}

std::vector<QualityPair> quality_pairs(const std::vector<CandidateSet>& sets, const std::vector<std::string>& refs,
                                       const std::vector<BackTranslationRecord>& bts, std::size_t bleu_order) {
  std::map<std::pair<std::size_t, std::string>, std::vector<const BackTranslationRecord*>> index;
  for (const auto& r : bts) index[{r.sent_id, r.fwd_system}].push_back(&r);
  std::vector<QualityPair> out;
  for (const auto& cs : sets) {
    if (cs.sent_id >= refs.size())
      fail(ErrorCode::Incomplete, "no reference line for sent_id " + std::to_string(cs.sent_id));
    const TokenLine ref = split_tokens(refs[cs.sent_id]);
    for (const auto& c : cs.candidates) {
      const auto it = index.find({cs.sent_id, c.system});
      if (it == index.end()) continue;
      auto records = it->second;
      std::sort(records.begin(), records.end(),
                [](const auto* a, const auto* b) { return a->back_system < b->back_system; });
      const double q = sentence_bleu(c.text, ref, bleu_order);
      for (const auto* r : records)
        out.push_back({cs.sent_id, c.system, r->back_system, q, sentence_bleu(r->text, cs.source, bleu_order)});
    }
  }
  return out;
}

}  // namespace simcomb
