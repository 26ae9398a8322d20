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

#include "simcomb/simcomb.h"

#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "simcomb/bpe.hpp"
#include "simcomb/combine.hpp"
#include "simcomb/error.hpp"
#include "simcomb/lm.hpp"
#include "simcomb/metrics.hpp"
#include "simcomb/parallel.hpp"
#include "simcomb/textkit.hpp"
#include "simcomb/version.hpp"

struct simcomb_text_struct {
  std::string data;
};

struct simcomb_truecaser_struct {
  simcomb::TruecaseModel model;
};

struct simcomb_corpus_struct {
  simcomb::ParallelCorpus corpus;
};

struct simcomb_bpe_struct {
  simcomb::MergeTable table;
};

struct simcomb_lm_struct {
  simcomb::KnModel model;
};

namespace {

thread_local std::string g_last_error;
thread_local std::size_t g_last_error_line = 0;

struct NullPointer : std::exception {};

// An Error raised while processing one line of a batch.
struct LineError : simcomb::Error {
  LineError(const simcomb::Error& e, std::size_t line)
      : simcomb::Error(e.code(), "line " + std::to_string(line) + ": " + e.what()), line(line) {}
  std::size_t line;
};

int to_status(simcomb::ErrorCode code) {
  using simcomb::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return SIMCOMB_ERROR_INVALID_ARGUMENT;
    case ErrorCode::Decode: return SIMCOMB_ERROR_DECODE;
    case ErrorCode::Alignment: return SIMCOMB_ERROR_ALIGNMENT;
    case ErrorCode::Size: return SIMCOMB_ERROR_SIZE;
    case ErrorCode::Config: return SIMCOMB_ERROR_CONFIG;
    case ErrorCode::Parse: return SIMCOMB_ERROR_PARSE;
    case ErrorCode::Io: return SIMCOMB_ERROR_IO;
    case ErrorCode::Malformed: return SIMCOMB_ERROR_MALFORMED;
    case ErrorCode::Incomplete: return SIMCOMB_ERROR_INCOMPLETE;
    case ErrorCode::Undefined: return SIMCOMB_ERROR_UNDEFINED;
  }
  return SIMCOMB_ERROR_UNKNOWN;
}

template <typename Fn>
int guard(Fn&& fn) noexcept {
  g_last_error.clear();
  g_last_error_line = 0;
  try {
    const int rc = fn();
    return rc;
  } catch (const LineError& e) {
    g_last_error = e.what();
    g_last_error_line = e.line;
    return to_status(e.code());
  } catch (const simcomb::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const NullPointer&) {
    g_last_error = "null pointer argument";
    return SIMCOMB_ERROR_NULL_POINTER;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SIMCOMB_ERROR_UNKNOWN;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SIMCOMB_ERROR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown exception";
    return SIMCOMB_ERROR_UNKNOWN;
  }
}

template <typename T>
void require(const T* p) {
  if (p == nullptr) throw NullPointer();
}

std::string_view view(const char* data, std::size_t len) {
  if (data == nullptr && len > 0) throw NullPointer();
  return data == nullptr ? std::string_view{} : std::string_view(data, len);
}

std::vector<std::string> split_lines(const char* data, std::size_t len) {
  const std::string_view text = view(data, len);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    pos = nl + 1;
  }
  return lines;
}

std::vector<simcomb::TokenLine> token_lines(const std::vector<std::string>& lines, bool lowercase = false) {
  std::vector<simcomb::TokenLine> out;
  out.reserve(lines.size());
  for (const auto& l : lines) {
    auto t = simcomb::split_tokens(l);
    out.push_back(lowercase ? simcomb::lowercase_tokens(t) : std::move(t));
  }
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::size_t total = 0;
  for (const auto& l : lines) total += l.size() + 1;
  std::string out;
  out.reserve(total);
  for (const auto& l : lines) {
    out += l;
    out.push_back('\n');
  }
  return out;
}

simcomb_text_t make_text(std::string data) { return new simcomb_text_struct{std::move(data)}; }

// Applies fn to every line in parallel, tagging failures with their line.
template <typename Fn>
int map_lines(const char* data, std::size_t len, unsigned threads, simcomb_text_t* out, Fn&& fn) {
  require(out);
  const auto lines = split_lines(data, len);
  std::vector<std::string> result(lines.size());
  simcomb::parallel_ranges(lines.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        result[i] = fn(lines[i]);
      } catch (const simcomb::Error& e) {
        throw LineError(e, i + 1);
      }
    }
  });
  *out = make_text(join_lines(result));
  return SIMCOMB_OK;
}

std::ifstream open_in(const char* path) {
  require(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) simcomb::fail(simcomb::ErrorCode::Io, std::string("cannot open '") + path + "' for reading");
  return in;
}

template <typename Writer>
void write_file(const char* path, Writer&& writer) {
  require(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) simcomb::fail(simcomb::ErrorCode::Io, std::string("cannot open '") + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) simcomb::fail(simcomb::ErrorCode::Io, std::string("write to '") + path + "' failed");
}

simcomb::PipelineConfig pipeline_config(const simcomb_pipeline_config* cfg) {
  simcomb::PipelineConfig c;
  if (cfg != nullptr) {
    c.min_len = cfg->min_len;
    c.max_len = cfg->max_len;
    c.max_ratio = cfg->max_ratio;
    c.rng_seed = cfg->seed;
    c.dev_size = cfg->dev_size;
    c.test_size = cfg->test_size;
  }
  c.validate();
  return c;
}

simcomb::LmLevel lm_level(int level) {
  if (level == SIMCOMB_LM_WORD) return simcomb::LmLevel::Word;
  if (level == SIMCOMB_LM_CHAR) return simcomb::LmLevel::Char;
  simcomb::fail(simcomb::ErrorCode::Config, "unknown LM level " + std::to_string(level));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    std::string_view item = s.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    pos = comma + 1;
  }
  return out;
}

simcomb::CombinerConfig combiner_config(const simcomb_combine_config* cfg) {
  simcomb::CombinerConfig c;
  if (cfg == nullptr) return c;
  if (cfg->strategy != nullptr) c.strategy = simcomb::parse_strategy(cfg->strategy);
  if (cfg->weights != nullptr) {
    for (const auto& item : split_list(cfg->weights)) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0)
        simcomb::fail(simcomb::ErrorCode::Config, "weight '" + item + "' is not of the form system=weight");
      const std::string value = item.substr(eq + 1);
      double w = 0.0;
      const auto res = std::from_chars(value.data(), value.data() + value.size(), w);
      if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        simcomb::fail(simcomb::ErrorCode::Config, "bad weight '" + value + "' for '" + item.substr(0, eq) + "'");
      if (!c.back_system_weights.emplace(item.substr(0, eq), w).second)
        simcomb::fail(simcomb::ErrorCode::Config, "weight for '" + item.substr(0, eq) + "' given twice");
    }
  }
  if (cfg->priority != nullptr) c.system_priority = split_list(cfg->priority);
  c.geometric = cfg->geometric != 0;
  if (cfg->bleu_order != 0) c.bleu_order = cfg->bleu_order;
  c.threads = cfg->threads == 0 ? 1 : cfg->threads;
  return c;
}

std::vector<simcomb::CandidateSet> candidate_sets(const char* source, std::size_t source_len, const char* candidates,
                                                  std::size_t cand_len) {
  std::istringstream cin(std::string(view(candidates, cand_len)));
  return simcomb::build_candidate_sets(split_lines(source, source_len), simcomb::parse_candidates(cin));
}

std::vector<simcomb::BackTranslationRecord> back_records(const char* backs, std::size_t backs_len) {
  std::istringstream bin(std::string(view(backs, backs_len)));
  return simcomb::parse_back_translations(bin);
}

}  // namespace

extern "C" {

const char* simcomb_error_name(int code) {
  switch (code) {
    case SIMCOMB_OK: return "SIMCOMB_OK";
    case SIMCOMB_ERROR_INVALID_ARGUMENT: return "SIMCOMB_ERROR_INVALID_ARGUMENT";
    case SIMCOMB_ERROR_NULL_POINTER: return "SIMCOMB_ERROR_NULL_POINTER";
    case SIMCOMB_ERROR_DECODE: return "SIMCOMB_ERROR_DECODE";
    case SIMCOMB_ERROR_ALIGNMENT: return "SIMCOMB_ERROR_ALIGNMENT";
    case SIMCOMB_ERROR_SIZE: return "SIMCOMB_ERROR_SIZE";
    case SIMCOMB_ERROR_CONFIG: return "SIMCOMB_ERROR_CONFIG";
    case SIMCOMB_ERROR_PARSE: return "SIMCOMB_ERROR_PARSE";
    case SIMCOMB_ERROR_IO: return "SIMCOMB_ERROR_IO";
    case SIMCOMB_ERROR_MALFORMED: return "SIMCOMB_ERROR_MALFORMED";
    case SIMCOMB_ERROR_INCOMPLETE: return "SIMCOMB_ERROR_INCOMPLETE";
    case SIMCOMB_ERROR_UNDEFINED: return "SIMCOMB_ERROR_UNDEFINED";
    case SIMCOMB_ERROR_INSUFFICIENT_BUFFER: return "SIMCOMB_ERROR_INSUFFICIENT_BUFFER";
    case SIMCOMB_ERROR_UNKNOWN: return "SIMCOMB_ERROR_UNKNOWN";
    default: return "SIMCOMB_ERROR_UNRECOGNIZED";
  }
}

const char* simcomb_last_error_message(void) { return g_last_error.c_str(); }
size_t simcomb_last_error_line(void) { return g_last_error_line; }
const char* simcomb_version(void) { return simcomb::kVersion; }
const char* simcomb_build_id(void) { return simcomb::kBuildId; }

int simcomb_text_view(simcomb_text_t text, const char** data, size_t* len) {
  return guard([&] {
    require(text);
    require(data);
    require(len);
    *data = text->data.data();
    *len = text->data.size();
    return SIMCOMB_OK;
  });
}

int simcomb_text_destroy(simcomb_text_t text) {
  delete text;
  return SIMCOMB_OK;
}

int simcomb_normalize(const char* lines, size_t len, unsigned threads, simcomb_text_t* out) {
  return guard([&] { return map_lines(lines, len, threads, out, [](const std::string& l) { return simcomb::normalize(l); }); });
}

int simcomb_tokenize(const char* lines, size_t len, unsigned threads, simcomb_text_t* out) {
  return guard([&] {
    return map_lines(lines, len, threads, out,
                     [](const std::string& l) { return simcomb::join_tokens(simcomb::tokenize(l)); });
  });
}

int simcomb_detokenize(const char* lines, size_t len, unsigned threads, simcomb_text_t* out) {
  return guard([&] {
    return map_lines(lines, len, threads, out,
                     [](const std::string& l) { return simcomb::detokenize(simcomb::split_tokens(l)); });
  });
}

int simcomb_detruecase(const char* lines, size_t len, unsigned threads, simcomb_text_t* out) {
  return guard([&] {
    return map_lines(lines, len, threads, out, [](const std::string& l) {
      return simcomb::join_tokens(simcomb::detruecase(simcomb::split_tokens(l)));
    });
  });
}

int simcomb_truecaser_train(const char* lines, size_t len, unsigned threads, simcomb_truecaser_t* out) {
  return guard([&] {
    require(out);
    auto model = simcomb::TruecaseModel::train(token_lines(split_lines(lines, len)), threads);
    *out = new simcomb_truecaser_struct{std::move(model)};
    return SIMCOMB_OK;
  });
}

int simcomb_truecaser_load(const char* path, simcomb_truecaser_t* out) {
  return guard([&] {
    require(out);
    auto in = open_in(path);
    *out = new simcomb_truecaser_struct{simcomb::TruecaseModel::read(in)};
    return SIMCOMB_OK;
  });
}

int simcomb_truecaser_save(simcomb_truecaser_t model, const char* path) {
  return guard([&] {
    require(model);
    write_file(path, [&](std::ostream& o) { model->model.write(o); });
    return SIMCOMB_OK;
  });
}

int simcomb_truecaser_size(simcomb_truecaser_t model, size_t* size) {
  return guard([&] {
    require(model);
    require(size);
    *size = model->model.size();
    return SIMCOMB_OK;
  });
}

int simcomb_truecaser_apply(simcomb_truecaser_t model, const char* lines, size_t len, unsigned threads,
                            simcomb_text_t* out) {
  return guard([&] {
    require(model);
    return map_lines(lines, len, threads, out, [&](const std::string& l) {
      return simcomb::join_tokens(simcomb::truecase(model->model, simcomb::split_tokens(l)));
    });
  });
}

int simcomb_truecaser_destroy(simcomb_truecaser_t model) {
  delete model;
  return SIMCOMB_OK;
}

void simcomb_pipeline_config_init(simcomb_pipeline_config* cfg) {
  if (cfg == nullptr) return;
  const simcomb::PipelineConfig d;
  cfg->min_len = d.min_len;
  cfg->max_len = d.max_len;
  cfg->max_ratio = d.max_ratio;
  cfg->seed = d.rng_seed;
  cfg->dev_size = d.dev_size;
  cfg->test_size = d.test_size;
}

int simcomb_corpus_create(const char* src, size_t src_len, const char* tgt, size_t tgt_len, simcomb_corpus_t* out) {
  return guard([&] {
    require(out);
    simcomb::ParallelCorpus c;
    c.src = split_lines(src, src_len);
    c.tgt = split_lines(tgt, tgt_len);
    c.check_aligned();
    *out = new simcomb_corpus_struct{std::move(c)};
    return SIMCOMB_OK;
  });
}

int simcomb_corpus_size(simcomb_corpus_t corpus, size_t* size) {
  return guard([&] {
    require(corpus);
    require(size);
    *size = corpus->corpus.size();
    return SIMCOMB_OK;
  });
}

int simcomb_corpus_side(simcomb_corpus_t corpus, int side, simcomb_text_t* out) {
  return guard([&] {
    require(corpus);
    require(out);
    if (side != SIMCOMB_SIDE_SRC && side != SIMCOMB_SIDE_TGT)
      simcomb::fail(simcomb::ErrorCode::InvalidArgument, "side must be 0 (source) or 1 (target)");
    *out = make_text(join_lines(side == SIMCOMB_SIDE_SRC ? corpus->corpus.src : corpus->corpus.tgt));
    return SIMCOMB_OK;
  });
}

int simcomb_corpus_clean(simcomb_corpus_t corpus, const simcomb_pipeline_config* cfg, simcomb_corpus_t* out,
                         simcomb_clean_report* report) {
  return guard([&] {
    require(corpus);
    require(out);
    auto result = simcomb::clean_parallel(corpus->corpus, pipeline_config(cfg));
    if (report != nullptr)
      *report = {result.report.kept, result.report.too_short, result.report.too_long, result.report.ratio};
    *out = new simcomb_corpus_struct{std::move(result.corpus)};
    return SIMCOMB_OK;
  });
}

int simcomb_corpus_dedup(simcomb_corpus_t corpus, const char* patterns, simcomb_corpus_t* out,
                         simcomb_dedup_report* report) {
  return guard([&] {
    require(corpus);
    require(out);
    const auto filter =
        patterns == nullptr ? simcomb::MetadataFilter{} : simcomb::MetadataFilter::from_pattern_text(patterns);
    auto result = simcomb::dedup_and_strip_meta(corpus->corpus, filter);
    if (report != nullptr) *report = {result.report.kept, result.report.duplicates, result.report.metadata};
    *out = new simcomb_corpus_struct{std::move(result.corpus)};
    return SIMCOMB_OK;
  });
}

int simcomb_corpus_split(simcomb_corpus_t corpus, const simcomb_pipeline_config* cfg, simcomb_corpus_t* dev,
                         simcomb_corpus_t* test, simcomb_corpus_t* rest) {
  return guard([&] {
    require(corpus);
    require(dev);
    require(test);
    require(rest);
    auto result = simcomb::split_dev_test(corpus->corpus, pipeline_config(cfg));
    auto d = std::make_unique<simcomb_corpus_struct>(simcomb_corpus_struct{std::move(result.dev)});
    auto t = std::make_unique<simcomb_corpus_struct>(simcomb_corpus_struct{std::move(result.test)});
    auto r = std::make_unique<simcomb_corpus_struct>(simcomb_corpus_struct{std::move(result.rest)});
    *dev = d.release();
    *test = t.release();
    *rest = r.release();
    return SIMCOMB_OK;
  });
}

int simcomb_corpus_copied(const char* mono, size_t len, simcomb_corpus_t* out) {
  return guard([&] {
    require(out);
    *out = new simcomb_corpus_struct{simcomb::make_copied_corpus(split_lines(mono, len))};
    return SIMCOMB_OK;
  });
}

int simcomb_corpus_pseudo_parallel(const char* mono_tgt, size_t tgt_len, const char* translated_src, size_t src_len,
                                   simcomb_corpus_t* out) {
  return guard([&] {
    require(out);
    *out = new simcomb_corpus_struct{
        simcomb::make_pseudo_parallel(split_lines(mono_tgt, tgt_len), split_lines(translated_src, src_len))};
    return SIMCOMB_OK;
  });
}

int simcomb_corpus_destroy(simcomb_corpus_t corpus) {
  delete corpus;
  return SIMCOMB_OK;
}

int simcomb_bpe_learn(const char* lines, size_t len, size_t num_merges, unsigned threads, simcomb_bpe_t* out) {
  return guard([&] {
    require(out);
    auto table = simcomb::learn_bpe(token_lines(split_lines(lines, len)), num_merges, threads);
    *out = new simcomb_bpe_struct{std::move(table)};
    return SIMCOMB_OK;
  });
}

int simcomb_bpe_load(const char* path, simcomb_bpe_t* out) {
  return guard([&] {
    require(out);
    auto in = open_in(path);
    *out = new simcomb_bpe_struct{simcomb::MergeTable::read(in)};
    return SIMCOMB_OK;
  });
}

int simcomb_bpe_save(simcomb_bpe_t codes, const char* path) {
  return guard([&] {
    require(codes);
    write_file(path, [&](std::ostream& o) { codes->table.write(o); });
    return SIMCOMB_OK;
  });
}

int simcomb_bpe_size(simcomb_bpe_t codes, size_t* size) {
  return guard([&] {
    require(codes);
    require(size);
    *size = codes->table.size();
    return SIMCOMB_OK;
  });
}

int simcomb_bpe_apply(simcomb_bpe_t codes, const char* lines, size_t len, unsigned threads, simcomb_text_t* out) {
  return guard([&] {
    require(codes);
    require(out);
    const auto input = split_lines(lines, len);
    std::vector<std::string> result(input.size());
    simcomb::parallel_ranges(input.size(), threads, [&](std::size_t begin, std::size_t end) {
      simcomb::SegmentCache cache;
      for (std::size_t i = begin; i < end; ++i)
        result[i] = simcomb::join_tokens(simcomb::apply_bpe(codes->table, simcomb::split_tokens(input[i]), &cache));
    });
    *out = make_text(join_lines(result));
    return SIMCOMB_OK;
  });
}

int simcomb_bpe_undo(const char* lines, size_t len, unsigned threads, simcomb_text_t* out) {
  return guard([&] {
    return map_lines(lines, len, threads, out,
                     [](const std::string& l) { return simcomb::join_tokens(simcomb::undo_bpe(simcomb::split_tokens(l))); });
  });
}

int simcomb_bpe_destroy(simcomb_bpe_t codes) {
  delete codes;
  return SIMCOMB_OK;
}

int simcomb_corpus_bleu(const char* hyps, size_t hyps_len, const char* refs, size_t refs_len, size_t order,
                        int lowercase, unsigned threads, simcomb_bleu_result* out) {
  return guard([&] {
    require(out);
    if (order < 1 || order > SIMCOMB_MAX_BLEU_ORDER)
      simcomb::fail(simcomb::ErrorCode::InvalidArgument,
                    "BLEU order must be in 1.." + std::to_string(SIMCOMB_MAX_BLEU_ORDER));
    const auto h = token_lines(split_lines(hyps, hyps_len), lowercase != 0);
    const auto r = token_lines(split_lines(refs, refs_len), lowercase != 0);
    const auto score = simcomb::corpus_bleu(h, r, order, threads);
    simcomb_bleu_result res{};
    res.value = score.value;
    res.brevity_penalty = score.brevity_penalty;
    for (std::size_t k = 0; k < order; ++k) res.precisions[k] = score.precisions[k];
    res.order = order;
    res.hyp_len = score.hyp_len;
    res.ref_len = score.ref_len;
    res.empty_hypotheses = score.empty_hypotheses ? 1 : 0;
    *out = res;
    return SIMCOMB_OK;
  });
}

int simcomb_sentence_bleu(const char* hyps, size_t hyps_len, const char* refs, size_t refs_len, size_t order,
                          int lowercase, unsigned threads, double* scores, size_t* count) {
  return guard([&] {
    require(count);
    if (order < 1) simcomb::fail(simcomb::ErrorCode::InvalidArgument, "BLEU order must be >= 1");
    const auto h = token_lines(split_lines(hyps, hyps_len), lowercase != 0);
    const auto r = token_lines(split_lines(refs, refs_len), lowercase != 0);
    if (h.size() != r.size())
      simcomb::fail(simcomb::ErrorCode::Alignment, "sentence BLEU needs aligned input: " + std::to_string(h.size()) +
                                                       " hypotheses vs " + std::to_string(r.size()) + " references");
    if (scores == nullptr || *count < h.size()) {
      *count = h.size();
      g_last_error = "output buffer needs " + std::to_string(h.size()) + " entries";
      return static_cast<int>(SIMCOMB_ERROR_INSUFFICIENT_BUFFER);
    }
    simcomb::parallel_ranges(h.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) scores[i] = simcomb::sentence_bleu(h[i], r[i], order);
    });
    *count = h.size();
    return static_cast<int>(SIMCOMB_OK);
  });
}

int simcomb_pearson(const double* xs, const double* ys, size_t n, double* r) {
  return guard([&] {
    require(r);
    if (n > 0) {
      require(xs);
      require(ys);
    }
    *r = simcomb::pearson(std::span<const double>(xs, n), std::span<const double>(ys, n));
    return SIMCOMB_OK;
  });
}

void simcomb_lm_options_init(simcomb_lm_options* opts) {
  if (opts == nullptr) return;
  const simcomb::KnOptions d;
  opts->order = d.order;
  opts->level = d.level == simcomb::LmLevel::Char ? SIMCOMB_LM_CHAR : SIMCOMB_LM_WORD;
  opts->unk_floor = d.unk_floor;
}

int simcomb_lm_train(const char* lines, size_t len, const simcomb_lm_options* opts, simcomb_lm_t* out) {
  return guard([&] {
    require(out);
    simcomb::KnOptions o;
    if (opts != nullptr) {
      o.order = opts->order;
      o.level = lm_level(opts->level);
      o.unk_floor = opts->unk_floor;
    }
    *out = new simcomb_lm_struct{simcomb::KnModel::train(token_lines(split_lines(lines, len)), o)};
    return SIMCOMB_OK;
  });
}

int simcomb_lm_load(const char* path, simcomb_lm_t* out) {
  return guard([&] {
    require(out);
    auto in = open_in(path);
    *out = new simcomb_lm_struct{simcomb::KnModel::read_arpa(in)};
    return SIMCOMB_OK;
  });
}

int simcomb_lm_save(simcomb_lm_t lm, const char* path) {
  return guard([&] {
    require(lm);
    write_file(path, [&](std::ostream& o) { lm->model.write_arpa(o); });
    return SIMCOMB_OK;
  });
}

int simcomb_lm_order(simcomb_lm_t lm, size_t* order) {
  return guard([&] {
    require(lm);
    require(order);
    *order = lm->model.order();
    return SIMCOMB_OK;
  });
}

int simcomb_lm_perplexity(simcomb_lm_t lm, const char* lines, size_t len, unsigned threads, simcomb_ppl_report* out) {
  return guard([&] {
    require(lm);
    require(out);
    const auto rep = simcomb::perplexity(lm->model, token_lines(split_lines(lines, len)), threads);
    *out = {rep.perplexity, rep.log10_prob, rep.events, rep.oov, rep.sentences};
    return SIMCOMB_OK;
  });
}

int simcomb_lm_warnings(simcomb_lm_t lm, simcomb_text_t* out) {
  return guard([&] {
    require(lm);
    require(out);
    *out = make_text(join_lines(lm->model.warnings()));
    return SIMCOMB_OK;
  });
}

int simcomb_lm_destroy(simcomb_lm_t lm) {
  delete lm;
  return SIMCOMB_OK;
}

void simcomb_distance_options_init(simcomb_distance_options* opts) {
  if (opts == nullptr) return;
  const simcomb::DistanceOptions d;
  opts->order = d.order;
  opts->level = d.level == simcomb::LmLevel::Char ? SIMCOMB_LM_CHAR : SIMCOMB_LM_WORD;
  opts->seed = d.seed;
  opts->threads = d.threads;
}

int simcomb_language_distance(const char* corpus_a, size_t a_len, const char* corpus_b, size_t b_len,
                              const simcomb_distance_options* opts, simcomb_distance_report* out) {
  return guard([&] {
    require(out);
    simcomb::DistanceOptions o;
    if (opts != nullptr) {
      o.order = opts->order;
      o.level = lm_level(opts->level);
      o.seed = opts->seed;
      o.threads = opts->threads == 0 ? 1 : opts->threads;
    }
    const auto rep = simcomb::language_distance(split_lines(corpus_a, a_len), split_lines(corpus_b, b_len), o);
    *out = {rep.ppl_ab, rep.ppl_ba, rep.distance};
    return SIMCOMB_OK;
  });
}

void simcomb_combine_config_init(simcomb_combine_config* cfg) {
  if (cfg == nullptr) return;
  cfg->strategy = "bt";
  cfg->weights = nullptr;
  cfg->priority = nullptr;
  cfg->geometric = 0;
  cfg->bleu_order = 4;
  cfg->threads = 1;
}

int simcomb_combine(const char* source, size_t source_len, const char* candidates, size_t cand_len,
                    const char* backs, size_t backs_len, const simcomb_combine_config* cfg,
                    simcomb_text_t* selections, simcomb_text_t* summary) {
  return guard([&] {
    require(selections);
    const auto config = combiner_config(cfg);
    const auto sets = candidate_sets(source, source_len, candidates, cand_len);
    std::vector<simcomb::BackTranslationRecord> bts;
    if (config.strategy == simcomb::Strategy::BackTranslation) bts = back_records(backs, backs_len);
    const auto result = simcomb::run_combination(sets, bts, config);
    std::ostringstream sel;
    simcomb::write_selections(sel, result.selections);
    auto sel_text = std::make_unique<simcomb_text_struct>(simcomb_text_struct{sel.str()});
    if (summary != nullptr) {
      std::ostringstream sum;
      simcomb::write_summary(sum, result, config.strategy);
      *summary = make_text(sum.str());
    }
    *selections = sel_text.release();
    return SIMCOMB_OK;
  });
}

int simcomb_bt_correlation(const char* source, size_t source_len, const char* refs, size_t refs_len,
                           const char* candidates, size_t cand_len, const char* backs, size_t backs_len,
                           size_t bleu_order, double* r, size_t* pairs) {
  return guard([&] {
    require(r);
    const auto sets = candidate_sets(source, source_len, candidates, cand_len);
    const auto qp = simcomb::quality_pairs(sets, split_lines(refs, refs_len), back_records(backs, backs_len),
                                           bleu_order == 0 ? 4 : bleu_order);
    std::vector<double> q, b;
    q.reserve(qp.size());
    b.reserve(qp.size());
    for (const auto& p : qp) {
      q.push_back(p.quality);
      b.push_back(p.bt_quality);
    }
    if (pairs != nullptr) *pairs = qp.size();
    *r = simcomb::bt_correlation(q, b);
    return SIMCOMB_OK;
  });
}

}  // extern "C"
