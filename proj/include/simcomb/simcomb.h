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

#ifndef SIMCOMB_H_
#define SIMCOMB_H_

/*
 * C interface to the simcomb toolkit.
 *
 * Every function returns a status code: SIMCOMB_OK (0) on success, a
 * negative SIMCOMB_ERROR_* value otherwise. After a failure the calling
 * thread's last error message describes what went wrong.
 *
 * Line-oriented functions take UTF-8 text as a buffer of LF-separated lines.
 * A trailing LF is optional and a CR before an LF is dropped. Results come
 * back as simcomb_text_t handles holding LF-terminated lines.
 *
 * Handles are opaque; each *_destroy accepts NULL.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SIMCOMB_BUILDING_DLL)
#    define SIMCOMB_API __declspec(dllexport)
#  else
#    define SIMCOMB_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__)
#  define SIMCOMB_API __attribute__((visibility("default")))
#else
#  define SIMCOMB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum simcomb_error_code {
  SIMCOMB_OK = 0,
  SIMCOMB_ERROR_INVALID_ARGUMENT = -1,
  SIMCOMB_ERROR_NULL_POINTER = -2,
  SIMCOMB_ERROR_DECODE = -3,
  SIMCOMB_ERROR_ALIGNMENT = -4,
  SIMCOMB_ERROR_SIZE = -5,
  SIMCOMB_ERROR_CONFIG = -6,
  SIMCOMB_ERROR_PARSE = -7,
  SIMCOMB_ERROR_IO = -8,
  SIMCOMB_ERROR_MALFORMED = -9,
  SIMCOMB_ERROR_INCOMPLETE = -10,
  SIMCOMB_ERROR_UNDEFINED = -11,
  SIMCOMB_ERROR_INSUFFICIENT_BUFFER = -12,
  SIMCOMB_ERROR_UNKNOWN = -99
};

SIMCOMB_API const char* simcomb_error_name(int code);
/* Message for the last failure on this thread; "" if none. */
SIMCOMB_API const char* simcomb_last_error_message(void);
/* 1-based line within the failing call's input, 0 when not line-specific. */
SIMCOMB_API size_t simcomb_last_error_line(void);

SIMCOMB_API const char* simcomb_version(void);
/* Identifier stamped into written model files. */
SIMCOMB_API const char* simcomb_build_id(void);

/* ---- text results ------------------------------------------------------ */

typedef struct simcomb_text_struct* simcomb_text_t;

SIMCOMB_API int simcomb_text_view(simcomb_text_t text, const char** data, size_t* len);
SIMCOMB_API int simcomb_text_destroy(simcomb_text_t text);

/* ---- per-line text processing ------------------------------------------ */

SIMCOMB_API int simcomb_normalize(const char* lines, size_t len, unsigned threads, simcomb_text_t* out);
SIMCOMB_API int simcomb_tokenize(const char* lines, size_t len, unsigned threads, simcomb_text_t* out);
SIMCOMB_API int simcomb_detokenize(const char* lines, size_t len, unsigned threads, simcomb_text_t* out);
SIMCOMB_API int simcomb_detruecase(const char* lines, size_t len, unsigned threads, simcomb_text_t* out);

/* ---- truecasing -------------------------------------------------------- */

typedef struct simcomb_truecaser_struct* simcomb_truecaser_t;

SIMCOMB_API int simcomb_truecaser_train(const char* lines, size_t len, unsigned threads, simcomb_truecaser_t* out);
SIMCOMB_API int simcomb_truecaser_load(const char* path, simcomb_truecaser_t* out);
SIMCOMB_API int simcomb_truecaser_save(simcomb_truecaser_t model, const char* path);
SIMCOMB_API int simcomb_truecaser_size(simcomb_truecaser_t model, size_t* size);
SIMCOMB_API int simcomb_truecaser_apply(simcomb_truecaser_t model, const char* lines, size_t len, unsigned threads,
                                        simcomb_text_t* out);
SIMCOMB_API int simcomb_truecaser_destroy(simcomb_truecaser_t model);

/* ---- parallel corpora -------------------------------------------------- */

typedef struct simcomb_corpus_struct* simcomb_corpus_t;

typedef struct simcomb_pipeline_config {
  size_t min_len;
  size_t max_len;
  double max_ratio;
  uint64_t seed;
  size_t dev_size;
  size_t test_size;
} simcomb_pipeline_config;

/* Defaults: lengths 7..100, ratio 9, seed 42, no dev/test. */
SIMCOMB_API void simcomb_pipeline_config_init(simcomb_pipeline_config* cfg);

typedef struct simcomb_clean_report {
  size_t kept;
  size_t too_short;
  size_t too_long;
  size_t ratio;
} simcomb_clean_report;

typedef struct simcomb_dedup_report {
  size_t kept;
  size_t duplicates;
  size_t metadata;
} simcomb_dedup_report;

enum simcomb_side { SIMCOMB_SIDE_SRC = 0, SIMCOMB_SIDE_TGT = 1 };

SIMCOMB_API int simcomb_corpus_create(const char* src, size_t src_len, const char* tgt, size_t tgt_len,
                                      simcomb_corpus_t* out);
SIMCOMB_API int simcomb_corpus_size(simcomb_corpus_t corpus, size_t* size);
SIMCOMB_API int simcomb_corpus_side(simcomb_corpus_t corpus, int side, simcomb_text_t* out);
SIMCOMB_API int simcomb_corpus_clean(simcomb_corpus_t corpus, const simcomb_pipeline_config* cfg,
                                     simcomb_corpus_t* out, simcomb_clean_report* report);
/* patterns: NULL for the default metadata rule, else one regex per line. */
SIMCOMB_API int simcomb_corpus_dedup(simcomb_corpus_t corpus, const char* patterns, simcomb_corpus_t* out,
                                     simcomb_dedup_report* report);
SIMCOMB_API int simcomb_corpus_split(simcomb_corpus_t corpus, const simcomb_pipeline_config* cfg,
                                     simcomb_corpus_t* dev, simcomb_corpus_t* test, simcomb_corpus_t* rest);
SIMCOMB_API int simcomb_corpus_copied(const char* mono, size_t len, simcomb_corpus_t* out);
SIMCOMB_API int simcomb_corpus_pseudo_parallel(const char* mono_tgt, size_t tgt_len, const char* translated_src,
                                               size_t src_len, simcomb_corpus_t* out);
SIMCOMB_API int simcomb_corpus_destroy(simcomb_corpus_t corpus);

/* ---- byte-pair encoding ------------------------------------------------ */

typedef struct simcomb_bpe_struct* simcomb_bpe_t;

SIMCOMB_API int simcomb_bpe_learn(const char* lines, size_t len, size_t num_merges, unsigned threads,
                                  simcomb_bpe_t* out);
SIMCOMB_API int simcomb_bpe_load(const char* path, simcomb_bpe_t* out);
SIMCOMB_API int simcomb_bpe_save(simcomb_bpe_t codes, const char* path);
SIMCOMB_API int simcomb_bpe_size(simcomb_bpe_t codes, size_t* size);
SIMCOMB_API int simcomb_bpe_apply(simcomb_bpe_t codes, const char* lines, size_t len, unsigned threads,
                                  simcomb_text_t* out);
SIMCOMB_API int simcomb_bpe_undo(const char* lines, size_t len, unsigned threads, simcomb_text_t* out);
SIMCOMB_API int simcomb_bpe_destroy(simcomb_bpe_t codes);

/* ---- evaluation -------------------------------------------------------- */

#define SIMCOMB_MAX_BLEU_ORDER 9

typedef struct simcomb_bleu_result {
  double value; /* in [0, 1] */
  double brevity_penalty;
  double precisions[SIMCOMB_MAX_BLEU_ORDER];
  size_t order;
  size_t hyp_len;
  size_t ref_len;
  int empty_hypotheses;
} simcomb_bleu_result;

SIMCOMB_API int simcomb_corpus_bleu(const char* hyps, size_t hyps_len, const char* refs, size_t refs_len,
                                    size_t order, int lowercase, unsigned threads, simcomb_bleu_result* out);
/*
 * One smoothed score per line pair. Pass scores == NULL (or *count too small)
 * to learn the required count: *count is set and
 * SIMCOMB_ERROR_INSUFFICIENT_BUFFER returned.
 */
SIMCOMB_API int simcomb_sentence_bleu(const char* hyps, size_t hyps_len, const char* refs, size_t refs_len,
                                      size_t order, int lowercase, unsigned threads, double* scores, size_t* count);
SIMCOMB_API int simcomb_pearson(const double* xs, const double* ys, size_t n, double* r);

/* ---- language models --------------------------------------------------- */

typedef struct simcomb_lm_struct* simcomb_lm_t;

enum simcomb_lm_level { SIMCOMB_LM_WORD = 0, SIMCOMB_LM_CHAR = 1 };

typedef struct simcomb_lm_options {
  size_t order;
  int level;
  size_t unk_floor;
} simcomb_lm_options;

/* Defaults: order 5, word level, no <unk> floor. */
SIMCOMB_API void simcomb_lm_options_init(simcomb_lm_options* opts);

typedef struct simcomb_ppl_report {
  double perplexity;
  double log10_prob;
  size_t events;
  size_t oov;
  size_t sentences;
} simcomb_ppl_report;

SIMCOMB_API int simcomb_lm_train(const char* lines, size_t len, const simcomb_lm_options* opts, simcomb_lm_t* out);
SIMCOMB_API int simcomb_lm_load(const char* path, simcomb_lm_t* out);
SIMCOMB_API int simcomb_lm_save(simcomb_lm_t lm, const char* path);
SIMCOMB_API int simcomb_lm_order(simcomb_lm_t lm, size_t* order);
SIMCOMB_API int simcomb_lm_perplexity(simcomb_lm_t lm, const char* lines, size_t len, unsigned threads,
                                      simcomb_ppl_report* out);
/* Training warnings, one per line. */
SIMCOMB_API int simcomb_lm_warnings(simcomb_lm_t lm, simcomb_text_t* out);
SIMCOMB_API int simcomb_lm_destroy(simcomb_lm_t lm);

typedef struct simcomb_distance_options {
  size_t order;
  int level;
  uint64_t seed;
  unsigned threads;
} simcomb_distance_options;

/* Defaults: order 7, character level, seed 42, one thread. */
SIMCOMB_API void simcomb_distance_options_init(simcomb_distance_options* opts);

typedef struct simcomb_distance_report {
  double ppl_ab;
  double ppl_ba;
  double distance;
} simcomb_distance_report;

SIMCOMB_API int simcomb_language_distance(const char* corpus_a, size_t a_len, const char* corpus_b, size_t b_len,
                                          const simcomb_distance_options* opts, simcomb_distance_report* out);

/* ---- system combination ------------------------------------------------ */

typedef struct simcomb_combine_config {
  const char* strategy; /* "bt", "mbr" or "ratio"; NULL means "bt" */
  const char* weights;  /* "back=w,back=w"; NULL or "" for equal weights */
  const char* priority; /* "sys,sys" best first; NULL or "" for input order */
  int geometric;
  size_t bleu_order;
  unsigned threads;
} simcomb_combine_config;

SIMCOMB_API void simcomb_combine_config_init(simcomb_combine_config* cfg);

/*
 * candidates: sent_id<TAB>system<TAB>text lines. backs: sent_id<TAB>fwd<TAB>
 * back<TAB>text lines, may be NULL unless the strategy is "bt". selections
 * receives sent_id<TAB>system<TAB>text lines, summary a per-system count
 * block.
 */
SIMCOMB_API int simcomb_combine(const char* source, size_t source_len, const char* candidates, size_t cand_len,
                                const char* backs, size_t backs_len, const simcomb_combine_config* cfg,
                                simcomb_text_t* selections, simcomb_text_t* summary);

/*
 * Pearson r between sentence_bleu(candidate, reference) and
 * sentence_bleu(back-translation, source) over every record pair.
 */
SIMCOMB_API int simcomb_bt_correlation(const char* source, size_t source_len, const char* refs, size_t refs_len,
                                       const char* candidates, size_t cand_len, const char* backs, size_t backs_len,
                                       size_t bleu_order, double* r, size_t* pairs);

#ifdef __cplusplus
}
#endif

#endif /* SIMCOMB_H_ */
