#ifndef LEXSENT_H
#define LEXSENT_H

#include <stdint.h>

#if defined(_WIN32)
#define LEXSENT_API __declspec(dllexport)
#else
#define LEXSENT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque sentiment model handle. */
typedef struct lexsent_model lexsent_model;

typedef enum lexsent_status {
  LEXSENT_OK = 0,
  LEXSENT_ERR_INVALID_ARGUMENT = 1,
  LEXSENT_ERR_IO = 2,
  LEXSENT_ERR_PARSE = 3,
  LEXSENT_ERR_MODEL_NOT_LOADED = 4,
  LEXSENT_ERR_NEUTRAL_DONOR_MISSING = 5,
  LEXSENT_ERR_DIMENSION_MISMATCH = 6,
  LEXSENT_ERR_EMPTY_TREE = 7,
  LEXSENT_ERR_UNSUPPORTED_VERSION = 8,
  LEXSENT_ERR_CORRUPT_MODEL = 9,
  LEXSENT_ERR_UNLABELED_NODE = 10,
  LEXSENT_ERR_EMPTY_TREEBANK = 11,
  LEXSENT_ERR_STOPLIST_MISSING = 12,
  LEXSENT_ERR_EMPTY_TABLE = 13,
  LEXSENT_ERR_WRONG_JUDGE_COUNT = 14,
  LEXSENT_ERR_DUPLICATE_WORD = 15,
  LEXSENT_ERR_MISSING_GOLD = 16,
  LEXSENT_ERR_MISSING_TAG = 17,
  LEXSENT_ERR_NO_DONOR_FOR_TAG = 18,
  LEXSENT_ERR_DONOR_MISSING = 19,
  LEXSENT_ERR_DUPLICATE_DEVIATION = 20,
  LEXSENT_ERR_NON_BINARY_NODE = 21,
  LEXSENT_ERR_EMPTY_PHRASE = 22,
  LEXSENT_ERR_INVALID_DISTRIBUTION = 23,
  LEXSENT_ERR_LENGTH_MISMATCH = 24,
  LEXSENT_ERR_EMPTY_INPUT = 25,
  LEXSENT_ERR_INTERNAL = 26,
} lexsent_status;

/* Negative-score mode for the two-class decision rule. */
#define LEXSENT_MASS_COMBINED 0
#define LEXSENT_MASS_NEGATIVE_ONLY 1

/* Vocabulary cutoff interpretation. */
#define LEXSENT_CUTOFF_MASS 0
#define LEXSENT_CUTOFF_TYPES 1

/* Library version string. */
LEXSENT_API const char* lexsent_version(void);

/* Message for the most recent error on this thread; never NULL. */
LEXSENT_API const char* lexsent_last_error(void);

/* Stable name for a status value, e.g. "invalid-argument". */
LEXSENT_API const char* lexsent_status_name(int status);

/* Releases a string returned through a char** out parameter. */
LEXSENT_API void lexsent_string_free(char* text);

/* ---- model lifecycle ---------------------------------------------------- */

LEXSENT_API lexsent_status lexsent_model_load(const char* path,
                                              lexsent_model** out_model);
LEXSENT_API lexsent_status lexsent_model_save(const lexsent_model* model,
                                              const char* path);
LEXSENT_API void lexsent_model_free(lexsent_model* model);
LEXSENT_API int lexsent_model_dim(const lexsent_model* model);
LEXSENT_API long lexsent_model_vocab_size(const lexsent_model* model);

/* ---- pipeline ----------------------------------------------------------- */

/* Tokenize + stop-filter a corpus (file or directory of .txt), rank by
 * frequency, cut at `coverage`. Result TSV: word<TAB>count<TAB>cumulative.
 * stoplist_path NULL: $LEXSENT_STOPLIST if set, else the bundled Van list. */
LEXSENT_API lexsent_status lexsent_vocab(const char* corpus_path,
                                         const char* stoplist_path,
                                         double coverage, int cutoff_mode,
                                         char** out_tsv);

/* Compare the model's per-word two-class sentiment with resolved judge
 * annotations; deviated words get a POS-matched donor. out_tsv rows:
 * word<TAB>model_class<TAB>actual_class<TAB>pos<TAB>donor. out_skipped lists
 * deviated words whose tag has no donor row (word<TAB>tag). donor_table_path
 * NULL selects the built-in table. Either out pointer may be NULL. */
LEXSENT_API lexsent_status lexsent_deviations(
    const lexsent_model* model, const char* vocab_path,
    const char* annotations_path, const char* tags_path,
    const char* donor_table_path, int threads, char** out_tsv,
    char** out_skipped);

/* Substitute donor embedding rows for every word in the deviation file;
 * every other parameter stays bit-identical. */
LEXSENT_API lexsent_status lexsent_adapt(const lexsent_model* model,
                                         const char* deviations_path,
                                         lexsent_model** out_model);

/* Classify one phrase (raw tokens, or an s-expression when sexpr != 0).
 * Result: one JSON object {text, two_class, five_dist, negative_mass,
 * rule_fired}. */
LEXSENT_API lexsent_status lexsent_classify_phrase(const lexsent_model* model,
                                                   const char* text,
                                                   double threshold,
                                                   int mass_mode, int sexpr,
                                                   char** out_json);

/* Classify every non-comment line of a file; JSON-lines output. */
LEXSENT_API lexsent_status lexsent_classify_file(const lexsent_model* model,
                                                 const char* phrases_path,
                                                 double threshold,
                                                 int mass_mode, int sexpr,
                                                 int threads,
                                                 char** out_jsonl);

/* Train a fresh model on a fully labeled treebank file. out_summary (may be
 * NULL) receives a JSON training summary. */
LEXSENT_API lexsent_status lexsent_train(const char* treebank_path, int dim,
                                         double learning_rate, double l2,
                                         int epochs, int batch_size,
                                         uint64_t seed, int threads,
                                         double init_scale,
                                         char** out_summary,
                                         lexsent_model** out_model);

/* Evaluate a model (or compare baseline vs model when baseline != NULL) on a
 * gold testset. deviations_path (optional) supplies the deviated words for
 * the coverage statistic. json_output selects JSON over plain text. */
LEXSENT_API lexsent_status lexsent_eval(const lexsent_model* model,
                                        const lexsent_model* baseline,
                                        const char* testset_path,
                                        const char* deviations_path,
                                        double threshold, int mass_mode,
                                        int sexpr, int threads,
                                        int json_output, char** out_report);

/* Finite-difference gradient audit on seeded random models and trees.
 * JSON report: per-trial max relative error plus the overall worst case. */
LEXSENT_API lexsent_status lexsent_grad_check(uint64_t seed, int trials,
                                              int dim, int max_leaves,
                                              double l2, double epsilon,
                                              char** out_report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LEXSENT_H */
