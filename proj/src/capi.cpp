#include "lexsent/lexsent.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "adapt.hpp"
#include "annotate.hpp"
#include "classes.hpp"
#include "classify.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "trainer.hpp"
#include "util.hpp"
#include "vocab.hpp"

struct lexsent_model {
  lexsent::SentimentModel impl;
};

namespace {

using lexsent::ErrorCode;

thread_local std::string g_last_error;

lexsent_status status_from(ErrorCode code) {
  return static_cast<lexsent_status>(static_cast<int>(code));
}

template <typename Fn>
lexsent_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LEXSENT_OK;
  } catch (const lexsent::Error& err) {
    g_last_error = err.what();
    return status_from(err.code());
  } catch (const std::exception& err) {
    g_last_error = err.what();
    return LEXSENT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LEXSENT_ERR_INTERNAL;
  }
}

char* copy_out(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

void set_out(char** slot, const std::string& text) {
  if (slot) *slot = copy_out(text);
}

void require(bool ok, const char* what) {
  if (!ok) {
    lexsent::fail(ErrorCode::invalid_argument,
                  std::string("null argument: ") + what);
  }
}

lexsent::ClassifyOptions make_options(double threshold, int mass_mode,
                                      int sexpr) {
  lexsent::ClassifyOptions options;
  options.threshold = threshold;
  options.mass_mode = mass_mode == LEXSENT_MASS_NEGATIVE_ONLY
                          ? lexsent::MassMode::negative_only
                          : lexsent::MassMode::combined;
  options.sexpr = sexpr != 0;
  return options;
}

nlohmann::json classification_to_json(const std::string& text,
                                      const lexsent::ClassificationResult& r) {
  nlohmann::json obj;
  obj["text"] = text;
  obj["two_class"] = lexsent::two_class_token(r.two_class);
  obj["five_dist"] = {r.five_dist[0], r.five_dist[1], r.five_dist[2],
                      r.five_dist[3], r.five_dist[4]};
  obj["negative_mass"] = r.negative_mass;
  obj["rule_fired"] = lexsent::rule_name(r.rule_fired);
  return obj;
}

lexsent::Stoplist resolve_stoplist(const char* stoplist_path) {
  if (stoplist_path && *stoplist_path) {
    return lexsent::Stoplist::from_file(stoplist_path);
  }
  if (const char* env = std::getenv("LEXSENT_STOPLIST"); env && *env) {
    return lexsent::Stoplist::from_file(env);
  }
  return lexsent::Stoplist::bundled();
}

}  // namespace

extern "C" {

const char* lexsent_version(void) { return "1.0.0"; }

const char* lexsent_last_error(void) { return g_last_error.c_str(); }

const char* lexsent_status_name(int status) {
  switch (static_cast<lexsent_status>(status)) {
    case LEXSENT_OK: return "ok";
    case LEXSENT_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case LEXSENT_ERR_IO: return "io-error";
    case LEXSENT_ERR_PARSE: return "parse-error";
    case LEXSENT_ERR_MODEL_NOT_LOADED: return "model-not-loaded";
    case LEXSENT_ERR_NEUTRAL_DONOR_MISSING: return "neutral-donor-missing";
    case LEXSENT_ERR_DIMENSION_MISMATCH: return "dimension-mismatch";
    case LEXSENT_ERR_EMPTY_TREE: return "empty-tree";
    case LEXSENT_ERR_UNSUPPORTED_VERSION: return "unsupported-version";
    case LEXSENT_ERR_CORRUPT_MODEL: return "corrupt-model";
    case LEXSENT_ERR_UNLABELED_NODE: return "unlabeled-node";
    case LEXSENT_ERR_EMPTY_TREEBANK: return "empty-treebank";
    case LEXSENT_ERR_STOPLIST_MISSING: return "stoplist-missing";
    case LEXSENT_ERR_EMPTY_TABLE: return "empty-table";
    case LEXSENT_ERR_WRONG_JUDGE_COUNT: return "wrong-judge-count";
    case LEXSENT_ERR_DUPLICATE_WORD: return "duplicate-word";
    case LEXSENT_ERR_MISSING_GOLD: return "missing-gold";
    case LEXSENT_ERR_MISSING_TAG: return "missing-tag";
    case LEXSENT_ERR_NO_DONOR_FOR_TAG: return "no-donor-for-tag";
    case LEXSENT_ERR_DONOR_MISSING: return "donor-missing";
    case LEXSENT_ERR_DUPLICATE_DEVIATION: return "duplicate-deviation";
    case LEXSENT_ERR_NON_BINARY_NODE: return "non-binary-node";
    case LEXSENT_ERR_EMPTY_PHRASE: return "empty-phrase";
    case LEXSENT_ERR_INVALID_DISTRIBUTION: return "invalid-distribution";
    case LEXSENT_ERR_LENGTH_MISMATCH: return "length-mismatch";
    case LEXSENT_ERR_EMPTY_INPUT: return "empty-input";
    case LEXSENT_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

void lexsent_string_free(char* text) { std::free(text); }

lexsent_status lexsent_model_load(const char* path, lexsent_model** out_model) {
  return guarded([&] {
    require(path, "path");
    require(out_model, "out_model");
    auto* handle = new lexsent_model{lexsent::load_model(path)};
    *out_model = handle;
  });
}

lexsent_status lexsent_model_save(const lexsent_model* model,
                                  const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    lexsent::save_model(model->impl, path);
  });
}

void lexsent_model_free(lexsent_model* model) { delete model; }

int lexsent_model_dim(const lexsent_model* model) {
  return model ? model->impl.dim : 0;
}

long lexsent_model_vocab_size(const lexsent_model* model) {
  return model ? static_cast<long>(model->impl.vocab_size()) : 0;
}

lexsent_status lexsent_vocab(const char* corpus_path,
                             const char* stoplist_path, double coverage,
                             int cutoff_mode, char** out_tsv) {
  return guarded([&] {
    require(corpus_path, "corpus_path");
    require(out_tsv, "out_tsv");
    lexsent::Stoplist stoplist = resolve_stoplist(stoplist_path);
    lexsent::TermFrequencyTable tf =
        lexsent::count_corpus(corpus_path, stoplist);
    lexsent::VocabSelection selection = lexsent::select_vocabulary(
        tf, coverage,
        cutoff_mode == LEXSENT_CUTOFF_TYPES ? lexsent::CutoffMode::types
                                            : lexsent::CutoffMode::mass);
    set_out(out_tsv, lexsent::vocab_to_tsv(selection));
  });
}

lexsent_status lexsent_deviations(const lexsent_model* model,
                                  const char* vocab_path,
                                  const char* annotations_path,
                                  const char* tags_path,
                                  const char* donor_table_path, int threads,
                                  char** out_tsv, char** out_skipped) {
  return guarded([&] {
    require(model, "model");
    require(vocab_path, "vocab_path");
    require(annotations_path, "annotations_path");
    require(tags_path, "tags_path");
    std::vector<std::string> vocab = lexsent::load_word_list(vocab_path);
    std::vector<lexsent::AnnotationRecord> gold =
        lexsent::load_annotations(annotations_path);
    lexsent::TagMap tags = lexsent::load_tag_map(tags_path);
    lexsent::DonorTable table = donor_table_path && *donor_table_path
                                    ? lexsent::DonorTable::from_file(donor_table_path)
                                    : lexsent::DonorTable::standard();
    lexsent::DeviationReport report = lexsent::detect_deviations(
        vocab, model->impl, gold, tags, table, threads);
    set_out(out_tsv, lexsent::deviations_to_tsv(report.entries));
    set_out(out_skipped, lexsent::skipped_to_text(report.skipped));
  });
}

lexsent_status lexsent_adapt(const lexsent_model* model,
                             const char* deviations_path,
                             lexsent_model** out_model) {
  return guarded([&] {
    require(model, "model");
    require(deviations_path, "deviations_path");
    require(out_model, "out_model");
    std::vector<lexsent::DeviationEntry> deviations =
        lexsent::load_deviations(deviations_path);
    auto* handle = new lexsent_model{
        lexsent::substitute_vectors(model->impl, deviations)};
    *out_model = handle;
  });
}

lexsent_status lexsent_classify_phrase(const lexsent_model* model,
                                       const char* text, double threshold,
                                       int mass_mode, int sexpr,
                                       char** out_json) {
  return guarded([&] {
    require(model, "model");
    require(text, "text");
    require(out_json, "out_json");
    lexsent::ClassifyOptions options =
        make_options(threshold, mass_mode, sexpr);
    lexsent::ClassificationResult result =
        lexsent::classify_phrase(model->impl, text, options);
    set_out(out_json, classification_to_json(text, result).dump() + "\n");
  });
}

lexsent_status lexsent_classify_file(const lexsent_model* model,
                                     const char* phrases_path,
                                     double threshold, int mass_mode,
                                     int sexpr, int threads,
                                     char** out_jsonl) {
  return guarded([&] {
    require(model, "model");
    require(phrases_path, "phrases_path");
    require(out_jsonl, "out_jsonl");
    std::vector<std::string> lines =
        lexsent::split(lexsent::read_file(phrases_path), '\n');
    lexsent::ClassifyOptions options =
        make_options(threshold, mass_mode, sexpr);
    set_out(out_jsonl,
            lexsent::classify_batch(model->impl, lines, options, threads));
  });
}

lexsent_status lexsent_train(const char* treebank_path, int dim,
                             double learning_rate, double l2, int epochs,
                             int batch_size, uint64_t seed, int threads,
                             double init_scale, char** out_summary,
                             lexsent_model** out_model) {
  return guarded([&] {
    require(treebank_path, "treebank_path");
    require(out_model, "out_model");
    lexsent::LabeledTreebank bank =
        lexsent::LabeledTreebank::from_file(treebank_path);
    lexsent::TrainConfig config;
    config.dim = dim;
    config.learning_rate = learning_rate;
    config.l2 = l2;
    config.epochs = epochs;
    config.batch_size = batch_size;
    config.seed = seed;
    config.threads = threads;
    config.init_scale = init_scale;
    lexsent::TrainResult result = lexsent::train(bank, config);
    if (out_summary) {
      nlohmann::json summary;
      summary["trees"] = bank.trees.size();
      summary["nodes"] = bank.node_count();
      summary["dim"] = result.model.dim;
      summary["vocab_size"] = result.model.vocab_size();
      summary["epochs"] = config.epochs;
      summary["initial_mean_node_loss"] = result.initial_mean_node_loss;
      summary["final_mean_node_loss"] = result.final_mean_node_loss;
      set_out(out_summary, summary.dump(2) + "\n");
    }
    *out_model = new lexsent_model{std::move(result.model)};
  });
}

lexsent_status lexsent_eval(const lexsent_model* model,
                            const lexsent_model* baseline,
                            const char* testset_path,
                            const char* deviations_path, double threshold,
                            int mass_mode, int sexpr, int threads,
                            int json_output, char** out_report) {
  return guarded([&] {
    require(model, "model");
    require(testset_path, "testset_path");
    require(out_report, "out_report");
    std::vector<lexsent::TestItem> testset =
        lexsent::load_testset(testset_path);
    lexsent::ClassifyOptions options =
        make_options(threshold, mass_mode, sexpr);
    std::vector<std::string> deviated;
    if (deviations_path && *deviations_path) {
      for (const auto& entry : lexsent::load_deviations(deviations_path)) {
        deviated.push_back(entry.word);
      }
    }
    if (baseline) {
      lexsent::ComparisonReport report =
          lexsent::compare_models(baseline->impl, model->impl, testset,
                                  deviated, options, threads);
      set_out(out_report, json_output
                              ? lexsent::comparison_to_json(report)
                              : lexsent::render_comparison_text(report));
    } else {
      lexsent::MetricsReport report =
          lexsent::evaluate(model->impl, testset, options, threads);
      set_out(out_report, json_output
                              ? lexsent::metrics_to_json(report)
                              : lexsent::render_metrics_text(report, "model"));
    }
  });
}

lexsent_status lexsent_grad_check(uint64_t seed, int trials, int dim,
                                  int max_leaves, double l2, double epsilon,
                                  char** out_report) {
  return guarded([&] {
    require(out_report, "out_report");
    if (trials < 1) {
      lexsent::fail(ErrorCode::invalid_argument, "trials must be >= 1");
    }
    if (dim < 1) lexsent::fail(ErrorCode::invalid_argument, "dim must be >= 1");
    if (max_leaves < 1) {
      lexsent::fail(ErrorCode::invalid_argument, "max_leaves must be >= 1");
    }
    static const std::vector<std::string> kPool = {
        "alpha", "beta", "gamma", "delta", "epsilon",
        "zeta",  "eta",  "theta", "iota",  "kappa"};
    nlohmann::json trials_json = nlohmann::json::array();
    double worst = 0.0;
    std::string worst_parameter;
    for (int t = 0; t < trials; ++t) {
      lexsent::DeterministicRng rng(seed + static_cast<uint64_t>(t));
      // A healthy parameter scale keeps every gradient well above the
      // finite-difference noise floor, so the relative-error metric is
      // meaningful for all entries.
      lexsent::SentimentModel model = lexsent::make_random_model(
          dim, kPool, seed + static_cast<uint64_t>(t), 0.5);
      int leaves = 1 + static_cast<int>(
                           rng.next_below(static_cast<uint64_t>(max_leaves)));
      lexsent::SentimentTree tree =
          lexsent::random_labeled_tree(rng, kPool, leaves);
      lexsent::GradCheckReport report =
          lexsent::grad_check(model, tree, l2, epsilon);
      nlohmann::json row;
      row["trial"] = t;
      row["leaves"] = leaves;
      row["max_rel_error"] = report.max_rel_error;
      row["worst_parameter"] = report.worst_parameter;
      row["parameters_checked"] = report.parameters_checked;
      trials_json.push_back(std::move(row));
      if (report.max_rel_error > worst) {
        worst = report.max_rel_error;
        worst_parameter = report.worst_parameter;
      }
    }
    nlohmann::json doc;
    doc["trials"] = std::move(trials_json);
    doc["max_rel_error"] = worst;
    doc["worst_parameter"] = worst_parameter;
    doc["tolerance"] = 1e-4;
    doc["passed"] = worst < 1e-4;
    set_out(out_report, doc.dump(2) + "\n");
  });
}

}  // extern "C"
