#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "lexsent/lexsent.h"

namespace {

int fail_status(lexsent_status status) {
  std::fprintf(stderr, "error: %s (%s)\n", lexsent_last_error(),
               lexsent_status_name(status));
  return static_cast<int>(status);
}

int write_output(const std::string& path, const char* content) {
  if (!content) content = "";
  if (path.empty() || path == "-") {
    std::fputs(content, stdout);
    return 0;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (out) {
    out << content;
    out.flush();
  }
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return LEXSENT_ERR_IO;
  }
  return 0;
}

struct ModelHandle {
  lexsent_model* ptr = nullptr;
  ~ModelHandle() { lexsent_model_free(ptr); }
  ModelHandle() = default;
  ModelHandle(const ModelHandle&) = delete;
  ModelHandle& operator=(const ModelHandle&) = delete;
};

struct OutString {
  char* ptr = nullptr;
  ~OutString() { lexsent_string_free(ptr); }
  OutString() = default;
  OutString(const OutString&) = delete;
  OutString& operator=(const OutString&) = delete;
};

const char* opt(const std::string& value) {
  return value.empty() ? nullptr : value.c_str();
}

const std::map<std::string, int> kMassModes = {
    {"combined", LEXSENT_MASS_COMBINED},
    {"negative-only", LEXSENT_MASS_NEGATIVE_ONLY}};
const std::map<std::string, int> kCutoffModes = {{"mass", LEXSENT_CUTOFF_MASS},
                                                 {"types", LEXSENT_CUTOFF_TYPES}};
const std::map<std::string, int> kFormats = {{"text", 0}, {"sexpr", 1}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recursive neural tensor sentiment pipeline"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- vocab ----
  struct {
    std::string corpus, stoplist, out;
    double coverage = 0.95;
    int cutoff = LEXSENT_CUTOFF_MASS;
  } vocab_opts;
  auto* vocab = app.add_subcommand(
      "vocab", "Tokenize a corpus, drop stop-words, cut at coverage");
  vocab->add_option("--corpus", vocab_opts.corpus,
                    "corpus file or directory of .txt files")
      ->required();
  vocab->add_option("--stoplist", vocab_opts.stoplist,
                    "stop-list file (default: $LEXSENT_STOPLIST or bundled)");
  vocab->add_option("--coverage", vocab_opts.coverage, "cumulative cutoff")
      ->capture_default_str();
  vocab->add_option("--cutoff-mode", vocab_opts.cutoff, "mass|types")
      ->transform(CLI::CheckedTransformer(kCutoffModes, CLI::ignore_case));
  vocab->add_option("--out", vocab_opts.out, "output TSV (default stdout)");
  vocab->callback([&] {
    OutString tsv;
    lexsent_status status =
        lexsent_vocab(vocab_opts.corpus.c_str(), opt(vocab_opts.stoplist),
                      vocab_opts.coverage, vocab_opts.cutoff, &tsv.ptr);
    exit_code = status != LEXSENT_OK ? fail_status(status)
                                     : write_output(vocab_opts.out, tsv.ptr);
  });

  // ---- deviations ----
  struct {
    std::string model, vocab, annotations, tags, donor_table, out, skipped_out;
    int threads = 1;
  } dev_opts;
  auto* deviations = app.add_subcommand(
      "deviations",
      "List words whose model sentiment disagrees with the judges");
  deviations->add_option("--model", dev_opts.model, "source model file")
      ->required();
  deviations->add_option("--vocab", dev_opts.vocab, "vocabulary TSV")
      ->required();
  deviations
      ->add_option("--annotations", dev_opts.annotations,
                   "judge annotation TSV")
      ->required();
  deviations->add_option("--tags", dev_opts.tags, "word<TAB>tag file")
      ->required();
  deviations->add_option("--donor-table", dev_opts.donor_table,
                         "override donor table TSV");
  deviations->add_option("--threads", dev_opts.threads, "worker threads")
      ->capture_default_str();
  deviations->add_option("--out", dev_opts.out, "deviation TSV (default stdout)");
  deviations->add_option("--skipped-out", dev_opts.skipped_out,
                         "file for deviated words without a donor row");
  deviations->callback([&] {
    ModelHandle model;
    lexsent_status status =
        lexsent_model_load(dev_opts.model.c_str(), &model.ptr);
    if (status != LEXSENT_OK) {
      exit_code = fail_status(status);
      return;
    }
    OutString tsv, skipped;
    status = lexsent_deviations(model.ptr, dev_opts.vocab.c_str(),
                                dev_opts.annotations.c_str(),
                                dev_opts.tags.c_str(),
                                opt(dev_opts.donor_table), dev_opts.threads,
                                &tsv.ptr, &skipped.ptr);
    if (status != LEXSENT_OK) {
      exit_code = fail_status(status);
      return;
    }
    exit_code = write_output(dev_opts.out, tsv.ptr);
    if (exit_code != 0) return;
    if (!dev_opts.skipped_out.empty()) {
      exit_code = write_output(dev_opts.skipped_out, skipped.ptr);
    } else if (skipped.ptr && *skipped.ptr) {
      std::fprintf(stderr, "skipped (no donor row):\n%s", skipped.ptr);
    }
  });

  // ---- adapt ----
  struct {
    std::string model, deviations, out;
  } adapt_opts;
  auto* adapt = app.add_subcommand(
      "adapt", "Substitute donor vectors for deviated words");
  adapt->add_option("--model", adapt_opts.model, "source model file")
      ->required();
  adapt->add_option("--deviations", adapt_opts.deviations, "deviation TSV")
      ->required();
  adapt->add_option("--out", adapt_opts.out, "adapted model file")->required();
  adapt->callback([&] {
    ModelHandle model, adapted;
    lexsent_status status =
        lexsent_model_load(adapt_opts.model.c_str(), &model.ptr);
    if (status == LEXSENT_OK) {
      status = lexsent_adapt(model.ptr, adapt_opts.deviations.c_str(),
                             &adapted.ptr);
    }
    if (status == LEXSENT_OK) {
      status = lexsent_model_save(adapted.ptr, adapt_opts.out.c_str());
    }
    exit_code = status != LEXSENT_OK ? fail_status(status) : 0;
  });

  // ---- classify ----
  struct {
    std::string model, phrases, text, out;
    double threshold = 0.4;
    int mass_mode = LEXSENT_MASS_COMBINED;
    int format = 0;
    int threads = 1;
  } cls_opts;
  auto* classify =
      app.add_subcommand("classify", "Two-class sentiment for phrases");
  classify->add_option("--model", cls_opts.model, "model file")->required();
  auto* phrases_opt = classify->add_option(
      "--phrases", cls_opts.phrases, "file with one phrase per line");
  auto* text_opt =
      classify->add_option("--text", cls_opts.text, "classify one phrase");
  phrases_opt->excludes(text_opt);
  classify
      ->add_option("--threshold", cls_opts.threshold,
                   "negative-score threshold")
      ->capture_default_str();
  classify->add_option("--mass-mode", cls_opts.mass_mode,
                       "combined|negative-only")
      ->transform(CLI::CheckedTransformer(kMassModes, CLI::ignore_case));
  classify->add_option("--format", cls_opts.format, "text|sexpr")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  classify->add_option("--threads", cls_opts.threads, "worker threads")
      ->capture_default_str();
  classify->add_option("--out", cls_opts.out, "JSONL output (default stdout)");
  classify->callback([&] {
    if (cls_opts.phrases.empty() && cls_opts.text.empty()) {
      std::fprintf(stderr, "error: classify needs --phrases or --text\n");
      exit_code = LEXSENT_ERR_INVALID_ARGUMENT;
      return;
    }
    ModelHandle model;
    lexsent_status status =
        lexsent_model_load(cls_opts.model.c_str(), &model.ptr);
    if (status != LEXSENT_OK) {
      exit_code = fail_status(status);
      return;
    }
    OutString result;
    if (!cls_opts.text.empty()) {
      status = lexsent_classify_phrase(model.ptr, cls_opts.text.c_str(),
                                       cls_opts.threshold, cls_opts.mass_mode,
                                       cls_opts.format, &result.ptr);
    } else {
      status = lexsent_classify_file(model.ptr, cls_opts.phrases.c_str(),
                                     cls_opts.threshold, cls_opts.mass_mode,
                                     cls_opts.format, cls_opts.threads,
                                     &result.ptr);
    }
    exit_code = status != LEXSENT_OK ? fail_status(status)
                                     : write_output(cls_opts.out, result.ptr);
  });

  // ---- train-toy ----
  struct {
    std::string treebank, model_out, summary_out;
    int dim = 25;
    double learning_rate = 0.1;
    double l2 = 1e-4;
    int epochs = 100;
    int batch_size = 8;
    uint64_t seed = 42;
    int threads = 1;
    double init_scale = 0.01;
  } train_opts;
  auto* train = app.add_subcommand(
      "train-toy", "Train a model on a small fully labeled treebank");
  train->add_option("--treebank", train_opts.treebank, "treebank file")
      ->required();
  train->add_option("--model-out", train_opts.model_out, "output model file")
      ->required();
  train->add_option("--summary-out", train_opts.summary_out,
                    "training summary JSON (default stdout)");
  train->add_option("--dim", train_opts.dim, "vector dimensionality")
      ->capture_default_str();
  train->add_option("--lr", train_opts.learning_rate, "AdaGrad learning rate")
      ->capture_default_str();
  train->add_option("--l2", train_opts.l2, "L2 regularization strength")
      ->capture_default_str();
  train->add_option("--epochs", train_opts.epochs, "training epochs")
      ->capture_default_str();
  train->add_option("--batch-size", train_opts.batch_size, "trees per update")
      ->capture_default_str();
  train->add_option("--seed", train_opts.seed, "RNG seed")
      ->capture_default_str();
  train->add_option("--threads", train_opts.threads, "worker threads")
      ->capture_default_str();
  train->add_option("--init-scale", train_opts.init_scale,
                    "uniform init half-width")
      ->capture_default_str();
  train->callback([&] {
    OutString summary;
    ModelHandle model;
    lexsent_status status = lexsent_train(
        train_opts.treebank.c_str(), train_opts.dim, train_opts.learning_rate,
        train_opts.l2, train_opts.epochs, train_opts.batch_size,
        train_opts.seed, train_opts.threads, train_opts.init_scale,
        &summary.ptr, &model.ptr);
    if (status == LEXSENT_OK) {
      status = lexsent_model_save(model.ptr, train_opts.model_out.c_str());
    }
    exit_code = status != LEXSENT_OK
                    ? fail_status(status)
                    : write_output(train_opts.summary_out, summary.ptr);
  });

  // ---- eval ----
  struct {
    std::string model, baseline, testset, deviations, out;
    double threshold = 0.4;
    int mass_mode = LEXSENT_MASS_COMBINED;
    int format = 0;
    int threads = 1;
    bool json = false;
  } eval_opts;
  auto* eval = app.add_subcommand(
      "eval", "Confusion matrix and metrics over a gold testset");
  eval->add_option("--model", eval_opts.model, "model file")->required();
  eval->add_option("--baseline", eval_opts.baseline,
                   "baseline model for comparison");
  eval->add_option("--testset", eval_opts.testset, "gold testset TSV")
      ->required();
  eval->add_option("--deviations", eval_opts.deviations,
                   "deviation TSV for the coverage statistic");
  eval->add_option("--threshold", eval_opts.threshold,
                   "negative-score threshold")
      ->capture_default_str();
  eval->add_option("--mass-mode", eval_opts.mass_mode, "combined|negative-only")
      ->transform(CLI::CheckedTransformer(kMassModes, CLI::ignore_case));
  eval->add_option("--format", eval_opts.format, "text|sexpr")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  eval->add_option("--threads", eval_opts.threads, "worker threads")
      ->capture_default_str();
  eval->add_flag("--json", eval_opts.json, "emit the JSON report");
  eval->add_option("--out", eval_opts.out, "report output (default stdout)");
  eval->callback([&] {
    ModelHandle model, baseline;
    lexsent_status status =
        lexsent_model_load(eval_opts.model.c_str(), &model.ptr);
    if (status == LEXSENT_OK && !eval_opts.baseline.empty()) {
      status = lexsent_model_load(eval_opts.baseline.c_str(), &baseline.ptr);
    }
    if (status != LEXSENT_OK) {
      exit_code = fail_status(status);
      return;
    }
    OutString report;
    status = lexsent_eval(model.ptr, baseline.ptr, eval_opts.testset.c_str(),
                          opt(eval_opts.deviations), eval_opts.threshold,
                          eval_opts.mass_mode, eval_opts.format,
                          eval_opts.threads, eval_opts.json ? 1 : 0,
                          &report.ptr);
    exit_code = status != LEXSENT_OK ? fail_status(status)
                                     : write_output(eval_opts.out, report.ptr);
  });

  // ---- grad-check ----
  struct {
    std::string out;
    uint64_t seed = 42;
    int trials = 10;
    int dim = 4;
    int leaves = 7;
    double l2 = 0.01;
    double epsilon = 1e-5;
  } grad_opts;
  auto* grad = app.add_subcommand(
      "grad-check", "Finite-difference audit of the analytic gradients");
  grad->add_option("--seed", grad_opts.seed, "RNG seed")->capture_default_str();
  grad->add_option("--trials", grad_opts.trials, "random (model, tree) pairs")
      ->capture_default_str();
  grad->add_option("--dim", grad_opts.dim, "vector dimensionality")
      ->capture_default_str();
  grad->add_option("--leaves", grad_opts.leaves, "max leaves per random tree")
      ->capture_default_str();
  grad->add_option("--l2", grad_opts.l2, "L2 regularization strength")
      ->capture_default_str();
  grad->add_option("--epsilon", grad_opts.epsilon, "finite-difference step")
      ->capture_default_str();
  grad->add_option("--out", grad_opts.out, "JSON report (default stdout)");
  grad->callback([&] {
    OutString report;
    lexsent_status status = lexsent_grad_check(
        grad_opts.seed, grad_opts.trials, grad_opts.dim, grad_opts.leaves,
        grad_opts.l2, grad_opts.epsilon, &report.ptr);
    exit_code = status != LEXSENT_OK ? fail_status(status)
                                     : write_output(grad_opts.out, report.ptr);
  });

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
