#include "eval.hpp"

#include <cstdio>
#include <unordered_set>

#include <json.hpp>

#include "annotate.hpp"
#include "errors.hpp"
#include "tree.hpp"
#include "util.hpp"
#include "vocab.hpp"

namespace lexsent {

namespace {

using nlohmann::json;

int idx(TwoClass c) { return static_cast<int>(c); }

json ratio_to_json(const Ratio& ratio) {
  json out;
  out["num"] = ratio.num;
  out["den"] = ratio.den;
  out["value"] = ratio.value();
  out["percent"] = ratio.percent();
  return out;
}

json optional_ratio_to_json(const std::optional<Ratio>& ratio) {
  if (!ratio) return nullptr;
  return ratio_to_json(*ratio);
}

json metrics_to_document(const MetricsReport& report) {
  json out;
  out["confusion"] = {
      {"neg", {{"neg", report.cm.counts[0][0]}, {"nonneg", report.cm.counts[0][1]}}},
      {"nonneg", {{"neg", report.cm.counts[1][0]}, {"nonneg", report.cm.counts[1][1]}}},
  };
  out["accuracy"] = ratio_to_json(report.accuracy);
  out["precision"] = {
      {"neg", optional_ratio_to_json(report.precision[0])},
      {"nonneg", optional_ratio_to_json(report.precision[1])},
  };
  out["recall"] = {
      {"neg", optional_ratio_to_json(report.recall[0])},
      {"nonneg", optional_ratio_to_json(report.recall[1])},
  };
  out["phrase_count"] = report.phrase_count;
  return out;
}

std::string percent_or_dash(const std::optional<Ratio>& ratio) {
  return ratio ? ratio->percent() + "%" : "-";
}

// Leaf tokens for s-expression items, plain tokenization otherwise.
std::vector<std::string> item_tokens(const std::string& text, bool sexpr) {
  if (sexpr) {
    std::vector<std::string> tokens;
    for (const auto& token : read_tree(text).leaf_tokens()) {
      tokens.push_back(to_lower(token));
    }
    return tokens;
  }
  return tokenize(text);
}

}  // namespace

std::string Ratio::percent() const {
  if (den == 0) return "0.00";
  long long hundredths = num * 10000 / den;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%lld.%02lld", hundredths / 100,
                hundredths % 100);
  return std::string(buf);
}

void ConfusionMatrix2::add(TwoClass actual, TwoClass predicted) {
  ++counts[idx(actual)][idx(predicted)];
}

long long ConfusionMatrix2::row_total(TwoClass actual) const {
  return counts[idx(actual)][0] + counts[idx(actual)][1];
}

long long ConfusionMatrix2::col_total(TwoClass predicted) const {
  return counts[0][idx(predicted)] + counts[1][idx(predicted)];
}

long long ConfusionMatrix2::total() const {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

long long ConfusionMatrix2::correct() const {
  return counts[0][0] + counts[1][1];
}

ConfusionMatrix2 confusion(const std::vector<TwoClass>& predictions,
                           const std::vector<TwoClass>& golds) {
  if (predictions.size() != golds.size()) {
    fail(ErrorCode::length_mismatch,
         "got " + std::to_string(predictions.size()) + " predictions for " +
             std::to_string(golds.size()) + " gold labels");
  }
  if (predictions.empty()) {
    fail(ErrorCode::empty_input, "no predictions to score");
  }
  ConfusionMatrix2 cm;
  for (size_t i = 0; i < predictions.size(); ++i) {
    cm.add(golds[i], predictions[i]);
  }
  return cm;
}

MetricsReport metrics(const ConfusionMatrix2& cm) {
  if (cm.total() < 1) fail(ErrorCode::empty_input, "empty confusion matrix");
  MetricsReport report;
  report.cm = cm;
  report.phrase_count = cm.total();
  report.accuracy = {cm.correct(), cm.total()};
  for (TwoClass c : {TwoClass::negative, TwoClass::non_negative}) {
    long long col = cm.col_total(c);
    long long row = cm.row_total(c);
    long long hit = cm.counts[idx(c)][idx(c)];
    if (col > 0) report.precision[idx(c)] = Ratio{hit, col};
    if (row > 0) report.recall[idx(c)] = Ratio{hit, row};
  }
  return report;
}

std::vector<TestItem> parse_testset(std::string_view content,
                                    const std::string& source) {
  std::vector<TestItem> items;
  int line_no = 0;
  for (const auto& raw : split(content, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::string where = "at " + source + ":" + std::to_string(line_no);
    std::vector<std::string> fields = split(line, '\t');
    TestItem item;
    std::string_view text = trim(fields[0]);
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
      text = text.substr(1, text.size() - 2);
    }
    item.text = std::string(text);
    if (item.text.empty()) fail(ErrorCode::parse_error, "empty phrase " + where);
    if (fields.size() == 2) {
      item.gold = parse_two_class(trim(fields[1]), where);
    } else if (fields.size() == 4) {
      std::vector<TwoClass> labels;
      for (int j = 1; j <= 3; ++j) {
        labels.push_back(parse_two_class(trim(fields[j]), where));
      }
      item.gold = majority_vote(labels);
    } else {
      fail(ErrorCode::parse_error,
           "expected phrase<TAB>label or phrase plus 3 judge labels " + where);
    }
    items.push_back(std::move(item));
  }
  if (items.empty()) {
    fail(ErrorCode::empty_input, "testset has no items: " + source);
  }
  return items;
}

std::vector<TestItem> load_testset(const std::string& path) {
  return parse_testset(read_file(path), path);
}

MetricsReport evaluate(const SentimentModel& model,
                       const std::vector<TestItem>& testset,
                       const ClassifyOptions& options, int threads) {
  if (testset.empty()) fail(ErrorCode::empty_input, "testset has no items");
  std::vector<TwoClass> predictions = parallel_map<TwoClass>(
      testset.size(), threads, [&](size_t i) {
        return classify_phrase(model, testset[i].text, options).two_class;
      });
  std::vector<TwoClass> golds;
  golds.reserve(testset.size());
  for (const auto& item : testset) golds.push_back(item.gold);
  return metrics(confusion(predictions, golds));
}

ComparisonReport compare_models(const SentimentModel& baseline,
                                const SentimentModel& target,
                                const std::vector<TestItem>& testset,
                                const std::vector<std::string>& deviated_words,
                                const ClassifyOptions& options, int threads) {
  if (testset.empty()) fail(ErrorCode::empty_input, "testset has no items");
  struct PairResult {
    TwoClass baseline_class;
    TwoClass target_class;
  };
  std::vector<PairResult> results = parallel_map<PairResult>(
      testset.size(), threads, [&](size_t i) {
        PairResult r;
        r.baseline_class =
            classify_phrase(baseline, testset[i].text, options).two_class;
        r.target_class =
            classify_phrase(target, testset[i].text, options).two_class;
        return r;
      });

  std::unordered_set<std::string> deviated;
  for (const auto& word : deviated_words) deviated.insert(to_lower(word));

  std::vector<TwoClass> golds, baseline_preds, target_preds;
  long long disagreements = 0;
  long long covered = 0;
  for (size_t i = 0; i < testset.size(); ++i) {
    golds.push_back(testset[i].gold);
    baseline_preds.push_back(results[i].baseline_class);
    target_preds.push_back(results[i].target_class);
    if (results[i].baseline_class != results[i].target_class) ++disagreements;
    if (!deviated.empty()) {
      for (const auto& token : item_tokens(testset[i].text, options.sexpr)) {
        if (deviated.count(token)) {
          ++covered;
          break;
        }
      }
    }
  }

  ComparisonReport report;
  report.baseline = metrics(confusion(baseline_preds, golds));
  report.target = metrics(confusion(target_preds, golds));
  report.divergence = {disagreements, static_cast<long long>(testset.size())};
  report.deviated_coverage = {covered, static_cast<long long>(testset.size())};
  report.phrase_count = static_cast<long long>(testset.size());
  return report;
}

std::string render_metrics_text(const MetricsReport& report,
                                const std::string& title) {
  char buf[256];
  std::string out;
  out += title;
  out += '\n';
  out += "                  predicted\n";
  std::snprintf(buf, sizeof(buf), "%-12s %10s %10s %10s\n", "actual", "neg",
                "nonneg", "recall");
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-12s %10lld %10lld %10s\n", "neg",
                report.cm.counts[0][0], report.cm.counts[0][1],
                percent_or_dash(report.recall[0]).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-12s %10lld %10lld %10s\n", "nonneg",
                report.cm.counts[1][0], report.cm.counts[1][1],
                percent_or_dash(report.recall[1]).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-12s %10s %10s\n", "precision",
                percent_or_dash(report.precision[0]).c_str(),
                percent_or_dash(report.precision[1]).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf), "accuracy %s%% (%lld/%lld)\n",
                report.accuracy.percent().c_str(), report.accuracy.num,
                report.accuracy.den);
  out += buf;
  return out;
}

std::string render_comparison_text(const ComparisonReport& report) {
  std::string out = render_metrics_text(report.baseline, "baseline model");
  out += '\n';
  out += render_metrics_text(report.target, "target model");
  out += '\n';
  char buf[160];
  std::snprintf(buf, sizeof(buf), "divergence %s%% (%lld/%lld)\n",
                report.divergence.percent().c_str(), report.divergence.num,
                report.divergence.den);
  out += buf;
  std::snprintf(buf, sizeof(buf), "deviated-word coverage %s%% (%lld/%lld)\n",
                report.deviated_coverage.percent().c_str(),
                report.deviated_coverage.num, report.deviated_coverage.den);
  out += buf;
  return out;
}

std::string metrics_to_json(const MetricsReport& report) {
  return metrics_to_document(report).dump(2) + "\n";
}

std::string comparison_to_json(const ComparisonReport& report) {
  json out;
  out["baseline"] = metrics_to_document(report.baseline);
  out["target"] = metrics_to_document(report.target);
  out["divergence"] = ratio_to_json(report.divergence);
  out["deviated_coverage"] = ratio_to_json(report.deviated_coverage);
  out["phrase_count"] = report.phrase_count;
  return out.dump(2) + "\n";
}

}  // namespace lexsent
