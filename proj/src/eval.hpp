#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "classes.hpp"
#include "classify.hpp"
#include "model.hpp"

namespace lexsent {

// An exact count-backed fraction; percentages render from integer arithmetic
// so a table cell never depends on floating-point rounding.
struct Ratio {
  long long num = 0;
  long long den = 0;

  double value() const {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  }
  // Two decimals, truncated toward zero: 360/513 -> "70.17".
  std::string percent() const;
};

struct ConfusionMatrix2 {
  // counts[actual][predicted], index 0 = negative, 1 = non-negative.
  std::array<std::array<long long, 2>, 2> counts{{{0, 0}, {0, 0}}};

  void add(TwoClass actual, TwoClass predicted);
  long long row_total(TwoClass actual) const;
  long long col_total(TwoClass predicted) const;
  long long total() const;
  long long correct() const;
};

ConfusionMatrix2 confusion(const std::vector<TwoClass>& predictions,
                           const std::vector<TwoClass>& golds);

struct MetricsReport {
  ConfusionMatrix2 cm;
  Ratio accuracy;
  // Indexed by TwoClass; absent when the denominator is zero.
  std::array<std::optional<Ratio>, 2> precision;
  std::array<std::optional<Ratio>, 2> recall;
  long long phrase_count = 0;
};

MetricsReport metrics(const ConfusionMatrix2& cm);

struct TestItem {
  std::string text;
  TwoClass gold = TwoClass::non_negative;
};

// Accepts both line forms: phrase<TAB>label (pre-resolved) and
// phrase<TAB>l1<TAB>l2<TAB>l3 (judge labels, majority-resolved).
std::vector<TestItem> parse_testset(std::string_view content,
                                    const std::string& source);
std::vector<TestItem> load_testset(const std::string& path);

MetricsReport evaluate(const SentimentModel& model,
                       const std::vector<TestItem>& testset,
                       const ClassifyOptions& options = {}, int threads = 1);

struct ComparisonReport {
  MetricsReport baseline;
  MetricsReport target;
  Ratio divergence;          // phrases where the two models disagree
  Ratio deviated_coverage;   // phrases containing >= 1 deviated word
  long long phrase_count = 0;
};

ComparisonReport compare_models(const SentimentModel& baseline,
                                const SentimentModel& target,
                                const std::vector<TestItem>& testset,
                                const std::vector<std::string>& deviated_words,
                                const ClassifyOptions& options = {},
                                int threads = 1);

std::string render_metrics_text(const MetricsReport& report,
                                const std::string& title);
std::string render_comparison_text(const ComparisonReport& report);
std::string metrics_to_json(const MetricsReport& report);
std::string comparison_to_json(const ComparisonReport& report);

}  // namespace lexsent
