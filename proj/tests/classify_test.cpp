#include <doctest.h>

#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "classify.hpp"
#include "classes.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "test_util.hpp"

using namespace lexsent;

namespace {

constexpr TwoClass kNeg = TwoClass::negative;
constexpr TwoClass kNonNeg = TwoClass::non_negative;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

Vector5d dist_of(double a, double b, double c, double d, double e) {
  Vector5d v;
  v << a, b, c, d, e;
  return v;
}

Vector5d random_dist(DeterministicRng& rng) {
  Vector5d v;
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    v[i] = 0.01 + rng.uniform01();
    sum += v[i];
  }
  return v / sum;
}

}  // namespace

TEST_CASE("decide_two_class applies argmax, threshold, and fallback in order") {
  // argmax lands on class 1 -> Negative via the mapping alone
  Decision d1 = decide_two_class(dist_of(0.10, 0.35, 0.30, 0.15, 0.10));
  CHECK(d1.two_class == kNeg);
  CHECK(d1.rule == RuleFired::argmax);
  CHECK(d1.negative_score == doctest::Approx(0.45).epsilon(1e-15));

  // argmax neutral, combined mass 0.25 <= 0.4 -> fallback NonNegative
  Decision d2 = decide_two_class(dist_of(0.05, 0.20, 0.50, 0.15, 0.10));
  CHECK(d2.two_class == kNonNeg);
  CHECK(d2.rule == RuleFired::fallback);

  // argmax neutral, combined mass 0.42 > 0.4 -> threshold rule fires
  Decision d3 = decide_two_class(dist_of(0.25, 0.17, 0.40, 0.10, 0.08));
  CHECK(d3.two_class == kNeg);
  CHECK(d3.rule == RuleFired::threshold);
  CHECK(d3.negative_score == doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("negative-only mode compares just the plain-negative probability") {
  Vector5d dist = dist_of(0.25, 0.17, 0.40, 0.10, 0.08);
  Decision combined = decide_two_class(dist, 0.4, MassMode::combined);
  Decision only = decide_two_class(dist, 0.4, MassMode::negative_only);
  CHECK(combined.two_class == kNeg);
  CHECK(only.two_class == kNonNeg);  // 0.17 is below the threshold
  CHECK(only.negative_score == doctest::Approx(0.17).epsilon(1e-12));
  // but a lower threshold lets it fire in negative-only mode too
  CHECK(decide_two_class(dist, 0.15, MassMode::negative_only).two_class ==
        kNeg);
}

TEST_CASE("decide_two_class validates its inputs") {
  Vector5d bad = dist_of(0.5, 0.5, 0.5, 0.5, 0.5);
  CHECK(code_of([&] { decide_two_class(bad); }) ==
        ErrorCode::invalid_distribution);
  Vector5d ok = dist_of(0.2, 0.2, 0.2, 0.2, 0.2);
  CHECK(code_of([&] { decide_two_class(ok, -0.1); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([&] { decide_two_class(ok, 1.1); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("threshold 1.0 reduces to argmax plus the class mapping") {
  DeterministicRng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    Vector5d dist = random_dist(rng);
    Decision d = decide_two_class(dist, 1.0, MassMode::combined);
    CHECK(d.two_class == map_five_to_two(argmax_class(dist)));
    CHECK(d.rule != RuleFired::threshold);
  }
}

TEST_CASE("lowering the threshold never shrinks the negative set") {
  DeterministicRng rng(555);
  std::vector<Vector5d> dists;
  for (int i = 0; i < 400; ++i) dists.push_back(random_dist(rng));
  const std::vector<double> thresholds = {0.9, 0.6, 0.4, 0.2, 0.05};
  size_t prev = 0;
  bool first = true;
  for (double t : thresholds) {
    size_t negatives = 0;
    for (const auto& dist : dists) {
      if (decide_two_class(dist, t).two_class == kNeg) ++negatives;
    }
    if (!first) CHECK(negatives >= prev);
    prev = negatives;
    first = false;
  }
}

TEST_CASE("every phrase negative at a high threshold stays negative lower") {
  DeterministicRng rng(808);
  for (int trial = 0; trial < 500; ++trial) {
    Vector5d dist = random_dist(rng);
    bool high = decide_two_class(dist, 0.6).two_class == kNeg;
    bool low = decide_two_class(dist, 0.3).two_class == kNeg;
    if (high) CHECK(low);
  }
}

TEST_CASE("rule_name spells out each rule") {
  CHECK(std::string(rule_name(RuleFired::argmax)) == "argmax");
  CHECK(std::string(rule_name(RuleFired::threshold)) == "threshold");
  CHECK(std::string(rule_name(RuleFired::fallback)) == "default");
}

TEST_CASE("tag_word uses the lexicon first and suffixes second") {
  CHECK(tag_word("insufficient").str() == "JJ");   // lexicon
  CHECK(tag_word("insufficiently").str() == "RB"); // -ly
  CHECK(tag_word("ignoring").str() == "VBG");      // -ing
  CHECK(tag_word("convicted").str() == "VBN");     // -ed
  CHECK(tag_word("motions").str() == "NNS");       // known noun + s
  CHECK(tag_word("zxqv").str() == "NN");           // default
  auto tags = pos_tag({"insufficient", "zxqv"});
  REQUIRE(tags.size() == 2);
  CHECK(tags[0].str() == "JJ");
  CHECK(tags[1].str() == "NN");
}

TEST_CASE("classify_phrase agrees between raw tokens and s-expressions") {
  std::vector<std::string> words = {"the", "evidence", "was", "insufficient",
                                    "thing"};
  SentimentModel m = make_random_model(4, words, 321, 0.5);
  ClassifyOptions raw;
  ClassificationResult a = classify_phrase(m, "the evidence was insufficient",
                                           raw);
  ClassifyOptions sexpr;
  sexpr.sexpr = true;
  ClassificationResult b = classify_phrase(
      m, "((the) ((evidence) ((was) (insufficient))))", sexpr);
  CHECK(a.two_class == b.two_class);
  CHECK(a.five_dist == b.five_dist);
  CHECK(a.negative_mass == b.negative_mass);
  CHECK(a.rule_fired == b.rule_fired);

  // negative_mass is always the combined bottom-two probability
  CHECK(a.negative_mass ==
        doctest::Approx(a.five_dist[0] + a.five_dist[1]).epsilon(1e-15));
  CHECK(is_valid_distribution(a.five_dist));
}

TEST_CASE("classify_phrase rejects empty input") {
  SentimentModel m = make_random_model(3, {"thing", "word"}, 7, 0.5);
  CHECK(code_of([&] { classify_phrase(m, "   "); }) ==
        ErrorCode::empty_phrase);
}

TEST_CASE("a single word classifies like model_word_class when argmax wins") {
  std::vector<std::string> words = {"guilty", "evidence", "thing"};
  SentimentModel m = make_random_model(2, words, 1234, 0.5);
  for (const auto& w : words) {
    ClassificationResult r = classify_phrase(m, w);
    if (r.rule_fired == RuleFired::argmax || r.rule_fired == RuleFired::fallback) {
      // with threshold 1.0 the decision is exactly the word-class mapping
      ClassifyOptions strict;
      strict.threshold = 1.0;
      ClassificationResult s = classify_phrase(m, w, strict);
      CHECK(s.two_class == model_word_class(m, w));
    }
  }
}

TEST_CASE("classify_batch emits one JSON object per line, skipping comments") {
  std::vector<std::string> words = {"evidence", "guilty", "court", "thing"};
  SentimentModel m = make_random_model(3, words, 22, 0.5);
  std::vector<std::string> lines = {
      "# header",
      "the evidence",
      "",
      "guilty court",
  };
  std::string out = classify_batch(m, lines);
  std::istringstream stream(out);
  std::string line;
  std::vector<nlohmann::json> rows;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    rows.push_back(nlohmann::json::parse(line));
  }
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["text"] == "the evidence");
  CHECK(rows[1]["text"] == "guilty court");
  for (const auto& row : rows) {
    CHECK(row.contains("two_class"));
    CHECK(row.contains("rule_fired"));
    CHECK(row.contains("negative_mass"));
    REQUIRE(row["five_dist"].is_array());
    CHECK(row["five_dist"].size() == 5);
    std::string cls = row["two_class"].get<std::string>();
    CHECK((cls == "neg" || cls == "nonneg"));
    double mass = row["negative_mass"].get<double>();
    double sum = row["five_dist"][0].get<double>() +
                 row["five_dist"][1].get<double>();
    CHECK(mass == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("classify_batch is deterministic across thread counts") {
  std::vector<std::string> words = {"evidence", "guilty", "court", "judge",
                                    "thing"};
  SentimentModel m = make_random_model(4, words, 77, 0.5);
  std::vector<std::string> lines;
  DeterministicRng rng(31);
  for (int i = 0; i < 40; ++i) {
    std::string text;
    int len = 1 + static_cast<int>(rng.next_below(5));
    for (int k = 0; k < len; ++k) {
      if (k) text += ' ';
      text += words[rng.next_below(words.size())];
    }
    lines.push_back(text);
  }
  std::string one = classify_batch(m, lines, {}, 1);
  std::string four = classify_batch(m, lines, {}, 4);
  CHECK(one == four);
}
