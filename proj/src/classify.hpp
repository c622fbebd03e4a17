#pragma once

#include <string>
#include <vector>

#include "adapt.hpp"
#include "classes.hpp"
#include "model.hpp"
#include "tree.hpp"

namespace lexsent {

enum class MassMode : int {
  combined,       // negative score = p[very-negative] + p[negative]
  negative_only,  // negative score = p[negative]
};

enum class RuleFired : int {
  argmax,     // argmax mapped to Negative
  threshold,  // negative score exceeded the threshold
  fallback,   // neither; NonNegative by default
};

const char* rule_name(RuleFired rule);

struct Decision {
  TwoClass two_class = TwoClass::non_negative;
  RuleFired rule = RuleFired::fallback;
  double negative_score = 0.0;  // the score the rule compared (mode-dependent)
};

// Argmax + the two-class mapping first; otherwise Negative when the negative
// score is strictly above the threshold; otherwise NonNegative.
Decision decide_two_class(const Vector5d& dist, double threshold = 0.4,
                          MassMode mode = MassMode::combined);

// Lexicon lookup first, then suffix heuristics (-ly RB, -ing VBG, -ed VBN,
// -s on a known noun NNS), default NN.
PennTag tag_word(const std::string& word);
std::vector<PennTag> pos_tag(const std::vector<std::string>& tokens);

struct ClassifyOptions {
  double threshold = 0.4;
  MassMode mass_mode = MassMode::combined;
  bool sexpr = false;  // parse input as s-expressions instead of raw tokens
};

struct ClassificationResult {
  TwoClass two_class = TwoClass::non_negative;
  RuleFired rule_fired = RuleFired::fallback;
  Vector5d five_dist = Vector5d::Zero();
  double negative_mass = 0.0;  // always p[very-negative] + p[negative]
  SentimentTree tree;          // fully annotated
};

ClassificationResult classify_tree(const SentimentModel& model,
                                   const SentimentTree& tree,
                                   const ClassifyOptions& options = {});

// Raw text is tokenized and right-binarized; s-expression text is parsed.
ClassificationResult classify_phrase(const SentimentModel& model,
                                     const std::string& text,
                                     const ClassifyOptions& options = {});

// One JSON object per input line: {text, two_class, five_dist, negative_mass,
// rule_fired}. Blank lines and '#' comments are skipped.
std::string classify_batch(const SentimentModel& model,
                           const std::vector<std::string>& lines,
                           const ClassifyOptions& options = {},
                           int threads = 1);

}  // namespace lexsent
