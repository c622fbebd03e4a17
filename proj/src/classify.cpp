#include "classify.hpp"

#include <unordered_map>

#include <json.hpp>

#include "errors.hpp"
#include "util.hpp"
#include "vocab.hpp"

namespace lexsent {

namespace {

const std::unordered_map<std::string, TagKind>& tag_lexicon() {
  static const std::unordered_map<std::string, TagKind> lexicon = {
      // adjectives
      {"wrong", TagKind::JJ},        {"natural", TagKind::JJ},
      {"insufficient", TagKind::JJ}, {"guilty", TagKind::JJ},
      {"unlawful", TagKind::JJ},     {"negligent", TagKind::JJ},
      {"invalid", TagKind::JJ},      {"good", TagKind::JJ},
      {"bad", TagKind::JJ},          {"great", TagKind::JJ},
      {"terrible", TagKind::JJ},     {"awful", TagKind::JJ},
      {"fair", TagKind::JJ},         {"unfair", TagKind::JJ},
      {"legal", TagKind::JJ},        {"illegal", TagKind::JJ},
      {"harsh", TagKind::JJ},        {"poor", TagKind::JJ},
      {"weak", TagKind::JJ},         {"strong", TagKind::JJ},
      {"sound", TagKind::JJ},        {"frivolous", TagKind::JJ},
      {"worse", TagKind::JJR},       {"better", TagKind::JJR},
      {"worst", TagKind::JJS},       {"best", TagKind::JJS},
      // nouns
      {"failure", TagKind::NN},      {"thing", TagKind::NN},
      {"evidence", TagKind::NN},     {"court", TagKind::NN},
      {"movie", TagKind::NN},        {"film", TagKind::NN},
      {"case", TagKind::NN},         {"claim", TagKind::NN},
      {"fraud", TagKind::NN},        {"breach", TagKind::NN},
      {"felony", TagKind::NN},       {"sentence", TagKind::NN},
      {"motion", TagKind::NN},       {"judge", TagKind::NN},
      {"jury", TagKind::NN},         {"crime", TagKind::NN},
      {"verdict", TagKind::NN},      {"appeal", TagKind::NN},
      {"counsel", TagKind::NN},      {"contract", TagKind::NN},
      {"plot", TagKind::NN},         {"story", TagKind::NN},
      {"acting", TagKind::NN},       {"ending", TagKind::NN},
      {"politics", TagKind::NNS},    {"things", TagKind::NNS},
      {"violations", TagKind::NNS},  {"damages", TagKind::NNS},
      // adverbs
      {"insufficiently", TagKind::RB}, {"naturally", TagKind::RB},
      {"not", TagKind::RB},          {"very", TagKind::RB},
      {"too", TagKind::RB},          {"so", TagKind::RB},
      {"quite", TagKind::RB},        {"never", TagKind::RB},
      // verbs
      {"hate", TagKind::VB},         {"do", TagKind::VB},
      {"love", TagKind::VB},         {"like", TagKind::VB},
      {"hates", TagKind::VBZ},       {"does", TagKind::VBZ},
      {"is", TagKind::VBZ},          {"hated", TagKind::VBD},
      {"did", TagKind::VBD},         {"was", TagKind::VBD},
      {"were", TagKind::VBD},        {"objected", TagKind::VBD},
      {"failed", TagKind::VBD},      {"bored", TagKind::VBN},
      {"given", TagKind::VBN},       {"charged", TagKind::VBN},
      {"convicted", TagKind::VBN},   {"accused", TagKind::VBN},
      {"done", TagKind::VBN},        {"ignoring", TagKind::VBG},
      {"doing", TagKind::VBG},       {"boring", TagKind::VBG},
  };
  return lexicon;
}

PennTag make_tag(TagKind kind) {
  PennTag tag;
  tag.kind = kind;
  switch (kind) {
    case TagKind::JJ: tag.raw = "JJ"; break;
    case TagKind::JJR: tag.raw = "JJR"; break;
    case TagKind::JJS: tag.raw = "JJS"; break;
    case TagKind::NN: tag.raw = "NN"; break;
    case TagKind::NNS: tag.raw = "NNS"; break;
    case TagKind::RB: tag.raw = "RB"; break;
    case TagKind::RBR: tag.raw = "RBR"; break;
    case TagKind::RBS: tag.raw = "RBS"; break;
    case TagKind::VB: tag.raw = "VB"; break;
    case TagKind::VBZ: tag.raw = "VBZ"; break;
    case TagKind::VBP: tag.raw = "VBP"; break;
    case TagKind::VBD: tag.raw = "VBD"; break;
    case TagKind::VBN: tag.raw = "VBN"; break;
    case TagKind::VBG: tag.raw = "VBG"; break;
    case TagKind::other: tag.raw = ""; break;
  }
  return tag;
}

bool ends_with(const std::string& word, std::string_view suffix) {
  return word.size() > suffix.size() &&
         std::string_view(word).substr(word.size() - suffix.size()) == suffix;
}

}  // namespace

const char* rule_name(RuleFired rule) {
  switch (rule) {
    case RuleFired::argmax: return "argmax";
    case RuleFired::threshold: return "threshold";
    case RuleFired::fallback: return "default";
  }
  return "?";
}

Decision decide_two_class(const Vector5d& dist, double threshold,
                          MassMode mode) {
  if (!is_valid_distribution(dist)) {
    fail(ErrorCode::invalid_distribution,
         "five-class distribution is not a probability vector");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    fail(ErrorCode::invalid_argument,
         "threshold must be in [0, 1], got " + std::to_string(threshold));
  }
  Decision decision;
  decision.negative_score =
      mode == MassMode::combined
          ? dist[static_cast<int>(FiveClass::very_negative)] +
                dist[static_cast<int>(FiveClass::negative)]
          : dist[static_cast<int>(FiveClass::negative)];
  if (map_five_to_two(argmax_class(dist)) == TwoClass::negative) {
    decision.two_class = TwoClass::negative;
    decision.rule = RuleFired::argmax;
  } else if (decision.negative_score > threshold) {
    decision.two_class = TwoClass::negative;
    decision.rule = RuleFired::threshold;
  } else {
    decision.two_class = TwoClass::non_negative;
    decision.rule = RuleFired::fallback;
  }
  return decision;
}

PennTag tag_word(const std::string& word) {
  std::string key = to_lower(word);
  const auto& lexicon = tag_lexicon();
  if (auto it = lexicon.find(key); it != lexicon.end()) {
    return make_tag(it->second);
  }
  if (ends_with(key, "ly")) return make_tag(TagKind::RB);
  if (ends_with(key, "ing")) return make_tag(TagKind::VBG);
  if (ends_with(key, "ed")) return make_tag(TagKind::VBN);
  if (ends_with(key, "s")) {
    std::string stem = key.substr(0, key.size() - 1);
    if (auto it = lexicon.find(stem);
        it != lexicon.end() && it->second == TagKind::NN) {
      return make_tag(TagKind::NNS);
    }
  }
  return make_tag(TagKind::NN);
}

std::vector<PennTag> pos_tag(const std::vector<std::string>& tokens) {
  if (tokens.empty()) fail(ErrorCode::empty_phrase, "no tokens to tag");
  std::vector<PennTag> tags;
  tags.reserve(tokens.size());
  for (const auto& token : tokens) tags.push_back(tag_word(token));
  return tags;
}

ClassificationResult classify_tree(const SentimentModel& model,
                                   const SentimentTree& tree,
                                   const ClassifyOptions& options) {
  if (!model.loaded()) {
    fail(ErrorCode::model_not_loaded, "classification needs a model");
  }
  if (tree.empty()) fail(ErrorCode::empty_tree, "classification on an empty tree");
  ClassificationResult result;
  result.tree = tree.clone();
  forward(model, result.tree);
  result.five_dist = result.tree.root->dist;
  result.negative_mass =
      result.five_dist[static_cast<int>(FiveClass::very_negative)] +
      result.five_dist[static_cast<int>(FiveClass::negative)];
  Decision decision =
      decide_two_class(result.five_dist, options.threshold, options.mass_mode);
  result.two_class = decision.two_class;
  result.rule_fired = decision.rule;
  return result;
}

ClassificationResult classify_phrase(const SentimentModel& model,
                                     const std::string& text,
                                     const ClassifyOptions& options) {
  if (options.sexpr) {
    return classify_tree(model, read_tree(text), options);
  }
  std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) {
    fail(ErrorCode::empty_phrase, "phrase has no tokens: '" + text + "'");
  }
  return classify_tree(model, binarize(tokens), options);
}

std::string classify_batch(const SentimentModel& model,
                           const std::vector<std::string>& lines,
                           const ClassifyOptions& options, int threads) {
  std::vector<std::string> phrases;
  for (const auto& raw : lines) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    phrases.emplace_back(line);
  }
  std::vector<std::string> rows = parallel_map<std::string>(
      phrases.size(), threads, [&](size_t i) {
        ClassificationResult r = classify_phrase(model, phrases[i], options);
        nlohmann::json obj;
        obj["text"] = phrases[i];
        obj["two_class"] = two_class_token(r.two_class);
        obj["five_dist"] = {r.five_dist[0], r.five_dist[1], r.five_dist[2],
                            r.five_dist[3], r.five_dist[4]};
        obj["negative_mass"] = r.negative_mass;
        obj["rule_fired"] = rule_name(r.rule_fired);
        return obj.dump();
      });
  std::string out;
  for (const auto& row : rows) {
    out += row;
    out += '\n';
  }
  return out;
}

}  // namespace lexsent
