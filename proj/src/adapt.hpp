#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "annotate.hpp"
#include "classes.hpp"
#include "model.hpp"

namespace lexsent {

// The 14 tags of the donor table; anything else is carried as `other` with
// its original text.
enum class TagKind : int {
  JJ, JJR, JJS,
  NN, NNS,
  RB, RBR, RBS,
  VB, VBZ, VBP, VBD, VBN, VBG,
  other,
};

struct PennTag {
  TagKind kind = TagKind::other;
  std::string raw;  // original text for `other`; canonical text otherwise

  static PennTag parse(std::string_view text);
  const std::string& str() const { return raw; }
  bool in_table() const { return kind != TagKind::other; }

  bool operator==(const PennTag& o) const {
    return kind == o.kind && (kind != TagKind::other || raw == o.raw);
  }
};

// (POS tag, target sentiment) -> donor word. Target is the word's ACTUAL
// (human-resolved) class: Negative selects a negative-sentiment donor,
// NonNegative a neutral one.
class DonorTable {
 public:
  static DonorTable standard();
  // TSV: pos<TAB>target_class<TAB>donor; must define every (tag, class) cell.
  static DonorTable from_file(const std::string& path);
  static DonorTable parse(std::string_view content, const std::string& source);

  const std::string& donor(const PennTag& pos, TwoClass target) const;
  bool has(const PennTag& pos) const;
  size_t size() const { return cells_.size(); }

  std::string to_tsv() const;

 private:
  std::unordered_map<int, std::string> cells_;  // key = kind * 2 + class
};

struct DeviationEntry {
  std::string word;
  TwoClass model_class = TwoClass::non_negative;
  TwoClass actual_class = TwoClass::negative;
  PennTag pos;
  std::string donor;
};

struct SkippedWord {
  std::string word;
  PennTag pos;
};

struct DeviationReport {
  std::vector<DeviationEntry> entries;
  std::vector<SkippedWord> skipped;  // deviated, but tag has no table row
};

// Two-class sentiment the model assigns to a single word: forward a one-leaf
// tree, argmax the root distribution (lowest index wins), map to two classes.
TwoClass model_word_class(const SentimentModel& model, const std::string& word);

using TagMap = std::unordered_map<std::string, PennTag>;

DeviationReport detect_deviations(const std::vector<std::string>& vocab,
                                  const SentimentModel& model,
                                  const std::vector<AnnotationRecord>& gold,
                                  const TagMap& tags, const DonorTable& table,
                                  int threads = 1);

// Fresh model in which each deviated word's embedding row is a copy of its
// donor's row (the word is added to the vocabulary first when OOV). Every
// other row and all of V, W, b, Ws, bs are left untouched.
SentimentModel substitute_vectors(const SentimentModel& model,
                                  const std::vector<DeviationEntry>& deviations);

// TSV: word<TAB>model_class<TAB>actual_class<TAB>pos<TAB>donor.
std::string deviations_to_tsv(const std::vector<DeviationEntry>& entries);
std::vector<DeviationEntry> parse_deviations(std::string_view content,
                                             const std::string& source);
std::vector<DeviationEntry> load_deviations(const std::string& path);

std::string skipped_to_text(const std::vector<SkippedWord>& skipped);

// TSV: word<TAB>tag (flat) or blank-line-separated phrase blocks; the first
// tag seen for a word wins.
TagMap parse_tag_map(std::string_view content, const std::string& source);
TagMap load_tag_map(const std::string& path);

}  // namespace lexsent
