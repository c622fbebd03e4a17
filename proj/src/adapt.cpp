#include "adapt.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <unordered_set>

#include "errors.hpp"
#include "util.hpp"

namespace lexsent {

namespace {

constexpr std::array<const char*, 14> kTagNames = {
    "JJ", "JJR", "JJS", "NN", "NNS", "RB", "RBR",
    "RBS", "VB", "VBZ", "VBP", "VBD", "VBN", "VBG"};

int cell_key(TagKind kind, TwoClass target) {
  return static_cast<int>(kind) * 2 + static_cast<int>(target);
}

}  // namespace

PennTag PennTag::parse(std::string_view text) {
  std::string_view tag = trim(text);
  PennTag out;
  out.raw = std::string(tag);
  for (size_t i = 0; i < kTagNames.size(); ++i) {
    if (tag == kTagNames[i]) {
      out.kind = static_cast<TagKind>(i);
      return out;
    }
  }
  out.kind = TagKind::other;
  return out;
}

DonorTable DonorTable::standard() {
  // Negative targets take negative-sentiment donors, non-negative targets the
  // neutral fillers; adverb grades share a donor pair, as do VB/VBP.
  struct Row {
    TagKind tag;
    const char* negative;
    const char* non_negative;
  };
  static const Row rows[] = {
      {TagKind::JJ, "wrong", "natural"},
      {TagKind::JJR, "worse", "natural"},
      {TagKind::JJS, "worst", "natural"},
      {TagKind::NN, "failure", "thing"},
      {TagKind::NNS, "politics", "things"},
      {TagKind::RB, "insufficiently", "naturally"},
      {TagKind::RBR, "insufficiently", "naturally"},
      {TagKind::RBS, "insufficiently", "naturally"},
      {TagKind::VB, "hate", "do"},
      {TagKind::VBZ, "hates", "does"},
      {TagKind::VBP, "hate", "do"},
      {TagKind::VBD, "hated", "did"},
      {TagKind::VBN, "bored", "given"},
      {TagKind::VBG, "ignoring", "doing"},
  };
  DonorTable table;
  for (const Row& row : rows) {
    table.cells_[cell_key(row.tag, TwoClass::negative)] = row.negative;
    table.cells_[cell_key(row.tag, TwoClass::non_negative)] = row.non_negative;
  }
  return table;
}

DonorTable DonorTable::parse(std::string_view content,
                             const std::string& source) {
  DonorTable table;
  int line_no = 0;
  for (const auto& raw : split(content, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::string where = "at " + source + ":" + std::to_string(line_no);
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 3) {
      fail(ErrorCode::parse_error,
           "expected pos<TAB>target_class<TAB>donor " + where);
    }
    PennTag tag = PennTag::parse(fields[0]);
    if (!tag.in_table()) {
      fail(ErrorCode::parse_error,
           "unknown donor-table tag '" + fields[0] + "' " + where);
    }
    TwoClass target = parse_two_class(trim(fields[1]), where);
    std::string donor = to_lower(trim(fields[2]));
    if (donor.empty()) fail(ErrorCode::parse_error, "empty donor " + where);
    table.cells_[cell_key(tag.kind, target)] = donor;
  }
  if (table.cells_.empty()) {
    fail(ErrorCode::empty_table, "donor table file has no rows: " + source);
  }
  for (size_t i = 0; i < kTagNames.size(); ++i) {
    for (TwoClass target : {TwoClass::negative, TwoClass::non_negative}) {
      if (!table.cells_.count(cell_key(static_cast<TagKind>(i), target))) {
        fail(ErrorCode::parse_error,
             std::string("donor table is missing the (") + kTagNames[i] +
                 ", " + two_class_token(target) + ") cell: " + source);
      }
    }
  }
  return table;
}

DonorTable DonorTable::from_file(const std::string& path) {
  return parse(read_file(path), path);
}

const std::string& DonorTable::donor(const PennTag& pos,
                                     TwoClass target) const {
  auto it = cells_.find(cell_key(pos.kind, target));
  if (pos.kind == TagKind::other || it == cells_.end()) {
    fail(ErrorCode::no_donor_for_tag,
         "no donor for tag '" + pos.str() + "'");
  }
  return it->second;
}

bool DonorTable::has(const PennTag& pos) const {
  return pos.kind != TagKind::other &&
         cells_.count(cell_key(pos.kind, TwoClass::negative)) > 0;
}

std::string DonorTable::to_tsv() const {
  std::string out;
  for (size_t i = 0; i < kTagNames.size(); ++i) {
    for (TwoClass target : {TwoClass::negative, TwoClass::non_negative}) {
      auto it = cells_.find(cell_key(static_cast<TagKind>(i), target));
      if (it == cells_.end()) continue;
      out += kTagNames[i];
      out += '\t';
      out += two_class_token(target);
      out += '\t';
      out += it->second;
      out += '\n';
    }
  }
  return out;
}

TwoClass model_word_class(const SentimentModel& model,
                          const std::string& word) {
  SentimentTree tree = make_leaf(word);
  forward(model, tree);
  return map_five_to_two(argmax_class(tree.root->dist));
}

DeviationReport detect_deviations(const std::vector<std::string>& vocab,
                                  const SentimentModel& model,
                                  const std::vector<AnnotationRecord>& gold,
                                  const TagMap& tags, const DonorTable& table,
                                  int threads) {
  if (!model.loaded()) {
    fail(ErrorCode::model_not_loaded, "deviation detection needs a model");
  }
  std::unordered_map<std::string, TwoClass> resolved = resolved_map(gold);
  struct WordCase {
    std::string word;
    TwoClass actual;
    PennTag pos;
  };
  std::vector<WordCase> cases;
  cases.reserve(vocab.size());
  for (const auto& raw_word : vocab) {
    std::string word = to_lower(raw_word);
    auto gold_it = resolved.find(word);
    if (gold_it == resolved.end()) {
      fail(ErrorCode::missing_gold, "no annotation for word '" + word + "'");
    }
    auto tag_it = tags.find(word);
    if (tag_it == tags.end()) {
      fail(ErrorCode::missing_tag, "no POS tag for word '" + word + "'");
    }
    cases.push_back({word, gold_it->second, tag_it->second});
  }

  std::vector<TwoClass> predicted = parallel_map<TwoClass>(
      cases.size(), threads,
      [&](size_t i) { return model_word_class(model, cases[i].word); });

  DeviationReport report;
  for (size_t i = 0; i < cases.size(); ++i) {
    const WordCase& wc = cases[i];
    if (predicted[i] == wc.actual) continue;
    if (!table.has(wc.pos)) {
      report.skipped.push_back({wc.word, wc.pos});
      continue;
    }
    DeviationEntry entry;
    entry.word = wc.word;
    entry.model_class = predicted[i];
    entry.actual_class = wc.actual;
    entry.pos = wc.pos;
    entry.donor = table.donor(wc.pos, wc.actual);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

SentimentModel substitute_vectors(
    const SentimentModel& model,
    const std::vector<DeviationEntry>& deviations) {
  if (!model.loaded()) {
    fail(ErrorCode::model_not_loaded, "substitution needs a model");
  }
  std::unordered_set<std::string> seen;
  for (const auto& entry : deviations) {
    if (!seen.insert(model.normalize(entry.word)).second) {
      fail(ErrorCode::duplicate_deviation,
           "word '" + entry.word + "' appears twice in the deviation list");
    }
  }
  SentimentModel adapted = model;
  for (const auto& entry : deviations) {
    auto donor_row = adapted.find(entry.donor);
    if (!donor_row) {
      fail(ErrorCode::donor_missing,
           "donor word '" + entry.donor + "' for '" + entry.word +
               "' is not in the model vocabulary");
    }
    Eigen::VectorXd vector = adapted.embeddings.row(*donor_row).transpose();
    if (auto row = adapted.find(entry.word)) {
      adapted.embeddings.row(*row) = vector.transpose();
    } else {
      adapted.add_word(entry.word, vector);
    }
  }
  return adapted;
}

std::string deviations_to_tsv(const std::vector<DeviationEntry>& entries) {
  std::string out;
  for (const auto& entry : entries) {
    out += entry.word;
    out += '\t';
    out += two_class_token(entry.model_class);
    out += '\t';
    out += two_class_token(entry.actual_class);
    out += '\t';
    out += entry.pos.str();
    out += '\t';
    out += entry.donor;
    out += '\n';
  }
  return out;
}

std::vector<DeviationEntry> parse_deviations(std::string_view content,
                                             const std::string& source) {
  std::vector<DeviationEntry> entries;
  std::unordered_set<std::string> seen;
  int line_no = 0;
  for (const auto& raw : split(content, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::string where = "at " + source + ":" + std::to_string(line_no);
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 5) {
      fail(ErrorCode::parse_error,
           "expected word<TAB>model_class<TAB>actual_class<TAB>pos<TAB>donor " +
               where);
    }
    DeviationEntry entry;
    entry.word = to_lower(trim(fields[0]));
    entry.model_class = parse_two_class(trim(fields[1]), where);
    entry.actual_class = parse_two_class(trim(fields[2]), where);
    entry.pos = PennTag::parse(fields[3]);
    entry.donor = to_lower(trim(fields[4]));
    if (entry.word.empty() || entry.donor.empty()) {
      fail(ErrorCode::parse_error, "empty word or donor " + where);
    }
    if (entry.model_class == entry.actual_class) {
      fail(ErrorCode::parse_error,
           "model class equals actual class for '" + entry.word + "' " + where);
    }
    if (!seen.insert(entry.word).second) {
      fail(ErrorCode::duplicate_deviation,
           "duplicate deviation for '" + entry.word + "' " + where);
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<DeviationEntry> load_deviations(const std::string& path) {
  return parse_deviations(read_file(path), path);
}

std::string skipped_to_text(const std::vector<SkippedWord>& skipped) {
  std::string out;
  for (const auto& item : skipped) {
    out += item.word;
    out += '\t';
    out += item.pos.str();
    out += '\n';
  }
  return out;
}

TagMap parse_tag_map(std::string_view content, const std::string& source) {
  TagMap tags;
  int line_no = 0;
  for (const auto& raw : split(content, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::string where = "at " + source + ":" + std::to_string(line_no);
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 2) {
      fail(ErrorCode::parse_error, "expected token<TAB>tag " + where);
    }
    std::string word = to_lower(trim(fields[0]));
    if (word.empty()) fail(ErrorCode::parse_error, "empty token " + where);
    tags.emplace(word, PennTag::parse(fields[1]));  // first tag wins
  }
  return tags;
}

TagMap load_tag_map(const std::string& path) {
  return parse_tag_map(read_file(path), path);
}

}  // namespace lexsent
