#include "annotate.hpp"

#include <unordered_set>

#include "errors.hpp"
#include "util.hpp"

namespace lexsent {

namespace {

std::string unquote(std::string_view item) {
  if (item.size() >= 2 && item.front() == '"' && item.back() == '"') {
    return std::string(item.substr(1, item.size() - 2));
  }
  return std::string(item);
}

std::string quote_if_needed(const std::string& item) {
  if (item.find_first_of(" \t") != std::string::npos) {
    return '"' + item + '"';
  }
  return item;
}

}  // namespace

TwoClass majority_vote(const std::vector<TwoClass>& labels) {
  if (labels.size() != 3) {
    fail(ErrorCode::wrong_judge_count,
         "expected exactly 3 judge labels, got " +
             std::to_string(labels.size()));
  }
  int negatives = 0;
  for (TwoClass label : labels) {
    if (label == TwoClass::negative) ++negatives;
  }
  return negatives >= 2 ? TwoClass::negative : TwoClass::non_negative;
}

std::vector<AnnotationRecord> parse_annotations(std::string_view content,
                                                const std::string& source) {
  std::vector<AnnotationRecord> records;
  std::unordered_set<std::string> seen;
  int line_no = 0;
  for (const auto& raw : split(content, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::string where = "at " + source + ":" + std::to_string(line_no);
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() == 1) {
      fail(ErrorCode::parse_error, "no tab-separated fields " + where);
    }
    if (fields.size() != 4) {
      fail(ErrorCode::wrong_judge_count,
           "expected item + 3 judge labels, got " +
               std::to_string(fields.size() - 1) + " labels " + where);
    }
    AnnotationRecord record;
    record.item = unquote(trim(fields[0]));
    if (record.item.empty()) {
      fail(ErrorCode::parse_error, "empty item " + where);
    }
    std::vector<TwoClass> labels;
    for (int j = 1; j <= 3; ++j) {
      labels.push_back(parse_two_class(trim(fields[j]), where));
    }
    std::copy(labels.begin(), labels.end(), record.judges.begin());
    record.resolved = majority_vote(labels);
    std::string key = to_lower(record.item);
    if (!seen.insert(key).second) {
      fail(ErrorCode::duplicate_word,
           "duplicate annotation for '" + record.item + "' " + where);
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<AnnotationRecord> load_annotations(const std::string& path) {
  return parse_annotations(read_file(path), path);
}

std::string annotations_to_tsv(const std::vector<AnnotationRecord>& records) {
  std::string out;
  for (const auto& record : records) {
    out += quote_if_needed(record.item);
    for (TwoClass label : record.judges) {
      out += '\t';
      out += two_class_token(label);
    }
    out += '\n';
  }
  return out;
}

void save_annotations(const std::vector<AnnotationRecord>& records,
                      const std::string& path) {
  write_file(path, annotations_to_tsv(records));
}

std::unordered_map<std::string, TwoClass> resolved_map(
    const std::vector<AnnotationRecord>& records) {
  std::unordered_map<std::string, TwoClass> out;
  for (const auto& record : records) {
    out.emplace(to_lower(record.item), record.resolved);
  }
  return out;
}

}  // namespace lexsent
