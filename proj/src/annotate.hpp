#pragma once

#include <array>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "classes.hpp"

namespace lexsent {

// One annotated item (a word, or a quoted multi-token phrase) with the three
// judge labels and the majority-resolved class.
struct AnnotationRecord {
  std::string item;
  std::array<TwoClass, 3> judges{};
  TwoClass resolved = TwoClass::non_negative;
};

// With two classes and three judges a majority always exists.
TwoClass majority_vote(const std::vector<TwoClass>& labels);

std::vector<AnnotationRecord> parse_annotations(std::string_view content,
                                                const std::string& source);
std::vector<AnnotationRecord> load_annotations(const std::string& path);

std::string annotations_to_tsv(const std::vector<AnnotationRecord>& records);
void save_annotations(const std::vector<AnnotationRecord>& records,
                      const std::string& path);

// Case-folded item -> resolved class.
std::unordered_map<std::string, TwoClass> resolved_map(
    const std::vector<AnnotationRecord>& records);

}  // namespace lexsent
