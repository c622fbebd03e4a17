#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace lexsent {

// Splits on whitespace, strips leading/trailing punctuation (ASCII plus the
// common UTF-8 quote/dash/ellipsis marks), lower-cases, drops empties.
std::vector<std::string> tokenize(std::string_view text);

class Stoplist {
 public:
  static Stoplist bundled();
  static Stoplist from_file(const std::string& path);
  static Stoplist parse(std::string_view content);

  bool contains(const std::string& word) const;
  size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const Stoplist& stoplist);

struct TermFrequencyTable {
  std::map<std::string, long long> entries;
  long long total_tokens = 0;

  void add(const std::string& word, long long count = 1);
  void merge(const TermFrequencyTable& other);
  static TermFrequencyTable from_tokens(const std::vector<std::string>& tokens);
};

enum class CutoffMode {
  mass,   // minimal prefix whose token mass reaches the coverage
  types,  // minimal prefix containing coverage of the unique types
};

struct VocabSelection {
  std::vector<std::string> words;           // descending count, lexicographic ties
  std::vector<long long> counts;            // parallel to words
  std::vector<double> cumulative_mass;      // cumulative token mass, parallel
  double coverage = 0.95;
  CutoffMode mode = CutoffMode::mass;
};

VocabSelection select_vocabulary(const TermFrequencyTable& tf,
                                 double coverage = 0.95,
                                 CutoffMode mode = CutoffMode::mass);

// Counts a single UTF-8 text file or every *.txt file in a directory
// (filename order), tokenizing and stop-filtering along the way.
TermFrequencyTable count_corpus(const std::string& path,
                                const Stoplist& stoplist);

// TSV: word<TAB>count<TAB>cumulative_mass, descending.
std::string vocab_to_tsv(const VocabSelection& selection);

// First column of a TSV (or a plain one-word-per-line file); '#' comments and
// blank lines skipped.
std::vector<std::string> load_word_list(const std::string& path);

}  // namespace lexsent
