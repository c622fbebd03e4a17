#include "vocab.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>

#include "errors.hpp"
#include "util.hpp"

#include <stoplist_data.hpp>

namespace lexsent {

namespace {

// Multi-byte punctuation worth stripping at token edges.
const char* const kWidePunct[] = {
    "…",  // …
    "“",  // “
    "”",  // ”
    "‘",  // ‘
    "’",  // ’
    "—",  // —
    "–",  // –
    "«",  // «
    "»",  // »
};

size_t punct_prefix_len(std::string_view token) {
  if (token.empty()) return 0;
  unsigned char head = static_cast<unsigned char>(token.front());
  if (head < 0x80) {
    return std::ispunct(head) ? 1 : 0;
  }
  for (const char* mark : kWidePunct) {
    std::string_view m(mark);
    if (token.substr(0, m.size()) == m) return m.size();
  }
  return 0;
}

size_t punct_suffix_len(std::string_view token) {
  if (token.empty()) return 0;
  unsigned char tail = static_cast<unsigned char>(token.back());
  if (tail < 0x80) {
    return std::ispunct(tail) ? 1 : 0;
  }
  for (const char* mark : kWidePunct) {
    std::string_view m(mark);
    if (token.size() >= m.size() &&
        token.substr(token.size() - m.size()) == m) {
      return m.size();
    }
  }
  return 0;
}

std::string_view strip_punct(std::string_view token) {
  while (true) {
    size_t n = punct_prefix_len(token);
    if (n == 0) break;
    token.remove_prefix(n);
  }
  while (true) {
    size_t n = punct_suffix_len(token);
    if (n == 0) break;
    token.remove_suffix(n);
  }
  return token;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    size_t start = i;
    while (i < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i == start) continue;
    std::string_view word = strip_punct(text.substr(start, i - start));
    if (!word.empty()) tokens.push_back(to_lower(word));
  }
  return tokens;
}

Stoplist Stoplist::parse(std::string_view content) {
  Stoplist list;
  for (const auto& raw : split(content, '\n')) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    list.words_.insert(to_lower(line));
  }
  return list;
}

Stoplist Stoplist::bundled() { return parse(detail::kVanStoplist); }

Stoplist Stoplist::from_file(const std::string& path) {
  std::string content;
  try {
    content = read_file(path);
  } catch (const Error&) {
    fail(ErrorCode::stoplist_missing, "cannot read stop-list file: " + path);
  }
  return parse(content);
}

bool Stoplist::contains(const std::string& word) const {
  return words_.count(to_lower(word)) > 0;
}

std::vector<std::string> remove_stopwords(
    const std::vector<std::string>& tokens, const Stoplist& stoplist) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (!stoplist.contains(token)) kept.push_back(token);
  }
  return kept;
}

void TermFrequencyTable::add(const std::string& word, long long count) {
  if (count < 0) fail(ErrorCode::invalid_argument, "negative count");
  entries[word] += count;
  total_tokens += count;
}

void TermFrequencyTable::merge(const TermFrequencyTable& other) {
  for (const auto& [word, count] : other.entries) entries[word] += count;
  total_tokens += other.total_tokens;
}

TermFrequencyTable TermFrequencyTable::from_tokens(
    const std::vector<std::string>& tokens) {
  TermFrequencyTable tf;
  for (const auto& token : tokens) tf.add(token);
  return tf;
}

VocabSelection select_vocabulary(const TermFrequencyTable& tf, double coverage,
                                 CutoffMode mode) {
  if (!(coverage > 0.0 && coverage <= 1.0)) {
    fail(ErrorCode::invalid_argument,
         "coverage must be in (0, 1], got " + std::to_string(coverage));
  }
  if (tf.entries.empty() || tf.total_tokens <= 0) {
    fail(ErrorCode::empty_table, "term frequency table is empty");
  }
  std::vector<std::pair<std::string, long long>> ranked(tf.entries.begin(),
                                                        tf.entries.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  VocabSelection out;
  out.coverage = coverage;
  out.mode = mode;
  long long cumulative = 0;
  const double total = static_cast<double>(tf.total_tokens);
  const double types = static_cast<double>(ranked.size());
  for (size_t i = 0; i < ranked.size(); ++i) {
    cumulative += ranked[i].second;
    out.words.push_back(ranked[i].first);
    out.counts.push_back(ranked[i].second);
    out.cumulative_mass.push_back(static_cast<double>(cumulative) / total);
    bool reached = mode == CutoffMode::mass
                       ? out.cumulative_mass.back() >= coverage
                       : static_cast<double>(i + 1) / types >= coverage;
    if (reached) break;
  }
  return out;
}

TermFrequencyTable count_corpus(const std::string& path,
                                const Stoplist& stoplist) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path, ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path().string());
      }
    }
    if (ec) fail(ErrorCode::io_error, "cannot list corpus directory: " + path);
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      fail(ErrorCode::io_error, "no .txt files in corpus directory: " + path);
    }
  } else {
    files.push_back(path);
  }
  TermFrequencyTable tf;
  for (const auto& file : files) {
    std::vector<std::string> tokens =
        remove_stopwords(tokenize(read_file(file)), stoplist);
    for (const auto& token : tokens) tf.add(token);
  }
  return tf;
}

std::string vocab_to_tsv(const VocabSelection& selection) {
  std::string out;
  char buf[64];
  for (size_t i = 0; i < selection.words.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%lld\t%.6f",
                  selection.counts[i], selection.cumulative_mass[i]);
    out += selection.words[i];
    out += '\t';
    out += buf;
    out += '\n';
  }
  return out;
}

std::vector<std::string> load_word_list(const std::string& path) {
  std::vector<std::string> words;
  for (const auto& raw : split(read_file(path), '\n')) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    size_t tab = line.find('\t');
    if (tab != std::string_view::npos) line = line.substr(0, tab);
    words.emplace_back(trim(line));
  }
  return words;
}

}  // namespace lexsent
