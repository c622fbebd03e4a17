#include <doctest.h>

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"
#include "test_util.hpp"
#include "util.hpp"
#include "vocab.hpp"

using namespace lexsent;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

}  // namespace

TEST_CASE("tokenize splits, strips edge punctuation, and lower-cases") {
  CHECK(tokenize("Lee's counsel had performed deficiently.") ==
        std::vector<std::string>{"lee's", "counsel", "had", "performed",
                                 "deficiently"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("   \t\n ") == std::vector<std::string>{});
  CHECK(tokenize("…conceded that…") ==
        std::vector<std::string>{"conceded", "that"});
  CHECK(tokenize("“quoted” (parenthetical), trailing!!") ==
        std::vector<std::string>{"quoted", "parenthetical", "trailing"});
  // interior punctuation survives; pure punctuation tokens vanish
  CHECK(tokenize("rock-solid ... end-of-term") ==
        std::vector<std::string>{"rock-solid", "end-of-term"});
}

TEST_CASE("the bundled Van stop-list contains the classic function words") {
  Stoplist list = Stoplist::bundled();
  CHECK(list.size() > 100);
  for (const std::string w : {"the", "that", "was", "is", "a", "of", "and"}) {
    CAPTURE(w);
    CHECK(list.contains(w));
  }
  CHECK(!list.contains("court"));
  CHECK(!list.contains("insufficient"));
}

TEST_CASE("remove_stopwords filters case-insensitively and keeps order") {
  Stoplist list = Stoplist::bundled();
  CHECK(remove_stopwords({"the", "court", "concluded", "that"}, list) ==
        std::vector<std::string>{"court", "concluded"});
  CHECK(remove_stopwords({"court", "concluded"}, list) ==
        std::vector<std::string>{"court", "concluded"});
  CHECK(remove_stopwords({"the", "that", "of"}, list) ==
        std::vector<std::string>{});
}

TEST_CASE("stoplist files support comments and report missing paths") {
  Stoplist custom = Stoplist::parse("# comment\nalpha\n\nbeta\n");
  CHECK(custom.size() == 2);
  CHECK(custom.contains("alpha"));
  CHECK(custom.contains("beta"));
  CHECK(!custom.contains("# comment"));
  CHECK(code_of([] { Stoplist::from_file("/nonexistent/stoplist.txt"); }) ==
        ErrorCode::stoplist_missing);
}

TEST_CASE("select_vocabulary reproduces the hand-computed fixture") {
  TermFrequencyTable tf;
  tf.add("a", 50);
  tf.add("b", 30);
  tf.add("c", 15);
  tf.add("d", 4);
  tf.add("e", 1);
  VocabSelection sel = select_vocabulary(tf, 0.95, CutoffMode::mass);
  CHECK(sel.words == std::vector<std::string>{"a", "b", "c"});
  CHECK(sel.counts == std::vector<long long>{50, 30, 15});
  REQUIRE(sel.cumulative_mass.size() == 3);
  CHECK(sel.cumulative_mass[0] == doctest::Approx(0.50).epsilon(1e-15));
  CHECK(sel.cumulative_mass[1] == doctest::Approx(0.80).epsilon(1e-15));
  CHECK(sel.cumulative_mass[2] == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("select_vocabulary edge cases") {
  TermFrequencyTable tf;
  tf.add("only", 7);
  VocabSelection sel = select_vocabulary(tf, 0.5, CutoffMode::mass);
  CHECK(sel.words == std::vector<std::string>{"only"});

  TermFrequencyTable several;
  several.add("x", 3);
  several.add("y", 2);
  several.add("z", 1);
  CHECK(select_vocabulary(several, 1.0, CutoffMode::mass).words ==
        std::vector<std::string>{"x", "y", "z"});

  TermFrequencyTable empty;
  CHECK(code_of([&] { select_vocabulary(empty, 0.95); }) ==
        ErrorCode::empty_table);
  CHECK(code_of([&] { select_vocabulary(several, 0.0); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([&] { select_vocabulary(several, 1.5); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("frequency ties break lexicographically") {
  TermFrequencyTable tf;
  tf.add("zeta", 5);
  tf.add("alpha", 5);
  tf.add("mid", 5);
  VocabSelection sel = select_vocabulary(tf, 1.0, CutoffMode::mass);
  CHECK(sel.words == std::vector<std::string>{"alpha", "mid", "zeta"});
}

TEST_CASE("selection is invariant under input permutation") {
  const std::vector<std::pair<std::string, long long>> base = {
      {"p", 9}, {"q", 9}, {"r", 4}, {"s", 2}, {"t", 1}};
  DeterministicRng rng(17);
  std::vector<std::string> reference;
  for (int trial = 0; trial < 20; ++trial) {
    auto order = base;
    rng.shuffle(order);
    TermFrequencyTable tf;
    for (const auto& [w, c] : order) tf.add(w, c);
    VocabSelection sel = select_vocabulary(tf, 0.9, CutoffMode::mass);
    if (trial == 0) {
      reference = sel.words;
    } else {
      CHECK(sel.words == reference);
    }
  }
}

TEST_CASE("coverage and minimality hold on 1000 random tables") {
  DeterministicRng rng(97);
  for (int trial = 0; trial < 1000; ++trial) {
    TermFrequencyTable tf;
    int types = 1 + static_cast<int>(rng.next_below(12));
    for (int i = 0; i < types; ++i) {
      tf.add("w" + std::to_string(i), 1 + static_cast<long long>(rng.next_below(40)));
    }
    double coverage = 0.05 + 0.95 * rng.uniform01();
    VocabSelection sel = select_vocabulary(tf, coverage, CutoffMode::mass);
    REQUIRE(!sel.words.empty());
    double total = static_cast<double>(tf.total_tokens);
    double mass = 0.0;
    for (long long c : sel.counts) mass += static_cast<double>(c) / total;
    CAPTURE(trial);
    CAPTURE(coverage);
    CHECK(mass >= coverage - 1e-12);
    if (sel.words.size() > 1) {
      double without_last =
          mass - static_cast<double>(sel.counts.back()) / total;
      CHECK(without_last < coverage);
    }
    // the selection is a prefix of the canonical descending order
    for (size_t i = 1; i < sel.counts.size(); ++i) {
      bool ordered = sel.counts[i - 1] > sel.counts[i] ||
                     (sel.counts[i - 1] == sel.counts[i] &&
                      sel.words[i - 1] < sel.words[i]);
      CHECK(ordered);
    }
  }
}

TEST_CASE("types mode cuts on unique-type count instead of token mass") {
  TermFrequencyTable tf;
  tf.add("a", 50);
  tf.add("b", 30);
  tf.add("c", 15);
  tf.add("d", 4);
  tf.add("e", 1);
  CHECK(select_vocabulary(tf, 0.4, CutoffMode::types).words ==
        std::vector<std::string>{"a", "b"});
  CHECK(select_vocabulary(tf, 0.95, CutoffMode::types).words ==
        std::vector<std::string>{"a", "b", "c", "d", "e"});
  CHECK(select_vocabulary(tf, 0.2, CutoffMode::types).words ==
        std::vector<std::string>{"a"});
}

TEST_CASE("vocab_to_tsv renders the fixture selection exactly") {
  TermFrequencyTable tf;
  tf.add("a", 50);
  tf.add("b", 30);
  tf.add("c", 15);
  tf.add("d", 4);
  tf.add("e", 1);
  VocabSelection sel = select_vocabulary(tf, 0.95, CutoffMode::mass);
  CHECK(vocab_to_tsv(sel) ==
        "a\t50\t0.500000\nb\t30\t0.800000\nc\t15\t0.950000\n");
}

TEST_CASE("count_corpus tallies the fixture corpus after stop-filtering") {
  TermFrequencyTable tf =
      count_corpus(testutil::fixtures_dir() + "/target_corpus",
                   Stoplist::bundled());
  CHECK(tf.entries.size() == 30);  // 24 mains + 6 rare tails
  CHECK(tf.entries.at("insufficient") == 5);
  CHECK(tf.entries.at("evidence") == 5);
  CHECK(tf.entries.at("hereinafter") == 1);
  CHECK(tf.entries.count("the") == 0);
  CHECK(tf.total_tokens == 24 * 5 + 6);

  // single-file input works too
  TermFrequencyTable one = count_corpus(
      testutil::fixtures_dir() + "/target_corpus/opinions_a.txt",
      Stoplist::bundled());
  CHECK(one.total_tokens < tf.total_tokens);
  CHECK(one.entries.at("evidence") == 5);
  CHECK(code_of([] {
          count_corpus("/nonexistent/corpus", Stoplist::bundled());
        }) == ErrorCode::io_error);
}

TEST_CASE("no stop-word survives the full selection pipeline") {
  Stoplist stoplist = Stoplist::bundled();
  TermFrequencyTable tf =
      count_corpus(testutil::fixtures_dir() + "/target_corpus", stoplist);
  VocabSelection sel = select_vocabulary(tf, 1.0, CutoffMode::mass);
  for (const auto& w : sel.words) {
    CAPTURE(w);
    CHECK(!stoplist.contains(w));
  }
}

TEST_CASE("load_word_list reads the first TSV column") {
  testutil::TempDir tmp;
  std::string path = tmp.file("words.tsv");
  write_file(path, "# header\nalpha\t5\t0.5\nbeta\t3\t0.8\n\ngamma\n");
  CHECK(load_word_list(path) ==
        std::vector<std::string>{"alpha", "beta", "gamma"});
}
