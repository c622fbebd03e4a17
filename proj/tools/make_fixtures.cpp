// Generates the bundled toy transfer fixtures: a synthetic "movie review"
// source treebank, a synthetic "legal" target corpus with judge annotations
// and POS tags, and a gold phrase testset. With --check it also runs the
// whole pipeline in-process and verifies every property the fixtures are
// supposed to guarantee, printing a per-phrase trace.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "adapt.hpp"
#include "annotate.hpp"
#include "classify.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "model.hpp"
#include "trainer.hpp"
#include "tree.hpp"
#include "util.hpp"
#include "vocab.hpp"

namespace {

using namespace lexsent;

struct Pred {
  std::string word;
  int label;
};

std::string leaf(int c, const std::string& w) {
  return "(" + std::to_string(c) + " " + w + ")";
}
std::string node(int c, const std::string& l, const std::string& r) {
  return "(" + std::to_string(c) + " " + l + " " + r + ")";
}

int intensify(int c) {
  if (c == 1) return 0;
  if (c == 3) return 4;
  return c;  // neutral stays neutral, extremes stay put
}
int negate(int c) {
  if (c <= 1) return 3;
  if (c >= 3) return 1;
  return 2;
}

// ---------------------------------------------------------------- source --

std::vector<std::string> source_treebank() {
  std::vector<std::string> lines;

  const std::vector<Pred> negative_words = {
      {"wrong", 1},  {"worse", 1},   {"worst", 1},          {"failure", 1},
      {"politics", 1}, {"hate", 1},  {"hates", 1},          {"hated", 1},
      {"bored", 1},  {"ignoring", 1}, {"insufficiently", 1}, {"sentence", 1},
      {"motion", 1}};
  const std::vector<Pred> neutral_words = {
      {"natural", 2}, {"thing", 2}, {"things", 2}, {"naturally", 2},
      {"do", 2},      {"does", 2},  {"did", 2},    {"given", 2},
      {"doing", 2},   {"done", 2}};
  const std::vector<Pred> positive_words = {{"charged", 3}, {"good", 3},
                                            {"great", 3},   {"love", 3},
                                            {"better", 3},  {"best", 4}};
  const std::vector<std::string> glue = {"the", "a",  "movie", "film",
                                         "plot", "story", "acting", "was",
                                         "is",  "it", "not",   "very",
                                         "they"};

  // Single-leaf anchors.
  for (const auto& pool : {negative_words, neutral_words, positive_words}) {
    for (const auto& w : pool) {
      for (int i = 0; i < 4; ++i) lines.push_back(leaf(w.label, w.word));
    }
  }
  for (const auto& g : glue) {
    for (int i = 0; i < 2; ++i) lines.push_back(leaf(2, g));
  }
  for (const auto& w : std::vector<Pred>{{"charged", 3}, {"sentence", 1},
                                         {"motion", 1},  {"thing", 2},
                                         {"wrong", 1}}) {
    for (int i = 0; i < 4; ++i) lines.push_back(leaf(w.label, w.word));
  }

  // Copula frames: the <subject> was/is <predicate>.
  const std::vector<Pred> predicates = {
      {"wrong", 1},  {"worse", 1},  {"worst", 1},  {"failure", 1},
      {"politics", 1}, {"bored", 1}, {"hated", 1},  {"ignoring", 1},
      {"natural", 2}, {"thing", 2}, {"things", 2}, {"given", 2},
      {"doing", 2},  {"charged", 3}, {"good", 3},  {"great", 3},
      {"better", 3}, {"best", 4}};
  const std::vector<std::string> subjects = {"movie", "film",   "plot",
                                             "story", "acting", "thing"};
  for (const auto& s : subjects) {
    for (const auto& p : predicates) {
      for (const std::string cop : {"was", "is"}) {
        int r = p.label;
        lines.push_back(node(
            r, leaf(2, "the"),
            node(r, leaf(2, s), node(r, leaf(2, cop), leaf(p.label, p.word)))));
      }
    }
  }

  // Intensified and negated predicates inside frames.
  for (const std::string s : {"movie", "thing"}) {
    for (const auto& p : predicates) {
      int iv = intensify(p.label);
      lines.push_back(node(
          iv, leaf(2, "the"),
          node(iv, leaf(2, s),
               node(iv, leaf(2, "was"),
                    node(iv, leaf(2, "very"), leaf(p.label, p.word))))));
      int nv = negate(p.label);
      lines.push_back(node(
          nv, leaf(2, "the"),
          node(nv, leaf(2, s),
               node(nv, leaf(2, "was"),
                    node(nv, leaf(2, "not"), leaf(p.label, p.word))))));
    }
  }

  // Bare modifier pairs.
  for (const auto& p : predicates) {
    lines.push_back(node(intensify(p.label), leaf(2, "very"),
                         leaf(p.label, p.word)));
    lines.push_back(node(negate(p.label), leaf(2, "not"),
                         leaf(p.label, p.word)));
  }

  // Noun phrases: the/a <noun>.
  const std::vector<Pred> nouns = {
      {"failure", 1}, {"politics", 1}, {"thing", 2}, {"things", 2},
      {"movie", 2},   {"film", 2},     {"sentence", 1}, {"motion", 1},
      {"plot", 2},    {"story", 2}};
  for (const auto& n : nouns) {
    for (int i = 0; i < 3; ++i) {
      lines.push_back(node(n.label, leaf(2, "the"), leaf(n.label, n.word)));
    }
    lines.push_back(node(n.label, leaf(2, "a"), leaf(n.label, n.word)));
  }

  // Negative nouns with negative predicates.
  for (const std::string n : {"sentence", "motion"}) {
    for (const std::string p : {"hated", "bored"}) {
      lines.push_back(node(
          1, leaf(2, "the"),
          node(1, leaf(1, n), node(1, leaf(2, "was"), leaf(1, p)))));
    }
  }

  // Verb frames: they <verb> it.
  const std::vector<Pred> verbs = {{"do", 2},   {"does", 2}, {"did", 2},
                                   {"hate", 1}, {"hates", 1}, {"love", 3}};
  for (const auto& v : verbs) {
    for (int i = 0; i < 2; ++i) {
      lines.push_back(node(v.label, leaf(2, "they"),
                           node(v.label, leaf(v.label, v.word), leaf(2, "it"))));
    }
  }

  // Adverb pairs.
  for (int i = 0; i < 3; ++i) {
    lines.push_back(node(1, leaf(2, "done"), leaf(1, "insufficiently")));
    lines.push_back(node(2, leaf(2, "done"), leaf(2, "naturally")));
  }

  return lines;
}

// ---------------------------------------------------------------- target --

const std::vector<std::string> kNounMains = {
    "evidence", "court",  "judge",   "jury",     "claim",
    "case",     "appeal", "contract", "verdict", "counsel",
    "fraud",    "breach", "felony",  "sentence", "motion"};
const std::vector<std::string> kAdjMains = {"insufficient", "guilty",
                                            "unlawful", "negligent", "invalid"};
const std::vector<std::string> kVerbMains = {"convicted", "objected",
                                             "charged"};
const std::vector<std::string> kTails = {"hereinafter",    "notwithstanding",
                                         "pursuant",       "thereof",
                                         "thereunder",     "aforementioned"};

std::vector<std::string> all_mains() {
  std::vector<std::string> mains;
  mains.insert(mains.end(), kNounMains.begin(), kNounMains.end());
  mains.insert(mains.end(), kAdjMains.begin(), kAdjMains.end());
  mains.insert(mains.end(), kVerbMains.begin(), kVerbMains.end());
  mains.push_back("violations");
  std::sort(mains.begin(), mains.end());
  return mains;
}

std::pair<std::string, std::string> target_corpus_files() {
  std::string file_a;  // the noun sentences
  for (const auto& w : kNounMains) {
    file_a += "the " + w + " was there.\n";
    file_a += "it was the " + w + ".\n";
    file_a += "this is the " + w + ".\n";
    file_a += "they had the " + w + ".\n";
    file_a += "the " + w + " was in it.\n";
  }
  std::string file_b;  // adjectives, participles, plurals, rare tails
  for (const auto& w : kAdjMains) {
    file_b += "it was " + w + ".\n";
    file_b += "this is " + w + ".\n";
    file_b += "that was " + w + ".\n";
    file_b += "it is " + w + ".\n";
    file_b += "so it was " + w + ".\n";
  }
  for (const auto& w : kVerbMains) {
    file_b += "he was " + w + ".\n";
    file_b += "it was " + w + ".\n";
    file_b += "they were " + w + ".\n";
    file_b += "she was " + w + ".\n";
    file_b += "that was " + w + ".\n";
  }
  file_b += "the violations were there.\n";
  file_b += "it was the violations.\n";
  file_b += "these are the violations.\n";
  file_b += "they had the violations.\n";
  file_b += "the violations were in it.\n";
  for (const auto& w : kTails) {
    file_b += w + " it was so.\n";
  }
  return {file_a, file_b};
}

std::string annotations_tsv() {
  // word, three judge labels
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"appeal", "nonneg\tneg\tnonneg"},
      {"breach", "neg\tneg\tnonneg"},
      {"case", "nonneg\tnonneg\tnonneg"},
      {"charged", "neg\tneg\tneg"},
      {"claim", "nonneg\tnonneg\tneg"},
      {"contract", "nonneg\tnonneg\tnonneg"},
      {"convicted", "neg\tneg\tneg"},
      {"counsel", "nonneg\tnonneg\tnonneg"},
      {"court", "nonneg\tnonneg\tnonneg"},
      {"evidence", "nonneg\tnonneg\tnonneg"},
      {"felony", "neg\tneg\tneg"},
      {"fraud", "neg\tneg\tneg"},
      {"guilty", "neg\tneg\tnonneg"},
      {"insufficient", "neg\tneg\tneg"},
      {"invalid", "neg\tneg\tneg"},
      {"judge", "nonneg\tneg\tnonneg"},
      {"jury", "nonneg\tnonneg\tnonneg"},
      {"motion", "nonneg\tnonneg\tneg"},
      {"negligent", "neg\tnonneg\tneg"},
      {"objected", "neg\tneg\tnonneg"},
      {"sentence", "nonneg\tnonneg\tnonneg"},
      {"unlawful", "neg\tneg\tneg"},
      {"verdict", "nonneg\tnonneg\tnonneg"},
      {"violations", "neg\tnonneg\tneg"},
  };
  std::string out = "# word judge1 judge2 judge3\n";
  for (const auto& [word, labels] : rows) out += word + "\t" + labels + "\n";
  return out;
}

std::string tags_tsv() {
  std::string out = "# word tag\n";
  for (const auto& w : kNounMains) out += w + "\tNN\n";
  for (const auto& w : kAdjMains) out += w + "\tJJ\n";
  out += "convicted\tVBN\n";
  out += "objected\tVBD\n";
  out += "charged\tVBN\n";
  out += "violations\tNNS\n";
  return out;
}

struct TestPhrase {
  std::string text;
  std::string judges;  // tab-joined
};

std::vector<TestPhrase> testset() {
  return {
      // gold negative, containing a deviated word
      {"the evidence was insufficient", "neg\tneg\tneg"},
      {"the claim is insufficient", "neg\tneg\tnonneg"},
      {"it was insufficient", "neg\tneg\tneg"},
      {"the defendant was guilty", "neg\tneg\tneg"},
      {"the conduct was unlawful", "neg\tneg\tneg"},
      {"the act was unlawful", "neg\tneg\tneg"},
      {"the agreement was invalid", "neg\tneg\tneg"},
      {"the contract was invalid", "neg\tnonneg\tneg"},
      {"the counsel was negligent", "neg\tneg\tneg"},
      {"the act was negligent", "neg\tneg\tneg"},
      {"the fraud", "neg\tneg\tneg"},
      {"it was fraud", "neg\tneg\tneg"},
      {"the breach", "neg\tneg\tnonneg"},
      {"the felony", "neg\tneg\tneg"},
      {"the violations", "neg\tneg\tneg"},
      {"the defendant was convicted", "neg\tneg\tneg"},
      {"the appellant was convicted", "neg\tneg\tneg"},
      {"it was objected", "neg\tneg\tnonneg"},
      {"the defendant was charged", "neg\tneg\tneg"},
      {"the man was charged", "neg\tneg\tneg"},
      // gold non-negative, containing a deviated word
      {"the sentence", "nonneg\tnonneg\tnonneg"},
      {"the motion", "nonneg\tnonneg\tnonneg"},
      {"the sentence was recorded", "nonneg\tnonneg\tnonneg"},
      {"the motion was granted", "nonneg\tnonneg\tneg"},
      // no deviated word
      {"the court heard the appeal", "nonneg\tnonneg\tnonneg"},
      {"the judge was there", "nonneg\tnonneg\tnonneg"},
      {"the jury was present", "nonneg\tnonneg\tnonneg"},
      {"the verdict was given", "nonneg\tnonneg\tnonneg"},
      {"the case was heard", "nonneg\tnonneg\tnonneg"},
      {"the appeal was timely", "nonneg\tneg\tnonneg"},
      {"the court was wrong", "neg\tneg\tneg"},
      {"the decision was wrong", "neg\tneg\tneg"},
      {"it was a failure", "neg\tneg\tneg"},
      {"the trial was fair", "nonneg\tnonneg\tnonneg"},
      {"the hearing was brief", "nonneg\tnonneg\tnonneg"},
      {"the case was hopeless", "neg\tneg\tneg"},
      {"the outcome was terrible", "neg\tneg\tneg"},
      {"the court did it", "nonneg\tnonneg\tnonneg"},
      {"the filing was late", "nonneg\tnonneg\tnonneg"},
      {"the record was complete", "nonneg\tnonneg\tnonneg"},
  };
}

std::string testset_tsv() {
  std::string out = "# phrase judge1 judge2 judge3\n";
  for (const auto& p : testset()) {
    out += "\"" + p.text + "\"\t" + p.judges + "\n";
  }
  return out;
}

std::string phrases_txt() {
  std::string out;
  for (const auto& p : testset()) out += p.text + "\n";
  return out;
}

// Expected deviations: word -> (model class at detection time, donor).
const std::map<std::string, std::pair<std::string, std::string>>
    kExpectedDeviations = {
        {"breach", {"nonneg", "failure"}},
        {"charged", {"nonneg", "bored"}},
        {"convicted", {"nonneg", "bored"}},
        {"felony", {"nonneg", "failure"}},
        {"fraud", {"nonneg", "failure"}},
        {"guilty", {"nonneg", "wrong"}},
        {"insufficient", {"nonneg", "wrong"}},
        {"invalid", {"nonneg", "wrong"}},
        {"motion", {"neg", "thing"}},
        {"negligent", {"nonneg", "wrong"}},
        {"objected", {"nonneg", "hated"}},
        {"sentence", {"neg", "thing"}},
        {"unlawful", {"nonneg", "wrong"}},
        {"violations", {"nonneg", "politics"}},
};

// ----------------------------------------------------------------- check --

TrainConfig fixture_train_config() {
  TrainConfig config;
  config.dim = 6;
  config.learning_rate = 0.1;
  config.l2 = 1e-5;
  config.epochs = 150;
  config.batch_size = 8;
  config.seed = 42;
  config.threads = 1;
  config.init_scale = 0.01;
  return config;
}

int check(const std::string& dir) {
  int failures = 0;
  auto expect = [&](bool ok, const std::string& what) {
    std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
    if (!ok) ++failures;
  };

  // 1. vocabulary selection picks exactly the annotated mains
  Stoplist stoplist = Stoplist::bundled();
  TermFrequencyTable tf = count_corpus(dir + "/target_corpus", stoplist);
  std::vector<std::string> mains = all_mains();
  {
    std::set<std::string> table_keys;
    for (const auto& [w, c] : tf.entries) table_keys.insert(w);
    std::set<std::string> allowed(mains.begin(), mains.end());
    for (const auto& t : kTails) allowed.insert(t);
    expect(table_keys == allowed, "corpus tokens are mains plus rare tails");
    for (const auto& w : mains) {
      if (tf.entries[w] != 5) {
        expect(false, "count for '" + w + "' is " +
                          std::to_string(tf.entries[w]) + ", wanted 5");
      }
    }
  }
  VocabSelection sel = select_vocabulary(tf, 0.95, CutoffMode::mass);
  expect(sel.words == mains, "95% cutoff selects exactly the 24 main words");

  // 2. train the source model
  LabeledTreebank bank =
      LabeledTreebank::from_file(dir + "/source_treebank.txt");
  TrainResult trained = train(bank, fixture_train_config());
  expect(trained.final_mean_node_loss < trained.initial_mean_node_loss,
         "training loss decreased (" +
             std::to_string(trained.initial_mean_node_loss) + " -> " +
             std::to_string(trained.final_mean_node_loss) + ")");
  const SentimentModel& source = trained.model;

  // 3. single-word classes the fixture depends on
  auto word_is = [&](const std::string& w, TwoClass want) {
    TwoClass got = model_word_class(source, w);
    expect(got == want, "source classifies '" + w + "' as " +
                            two_class_token(got) + " (want " +
                            two_class_token(want) + ")");
  };
  for (const std::string w :
       {"wrong", "worse", "worst", "failure", "politics", "hated", "bored",
        "ignoring", "hates", "hate", "insufficiently", "sentence", "motion"}) {
    word_is(w, TwoClass::negative);
  }
  for (const std::string w : {"thing", "things", "natural", "naturally", "do",
                              "does", "did", "given", "doing", "charged"}) {
    word_is(w, TwoClass::non_negative);
  }

  // 4. deviations
  std::vector<AnnotationRecord> gold =
      load_annotations(dir + "/annotations.tsv");
  TagMap tags = load_tag_map(dir + "/tags.tsv");
  DonorTable table = DonorTable::standard();
  DeviationReport report =
      detect_deviations(sel.words, source, gold, tags, table, 1);
  expect(report.skipped.empty(), "no deviated word lacks a donor row");
  std::map<std::string, std::pair<std::string, std::string>> found;
  for (const auto& e : report.entries) {
    found[e.word] = {two_class_token(e.model_class), e.donor};
  }
  expect(found == kExpectedDeviations,
         "deviation list matches the expected 14 words");
  if (found != kExpectedDeviations) {
    for (const auto& [w, v] : found) {
      std::printf("    got  %s model=%s donor=%s\n", w.c_str(),
                  v.first.c_str(), v.second.c_str());
    }
  }

  // 5. substitution
  SentimentModel adapted = substitute_vectors(source, report.entries);
  bool rows_match = true;
  for (const auto& e : report.entries) {
    auto wr = adapted.find(e.word);
    auto dr = adapted.find(e.donor);
    if (!wr || !dr ||
        adapted.embeddings.row(*wr) != adapted.embeddings.row(*dr)) {
      rows_match = false;
    }
  }
  expect(rows_match, "every deviated row equals its donor row");

  // 6. evaluation
  std::vector<TestItem> items = load_testset(dir + "/testset.tsv");
  std::vector<std::string> deviated;
  for (const auto& e : report.entries) deviated.push_back(e.word);
  ComparisonReport cmp =
      compare_models(source, adapted, items, deviated, {}, 1);
  std::printf("\nper-phrase trace (baseline -> target | gold):\n");
  for (const auto& item : items) {
    auto b = classify_phrase(source, item.text, {});
    auto t = classify_phrase(adapted, item.text, {});
    std::printf("  %-32s %6s -> %-6s | %s\n", item.text.c_str(),
                two_class_token(b.two_class), two_class_token(t.two_class),
                two_class_token(item.gold));
  }
  std::printf("\nbaseline accuracy %s%%  target accuracy %s%%\n",
              cmp.baseline.accuracy.percent().c_str(),
              cmp.target.accuracy.percent().c_str());
  std::printf("divergence %s%%  deviated coverage %s%%\n\n",
              cmp.divergence.percent().c_str(),
              cmp.deviated_coverage.percent().c_str());
  expect(cmp.target.accuracy.value() > cmp.baseline.accuracy.value(),
         "adapted model beats the source model on the target testset");
  expect(cmp.deviated_coverage.value() >= 0.45,
         "at least 45% of test phrases contain a deviated word");

  // 7. the flagship example flips
  auto before = classify_phrase(source, "the evidence was insufficient", {});
  auto after = classify_phrase(adapted, "the evidence was insufficient", {});
  expect(before.two_class == TwoClass::non_negative &&
             after.two_class == TwoClass::negative,
         "'the evidence was insufficient' flips nonneg -> neg");

  std::printf("\n%s (%d failure%s)\n", failures == 0 ? "ALL CHECKS PASSED" : "CHECKS FAILED",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::string out_dir = "fixtures";
  bool run_check = false;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--out" && i + 1 < argc) {
      out_dir = argv[++i];
    } else if (arg == "--check") {
      run_check = true;
    } else {
      std::fprintf(stderr, "usage: make_fixtures [--out DIR] [--check]\n");
      return 2;
    }
  }
  try {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir + "/target_corpus");
    fs::create_directories(out_dir + "/golden");

    std::string treebank;
    for (const auto& line : source_treebank()) treebank += line + "\n";
    write_file(out_dir + "/source_treebank.txt", treebank);

    auto [file_a, file_b] = target_corpus_files();
    write_file(out_dir + "/target_corpus/opinions_a.txt", file_a);
    write_file(out_dir + "/target_corpus/opinions_b.txt", file_b);
    write_file(out_dir + "/annotations.tsv", annotations_tsv());
    write_file(out_dir + "/tags.tsv", tags_tsv());
    write_file(out_dir + "/testset.tsv", testset_tsv());
    write_file(out_dir + "/phrases.txt", phrases_txt());
    std::printf("fixtures written to %s\n", out_dir.c_str());

    if (run_check) return check(out_dir);
    return 0;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
}
