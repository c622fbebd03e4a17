#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "lexsent/lexsent.h"
#include "test_util.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

// Owns a char* returned through an out parameter.
struct OutString {
  char* ptr = nullptr;
  ~OutString() { lexsent_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

// Owns a model handle.
struct OutModel {
  lexsent_model* ptr = nullptr;
  ~OutModel() { lexsent_model_free(ptr); }
};

// Trains the reference model from the bundled treebank once per process.
lexsent_model* fixture_model() {
  static lexsent_model* model = [] {
    lexsent_model* out = nullptr;
    std::string treebank = testutil::fixtures_dir() + "/source_treebank.txt";
    lexsent_status status = lexsent_train(treebank.c_str(), 6, 0.1, 1e-5, 150,
                                          8, 42, 1, 0.01, nullptr, &out);
    REQUIRE(status == LEXSENT_OK);
    return out;
  }();
  return model;
}

}  // namespace

TEST_CASE("version and status names are stable") {
  REQUIRE(lexsent_version() != nullptr);
  CHECK(std::string(lexsent_version()) == "1.0.0");
  CHECK(std::string(lexsent_status_name(LEXSENT_OK)) == "ok");
  CHECK(std::string(lexsent_status_name(LEXSENT_ERR_IO)) == "io-error");
  CHECK(std::string(lexsent_status_name(LEXSENT_ERR_CORRUPT_MODEL)) ==
        "corrupt-model");
  CHECK(std::string(lexsent_status_name(LEXSENT_ERR_EMPTY_PHRASE)) ==
        "empty-phrase");
  CHECK(std::string(lexsent_status_name(999)) == "unknown");
}

TEST_CASE("free functions and accessors tolerate NULL") {
  lexsent_string_free(nullptr);
  lexsent_model_free(nullptr);
  CHECK(lexsent_model_dim(nullptr) == 0);
  CHECK(lexsent_model_vocab_size(nullptr) == 0);
}

TEST_CASE("null out-parameters are rejected with a message") {
  lexsent_status status = lexsent_vocab("anything", nullptr, 0.95,
                                        LEXSENT_CUTOFF_MASS, nullptr);
  CHECK(status == LEXSENT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(lexsent_last_error()).find("out_tsv") !=
        std::string::npos);
}

TEST_CASE("lexsent_vocab reproduces the golden vocabulary TSV") {
  OutString tsv;
  std::string corpus = testutil::fixtures_dir() + "/target_corpus";
  REQUIRE(lexsent_vocab(corpus.c_str(), nullptr, 0.95, LEXSENT_CUTOFF_MASS,
                        &tsv.ptr) == LEXSENT_OK);
  CHECK(tsv.str() == slurp(testutil::fixtures_dir() + "/golden/vocab.tsv"));
}

TEST_CASE("lexsent_vocab honours an explicit stoplist path") {
  testutil::TempDir tmp;
  std::string stoplist = tmp.file("stop.txt");
  spit(stoplist, "evidence\nthe\nwas\nso\nthis\nabout\nit\nthey\n");
  OutString tsv;
  std::string corpus = testutil::fixtures_dir() + "/target_corpus";
  REQUIRE(lexsent_vocab(corpus.c_str(), stoplist.c_str(), 1.0,
                        LEXSENT_CUTOFF_MASS, &tsv.ptr) == LEXSENT_OK);
  CHECK(tsv.str().find("evidence") == std::string::npos);
  CHECK(tsv.str().find("court") != std::string::npos);

  CHECK(lexsent_vocab(corpus.c_str(), "/nonexistent/stop.txt", 0.95,
                      LEXSENT_CUTOFF_MASS, &tsv.ptr) ==
        LEXSENT_ERR_STOPLIST_MISSING);
}

TEST_CASE("the LEXSENT_STOPLIST variable overrides the bundled list") {
  testutil::TempDir tmp;
  std::string stoplist = tmp.file("stop.txt");
  spit(stoplist, "evidence\nthe\nwas\nso\nthis\nabout\nit\nthey\n");
  setenv("LEXSENT_STOPLIST", stoplist.c_str(), 1);
  OutString tsv;
  std::string corpus = testutil::fixtures_dir() + "/target_corpus";
  lexsent_status status = lexsent_vocab(corpus.c_str(), nullptr, 1.0,
                                        LEXSENT_CUTOFF_MASS, &tsv.ptr);
  unsetenv("LEXSENT_STOPLIST");
  REQUIRE(status == LEXSENT_OK);
  CHECK(tsv.str().find("evidence") == std::string::npos);
  CHECK(tsv.str().find("court") != std::string::npos);
}

TEST_CASE("lexsent_train reports a falling loss and a usable model") {
  OutString summary;
  OutModel model;
  std::string treebank = testutil::fixtures_dir() + "/source_treebank.txt";
  REQUIRE(lexsent_train(treebank.c_str(), 6, 0.1, 1e-5, 150, 8, 42, 1, 0.01,
                        &summary.ptr, &model.ptr) == LEXSENT_OK);
  CHECK(lexsent_model_dim(model.ptr) == 6);
  CHECK(lexsent_model_vocab_size(model.ptr) > 20);

  nlohmann::json j = nlohmann::json::parse(summary.str());
  CHECK(j["trees"].get<long>() > 400);
  CHECK(j["dim"] == 6);
  CHECK(j["vocab_size"].get<long>() == lexsent_model_vocab_size(model.ptr));
  CHECK(j["final_mean_node_loss"].get<double>() <
        j["initial_mean_node_loss"].get<double>());
}

TEST_CASE("training rejects bad hyper-parameters and missing files") {
  std::string treebank = testutil::fixtures_dir() + "/source_treebank.txt";
  OutModel model;
  CHECK(lexsent_train(treebank.c_str(), 0, 0.1, 1e-5, 10, 8, 42, 1, 0.01,
                      nullptr, &model.ptr) == LEXSENT_ERR_INVALID_ARGUMENT);
  CHECK(lexsent_train(treebank.c_str(), 4, 0.1, 1e-5, 0, 8, 42, 1, 0.01,
                      nullptr, &model.ptr) == LEXSENT_ERR_INVALID_ARGUMENT);
  CHECK(lexsent_train("/nonexistent/treebank.txt", 4, 0.1, 1e-5, 10, 8, 42, 1,
                      0.01, nullptr, &model.ptr) == LEXSENT_ERR_IO);
}

TEST_CASE("model save and load round-trip through the C API") {
  lexsent_model* model = fixture_model();
  testutil::TempDir tmp;
  std::string path = tmp.file("model.json");
  REQUIRE(lexsent_model_save(model, path.c_str()) == LEXSENT_OK);

  OutModel reloaded;
  REQUIRE(lexsent_model_load(path.c_str(), &reloaded.ptr) == LEXSENT_OK);
  CHECK(lexsent_model_dim(reloaded.ptr) == lexsent_model_dim(model));
  CHECK(lexsent_model_vocab_size(reloaded.ptr) ==
        lexsent_model_vocab_size(model));

  OutString before, after;
  REQUIRE(lexsent_classify_phrase(model, "the evidence was insufficient", 0.4,
                                  LEXSENT_MASS_COMBINED, 0,
                                  &before.ptr) == LEXSENT_OK);
  REQUIRE(lexsent_classify_phrase(reloaded.ptr,
                                  "the evidence was insufficient", 0.4,
                                  LEXSENT_MASS_COMBINED, 0,
                                  &after.ptr) == LEXSENT_OK);
  CHECK(before.str() == after.str());
}

TEST_CASE("model loading distinguishes missing, corrupt, and stale files") {
  OutModel out;
  CHECK(lexsent_model_load("/nonexistent/model.json", &out.ptr) ==
        LEXSENT_ERR_IO);
  CHECK(std::string(lexsent_last_error()).size() > 0);

  testutil::TempDir tmp;
  std::string junk = tmp.file("junk.json");
  spit(junk, "this is not a model\n");
  CHECK(lexsent_model_load(junk.c_str(), &out.ptr) ==
        LEXSENT_ERR_CORRUPT_MODEL);
}

TEST_CASE("lexsent_deviations matches the golden detection run") {
  lexsent_model* model = fixture_model();
  std::string fx = testutil::fixtures_dir();
  OutString tsv, skipped;
  REQUIRE(lexsent_deviations(model, (fx + "/golden/vocab.tsv").c_str(),
                             (fx + "/annotations.tsv").c_str(),
                             (fx + "/tags.tsv").c_str(), nullptr, 1, &tsv.ptr,
                             &skipped.ptr) == LEXSENT_OK);
  CHECK(tsv.str() == slurp(fx + "/golden/deviations.tsv"));
  CHECK(skipped.str() == slurp(fx + "/golden/skipped.txt"));
}

TEST_CASE("an explicit donor table path behaves like the built-in table") {
  lexsent_model* model = fixture_model();
  std::string fx = testutil::fixtures_dir();
  std::string table = testutil::data_dir() + "/donor_table.tsv";
  OutString tsv;
  REQUIRE(lexsent_deviations(model, (fx + "/golden/vocab.tsv").c_str(),
                             (fx + "/annotations.tsv").c_str(),
                             (fx + "/tags.tsv").c_str(), table.c_str(), 1,
                             &tsv.ptr, nullptr) == LEXSENT_OK);
  CHECK(tsv.str() == slurp(fx + "/golden/deviations.tsv"));
}

TEST_CASE("lexsent_adapt substitutes rows and improves the evaluation") {
  lexsent_model* model = fixture_model();
  std::string fx = testutil::fixtures_dir();
  OutModel adapted;
  REQUIRE(lexsent_adapt(model, (fx + "/golden/deviations.tsv").c_str(),
                        &adapted.ptr) == LEXSENT_OK);
  // deviated words missing from the source vocabulary are added first
  long grown = lexsent_model_vocab_size(adapted.ptr) -
               lexsent_model_vocab_size(model);
  CHECK(grown >= 0);
  CHECK(grown <= 14);  // one row per deviation at most

  // a second substitution pass finds every word already in place
  OutModel again;
  REQUIRE(lexsent_adapt(adapted.ptr, (fx + "/golden/deviations.tsv").c_str(),
                        &again.ptr) == LEXSENT_OK);
  CHECK(lexsent_model_vocab_size(again.ptr) ==
        lexsent_model_vocab_size(adapted.ptr));

  OutString report;
  REQUIRE(lexsent_eval(adapted.ptr, model, (fx + "/testset.tsv").c_str(),
                       (fx + "/golden/deviations.tsv").c_str(), 0.4,
                       LEXSENT_MASS_COMBINED, 0, 1, 0,
                       &report.ptr) == LEXSENT_OK);
  std::string text = report.str();
  CHECK(text.find("35.00") != std::string::npos);  // baseline accuracy
  CHECK(text.find("95.00") != std::string::npos);  // adapted accuracy
  CHECK(text.find("60.00") != std::string::npos);  // divergence and coverage
}

TEST_CASE("single-model evaluation renders text and JSON") {
  lexsent_model* model = fixture_model();
  std::string testset = testutil::fixtures_dir() + "/testset.tsv";
  OutString text, json_text;
  REQUIRE(lexsent_eval(model, nullptr, testset.c_str(), nullptr, 0.4,
                       LEXSENT_MASS_COMBINED, 0, 1, 0,
                       &text.ptr) == LEXSENT_OK);
  CHECK(text.str().find("35.00") != std::string::npos);

  REQUIRE(lexsent_eval(model, nullptr, testset.c_str(), nullptr, 0.4,
                       LEXSENT_MASS_COMBINED, 0, 1, 1,
                       &json_text.ptr) == LEXSENT_OK);
  nlohmann::json j = nlohmann::json::parse(json_text.str());
  CHECK(j["accuracy"]["percent"] == "35.00");
  CHECK(j["phrase_count"] == 40);

  CHECK(lexsent_eval(model, nullptr, "/nonexistent/testset.tsv", nullptr, 0.4,
                     LEXSENT_MASS_COMBINED, 0, 1, 0,
                     &text.ptr) == LEXSENT_ERR_IO);
}

TEST_CASE("lexsent_classify_phrase returns one well-formed JSON object") {
  lexsent_model* model = fixture_model();
  OutString out;
  REQUIRE(lexsent_classify_phrase(model, "the evidence was convincing", 0.4,
                                  LEXSENT_MASS_COMBINED, 0,
                                  &out.ptr) == LEXSENT_OK);
  nlohmann::json j = nlohmann::json::parse(out.str());
  CHECK(j["text"] == "the evidence was convincing");
  std::string cls = j["two_class"].get<std::string>();
  CHECK((cls == "neg" || cls == "nonneg"));
  REQUIRE(j["five_dist"].size() == 5);
  double sum = 0.0;
  for (const auto& p : j["five_dist"]) sum += p.get<double>();
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["negative_mass"].get<double>() ==
        doctest::Approx(j["five_dist"][0].get<double>() +
                        j["five_dist"][1].get<double>())
            .epsilon(1e-12));

  CHECK(lexsent_classify_phrase(model, "   ", 0.4, LEXSENT_MASS_COMBINED, 0,
                                &out.ptr) == LEXSENT_ERR_EMPTY_PHRASE);
  CHECK(lexsent_classify_phrase(model, "fine", 1.5, LEXSENT_MASS_COMBINED, 0,
                                &out.ptr) == LEXSENT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("s-expression classification matches the raw-token path") {
  lexsent_model* model = fixture_model();
  OutString raw, sexpr;
  REQUIRE(lexsent_classify_phrase(model, "the judge objected", 0.4,
                                  LEXSENT_MASS_COMBINED, 0,
                                  &raw.ptr) == LEXSENT_OK);
  REQUIRE(lexsent_classify_phrase(model, "((the) ((judge) (objected)))", 0.4,
                                  LEXSENT_MASS_COMBINED, 1,
                                  &sexpr.ptr) == LEXSENT_OK);
  nlohmann::json a = nlohmann::json::parse(raw.str());
  nlohmann::json b = nlohmann::json::parse(sexpr.str());
  CHECK(a["two_class"] == b["two_class"]);
  CHECK(a["five_dist"] == b["five_dist"]);
}

TEST_CASE("lexsent_classify_file emits JSON lines and is thread-stable") {
  lexsent_model* model = fixture_model();
  testutil::TempDir tmp;
  std::string phrases = tmp.file("phrases.txt");
  spit(phrases,
       "# three test phrases\n"
       "the evidence was insufficient\n"
       "\n"
       "the court agreed\n"
       "the jury was convinced\n");
  OutString one, four;
  REQUIRE(lexsent_classify_file(model, phrases.c_str(), 0.4,
                                LEXSENT_MASS_COMBINED, 0, 1,
                                &one.ptr) == LEXSENT_OK);
  REQUIRE(lexsent_classify_file(model, phrases.c_str(), 0.4,
                                LEXSENT_MASS_COMBINED, 0, 4,
                                &four.ptr) == LEXSENT_OK);
  CHECK(one.str() == four.str());

  std::istringstream lines(one.str());
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.contains("two_class"));
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("lexsent_grad_check passes at the documented tolerance") {
  OutString report;
  REQUIRE(lexsent_grad_check(42, 3, 4, 6, 0.01, 1e-5, &report.ptr) ==
          LEXSENT_OK);
  nlohmann::json j = nlohmann::json::parse(report.str());
  CHECK(j["passed"] == true);
  CHECK(j["max_rel_error"].get<double>() < 1e-4);
  CHECK(j["trials"].size() == 3);
  for (const auto& row : j["trials"]) {
    CHECK(row["parameters_checked"].get<long>() > 0);
  }

  CHECK(lexsent_grad_check(42, 0, 4, 6, 0.01, 1e-5, &report.ptr) ==
        LEXSENT_ERR_INVALID_ARGUMENT);
}
