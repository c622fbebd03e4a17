#include "model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace lexsent {

namespace {

using nlohmann::json;

double squash(double z) {
  double p = std::tanh(z);
  // tanh rounds to +/-1 for |z| beyond ~19; the contract is a strictly open
  // interval.
  if (p >= 1.0) return std::nextafter(1.0, 0.0);
  if (p <= -1.0) return std::nextafter(-1.0, 0.0);
  return p;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& rows, Eigen::Index want_rows,
                                 Eigen::Index want_cols, const char* what) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != want_rows) {
    fail(ErrorCode::corrupt_model, std::string("bad shape for ") + what);
  }
  Eigen::MatrixXd m(want_rows, want_cols);
  for (Eigen::Index i = 0; i < want_rows; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != want_cols) {
      fail(ErrorCode::corrupt_model, std::string("bad shape for ") + what);
    }
    for (Eigen::Index j = 0; j < want_cols; ++j) {
      if (!row[j].is_number()) {
        fail(ErrorCode::corrupt_model, std::string("non-numeric entry in ") + what);
      }
      m(i, j) = row[j].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& arr, Eigen::Index want,
                                 const char* what) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != want) {
    fail(ErrorCode::corrupt_model, std::string("bad shape for ") + what);
  }
  Eigen::VectorXd v(want);
  for (Eigen::Index i = 0; i < want; ++i) {
    if (!arr[i].is_number()) {
      fail(ErrorCode::corrupt_model, std::string("non-numeric entry in ") + what);
    }
    v[i] = arr[i].get<double>();
  }
  return v;
}

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    fail(ErrorCode::invalid_argument,
         std::string("non-finite values in ") + what);
  }
}

std::string checksum_hex(const std::string& canonical) {
  uint64_t h = fnv1a(canonical);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

json model_to_document(const SentimentModel& model) {
  json doc;
  doc["version"] = model.version;
  doc["dim"] = model.dim;
  doc["case_fold"] = model.case_fold;
  doc["oov_policy"] = model.oov_policy == OovPolicy::neutral_donor
                          ? "neutral_donor"
                          : "seeded_random";
  doc["neutral_donor"] = model.neutral_donor;
  doc["vocab"] = model.words;
  doc["E"] = matrix_to_json(model.embeddings);
  json slices = json::array();
  for (const auto& slice : model.layer.V) slices.push_back(matrix_to_json(slice));
  doc["V"] = std::move(slices);
  doc["W"] = matrix_to_json(model.layer.W);
  doc["b"] = vector_to_json(model.layer.b);
  doc["Ws"] = matrix_to_json(model.head.Ws);
  doc["bs"] = vector_to_json(model.head.bs);
  return doc;
}

}  // namespace

std::string SentimentModel::normalize(const std::string& word) const {
  if (!case_fold) return word;
  std::string out = word;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::optional<int> SentimentModel::find(const std::string& word) const {
  auto it = vocab.find(normalize(word));
  if (it == vocab.end()) return std::nullopt;
  return it->second;
}

int SentimentModel::add_word(const std::string& word,
                             const Eigen::VectorXd& row) {
  std::string key = normalize(word);
  if (vocab.count(key)) {
    fail(ErrorCode::duplicate_word, "word already in vocabulary: " + key);
  }
  if (row.size() != dim) {
    fail(ErrorCode::dimension_mismatch,
         "embedding row for '" + key + "' has size " +
             std::to_string(row.size()) + ", model dim is " +
             std::to_string(dim));
  }
  int index = static_cast<int>(words.size());
  words.push_back(key);
  vocab.emplace(key, index);
  embeddings.conservativeResize(index + 1, dim);
  embeddings.row(index) = row.transpose();
  return index;
}

Eigen::VectorXd lookup_vector(const SentimentModel& model,
                              const std::string& word) {
  if (!model.loaded()) {
    fail(ErrorCode::model_not_loaded, "lookup on an uninitialized model");
  }
  if (auto row = model.find(word)) {
    return model.embeddings.row(*row).transpose();
  }
  if (model.oov_policy == OovPolicy::neutral_donor) {
    auto donor = model.find(model.neutral_donor);
    if (!donor) {
      fail(ErrorCode::neutral_donor_missing,
           "neutral donor word '" + model.neutral_donor +
               "' is not in the vocabulary");
    }
    return model.embeddings.row(*donor).transpose();
  }
  DeterministicRng rng(fnv1a(model.normalize(word)));
  Eigen::VectorXd v(model.dim);
  for (int i = 0; i < model.dim; ++i) v[i] = rng.uniform(-0.0001, 0.0001);
  return v;
}

Eigen::VectorXd compose(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                        const TensorLayer& layer) {
  const int d = layer.dim();
  if (a.size() != d || b.size() != d) {
    fail(ErrorCode::dimension_mismatch,
         "compose inputs have sizes " + std::to_string(a.size()) + "/" +
             std::to_string(b.size()) + ", layer dim is " + std::to_string(d));
  }
  if (static_cast<int>(layer.V.size()) != d || layer.W.rows() != d ||
      layer.W.cols() != 2 * d) {
    fail(ErrorCode::dimension_mismatch, "tensor layer shapes are inconsistent");
  }
  Eigen::VectorXd c(2 * d);
  c << a, b;
  Eigen::VectorXd p(d);
  for (int k = 0; k < d; ++k) {
    double z = c.dot(layer.V[k] * c) + layer.W.row(k).dot(c) + layer.b[k];
    p[k] = squash(z);
  }
  return p;
}

Vector5d node_distribution(const Eigen::VectorXd& p,
                           const SentimentHead& head) {
  if (head.Ws.rows() != kNumClasses || head.Ws.cols() != p.size() ||
      head.bs.size() != kNumClasses) {
    fail(ErrorCode::dimension_mismatch,
         "sentiment head does not match vector of size " +
             std::to_string(p.size()));
  }
  Vector5d logits = head.Ws * p + head.bs;
  double max_logit = logits.maxCoeff();
  Vector5d exps;
  for (int i = 0; i < kNumClasses; ++i) exps[i] = std::exp(logits[i] - max_logit);
  return exps / exps.sum();
}

namespace {

void forward_node(const SentimentModel& model, TreeNode& node,
                  ForwardStats* stats) {
  if (node.is_leaf()) {
    node.vector = lookup_vector(model, node.token);
    if (stats) ++stats->lookup_calls;
  } else {
    forward_node(model, *node.left, stats);
    forward_node(model, *node.right, stats);
    node.vector = compose(node.left->vector, node.right->vector, model.layer);
    if (stats) ++stats->compose_calls;
  }
  node.dist = node_distribution(node.vector, model.head);
  node.annotated = true;
}

}  // namespace

void forward(const SentimentModel& model, SentimentTree& tree,
             ForwardStats* stats) {
  if (tree.empty()) fail(ErrorCode::empty_tree, "forward on an empty tree");
  if (!model.loaded()) {
    fail(ErrorCode::model_not_loaded, "forward on an uninitialized model");
  }
  forward_node(model, *tree.root, stats);
}

std::string model_to_json(const SentimentModel& model) {
  require_finite(model.embeddings, "E");
  for (const auto& slice : model.layer.V) require_finite(slice, "V");
  require_finite(model.layer.W, "W");
  require_finite(model.layer.b, "b");
  require_finite(model.head.Ws, "Ws");
  require_finite(model.head.bs, "bs");

  json doc = model_to_document(model);
  doc["checksum"] = checksum_hex(doc.dump());
  return doc.dump();
}

SentimentModel model_from_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    fail(ErrorCode::corrupt_model, "model file is not valid JSON");
  }
  for (const char* field :
       {"version", "dim", "case_fold", "oov_policy", "neutral_donor", "vocab",
        "E", "V", "W", "b", "Ws", "bs", "checksum"}) {
    if (!doc.contains(field)) {
      fail(ErrorCode::corrupt_model,
           std::string("model file is missing field '") + field + "'");
    }
  }
  if (!doc["version"].is_string() ||
      doc["version"].get<std::string>() != SentimentModel::kFormatVersion) {
    fail(ErrorCode::unsupported_version,
         "unsupported model format version: " + doc["version"].dump());
  }

  std::string stored_checksum = doc["checksum"].get<std::string>();
  doc.erase("checksum");
  if (checksum_hex(doc.dump()) != stored_checksum) {
    fail(ErrorCode::corrupt_model, "model checksum mismatch");
  }

  SentimentModel model;
  model.version = doc["version"].get<std::string>();
  model.dim = doc["dim"].get<int>();
  if (model.dim < 1) fail(ErrorCode::corrupt_model, "model dim must be >= 1");
  model.case_fold = doc["case_fold"].get<bool>();
  std::string policy = doc["oov_policy"].get<std::string>();
  if (policy == "neutral_donor") {
    model.oov_policy = OovPolicy::neutral_donor;
  } else if (policy == "seeded_random") {
    model.oov_policy = OovPolicy::seeded_random;
  } else {
    fail(ErrorCode::corrupt_model, "unknown oov_policy: " + policy);
  }
  model.neutral_donor = doc["neutral_donor"].get<std::string>();

  const int d = model.dim;
  model.words = doc["vocab"].get<std::vector<std::string>>();
  for (size_t i = 0; i < model.words.size(); ++i) {
    if (!model.vocab.emplace(model.words[i], static_cast<int>(i)).second) {
      fail(ErrorCode::corrupt_model,
           "duplicate vocabulary word: " + model.words[i]);
    }
  }
  model.embeddings = matrix_from_json(
      doc["E"], static_cast<Eigen::Index>(model.words.size()), d, "E");
  const json& slices = doc["V"];
  if (!slices.is_array() || static_cast<int>(slices.size()) != d) {
    fail(ErrorCode::corrupt_model, "bad shape for V");
  }
  model.layer.V.reserve(d);
  for (int k = 0; k < d; ++k) {
    model.layer.V.push_back(matrix_from_json(slices[k], 2 * d, 2 * d, "V"));
  }
  model.layer.W = matrix_from_json(doc["W"], d, 2 * d, "W");
  model.layer.b = vector_from_json(doc["b"], d, "b");
  model.head.Ws = matrix_from_json(doc["Ws"], kNumClasses, d, "Ws");
  model.head.bs = vector_from_json(doc["bs"], kNumClasses, "bs");
  return model;
}

void save_model(const SentimentModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot open model file for writing: " + path);
  out << model_to_json(model) << '\n';
  if (!out) fail(ErrorCode::io_error, "failed writing model file: " + path);
}

SentimentModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

SentimentModel make_random_model(int dim, const std::vector<std::string>& words,
                                 uint64_t seed, double init_scale) {
  if (dim < 1) fail(ErrorCode::invalid_argument, "model dim must be >= 1");
  SentimentModel model;
  model.dim = dim;
  DeterministicRng rng(seed);
  auto draw = [&](double scale) { return rng.uniform(-scale, scale); };

  model.embeddings.resize(0, dim);
  for (const auto& word : words) {
    Eigen::VectorXd row(dim);
    for (int i = 0; i < dim; ++i) row[i] = draw(init_scale);
    model.add_word(word, row);
  }
  model.layer.V.resize(dim);
  for (auto& slice : model.layer.V) {
    slice.resize(2 * dim, 2 * dim);
    for (int i = 0; i < 2 * dim; ++i)
      for (int j = 0; j < 2 * dim; ++j) slice(i, j) = draw(init_scale * 0.1);
  }
  model.layer.W.resize(dim, 2 * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < 2 * dim; ++j) model.layer.W(i, j) = draw(init_scale);
  model.layer.b = Eigen::VectorXd::Zero(dim);
  model.head.Ws.resize(kNumClasses, dim);
  for (int i = 0; i < kNumClasses; ++i)
    for (int j = 0; j < dim; ++j) model.head.Ws(i, j) = draw(init_scale);
  model.head.bs = Eigen::VectorXd::Zero(kNumClasses);
  return model;
}

bool models_equal(const SentimentModel& a, const SentimentModel& b) {
  if (a.dim != b.dim || a.case_fold != b.case_fold ||
      a.oov_policy != b.oov_policy || a.neutral_donor != b.neutral_donor ||
      a.version != b.version || a.words != b.words) {
    return false;
  }
  auto same = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  if (!same(a.embeddings, b.embeddings) || !same(a.layer.W, b.layer.W) ||
      !same(a.layer.b, b.layer.b) || !same(a.head.Ws, b.head.Ws) ||
      !same(a.head.bs, b.head.bs)) {
    return false;
  }
  if (a.layer.V.size() != b.layer.V.size()) return false;
  for (size_t k = 0; k < a.layer.V.size(); ++k) {
    if (!same(a.layer.V[k], b.layer.V[k])) return false;
  }
  return true;
}

}  // namespace lexsent
