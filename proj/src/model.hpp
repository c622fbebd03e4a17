#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "classes.hpp"
#include "tree.hpp"

namespace lexsent {

// Bilinear tensor V (d slices of 2d x 2d) plus linear W (d x 2d) and bias b.
struct TensorLayer {
  std::vector<Eigen::MatrixXd> V;
  Eigen::MatrixXd W;
  Eigen::VectorXd b;

  int dim() const { return static_cast<int>(b.size()); }
};

struct SentimentHead {
  Eigen::MatrixXd Ws;  // 5 x d
  Eigen::VectorXd bs;  // 5
};

enum class OovPolicy : int {
  neutral_donor = 0,
  seeded_random = 1,
};

struct SentimentModel {
  static constexpr const char* kFormatVersion = "lexsent.model.v1";

  int dim = 0;
  bool case_fold = true;
  OovPolicy oov_policy = OovPolicy::neutral_donor;
  std::string neutral_donor = "thing";
  std::string version = kFormatVersion;

  std::vector<std::string> words;              // row order
  std::unordered_map<std::string, int> vocab;  // word -> row
  Eigen::MatrixXd embeddings;                  // |words| x dim
  TensorLayer layer;
  SentimentHead head;

  bool loaded() const { return dim >= 1; }
  size_t vocab_size() const { return words.size(); }

  // Applies the model's case-folding before lookup.
  std::string normalize(const std::string& word) const;
  std::optional<int> find(const std::string& word) const;

  // Appends a word; the row must match dim. Duplicate words are rejected.
  int add_word(const std::string& word, const Eigen::VectorXd& row);
};

// Row of E for in-vocabulary words; otherwise the OOV policy applies:
// neutral_donor returns the configured donor word's row, seeded_random a
// uniform(-1e-4, 1e-4) vector seeded by a stable hash of the word.
Eigen::VectorXd lookup_vector(const SentimentModel& model,
                              const std::string& word);

// p_k = tanh(c' V[k] c + (W c)_k + b_k) with c = [a; b]. Every component is
// strictly inside (-1, 1).
Eigen::VectorXd compose(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                        const TensorLayer& layer);

// softmax(Ws p + bs).
Vector5d node_distribution(const Eigen::VectorXd& p, const SentimentHead& head);

struct ForwardStats {
  long compose_calls = 0;
  long lookup_calls = 0;
};

// Annotates every node with vector and dist, bottom-up. The root dist is the
// phrase distribution.
void forward(const SentimentModel& model, SentimentTree& tree,
             ForwardStats* stats = nullptr);

// Versioned JSON with a trailing integrity checksum; round-trips bit-exactly.
std::string model_to_json(const SentimentModel& model);
SentimentModel model_from_json(const std::string& text);
void save_model(const SentimentModel& model, const std::string& path);
SentimentModel load_model(const std::string& path);

// Uniform(-init_scale, init_scale) parameters, V at a tenth of that scale.
SentimentModel make_random_model(int dim, const std::vector<std::string>& words,
                                 uint64_t seed, double init_scale = 0.01);

bool models_equal(const SentimentModel& a, const SentimentModel& b);

}  // namespace lexsent
