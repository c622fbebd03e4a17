#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "model.hpp"
#include "tree.hpp"

namespace lexsent {

// Gradient of the regularized loss for one tree (or a batch). Embedding
// gradients are sparse: only rows touched by the trees appear.
struct GradientBundle {
  std::vector<Eigen::MatrixXd> V;
  Eigen::MatrixXd W;
  Eigen::VectorXd b;
  Eigen::MatrixXd Ws;
  Eigen::VectorXd bs;
  std::map<int, Eigen::VectorXd> embedding_rows;

  static GradientBundle zeros_like(const SentimentModel& model);
  void add(const GradientBundle& other);
  void scale(double factor);
  bool finite() const;
};

// Cross-entropy summed over every labeled node, plus l2 times the squared
// norm of V, W, b, Ws, bs and the embedding rows the tree touches.
double tree_loss(const SentimentModel& model, const SentimentTree& tree,
                 double l2);

GradientBundle gradients(const SentimentModel& model, const SentimentTree& tree,
                         double l2);

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_parameter;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  size_t parameters_checked = 0;
  bool passed(double tolerance = 1e-4) const {
    return max_rel_error < tolerance;
  }
};

// Central finite differences against the analytic gradient, sweeping every
// parameter (all tensor slices, composition and sentiment weights, and every
// vocabulary row — untouched rows must come out flat on both sides).
GradCheckReport grad_check(const SentimentModel& model,
                           const SentimentTree& tree, double l2,
                           double epsilon = 1e-5);

// Same sweep, but the analytic side is supplied by the caller.
GradCheckReport grad_check_against(const SentimentModel& model,
                                   const SentimentTree& tree, double l2,
                                   double epsilon,
                                   const GradientBundle& analytic);

class AdaGrad {
 public:
  AdaGrad(double learning_rate, double epsilon = 1e-8);

  void init(const SentimentModel& model);
  void step(SentimentModel& model, const GradientBundle& grads);

  double learning_rate() const { return learning_rate_; }
  bool initialized() const { return initialized_; }

 private:
  double learning_rate_;
  double epsilon_;
  bool initialized_ = false;
  std::vector<Eigen::MatrixXd> gV_;
  Eigen::MatrixXd gW_;
  Eigen::VectorXd gb_;
  Eigen::MatrixXd gWs_;
  Eigen::VectorXd gbs_;
  Eigen::MatrixXd gE_;
};

// A treebank whose trees all carry gold labels on every node.
struct LabeledTreebank {
  std::vector<SentimentTree> trees;

  static LabeledTreebank from_trees(std::vector<SentimentTree> trees);
  static LabeledTreebank from_file(const std::string& path);

  size_t node_count() const;
};

struct TrainConfig {
  int dim = 25;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int epochs = 100;
  int batch_size = 8;
  std::uint64_t seed = 42;
  int threads = 1;
  double init_scale = 0.01;
};

struct EpochStats {
  int epoch = 0;
  double mean_node_loss = 0.0;
};

struct TrainResult {
  SentimentModel model;
  double initial_mean_node_loss = 0.0;
  double final_mean_node_loss = 0.0;
  std::vector<EpochStats> history;
};

// Mean cross-entropy per node over the whole treebank (no regularizer).
double mean_node_loss(const SentimentModel& model, const LabeledTreebank& bank);

TrainResult train(const LabeledTreebank& bank, const TrainConfig& config);

class DeterministicRng;

// Random strictly binary tree over the word pool, gold label on every node.
SentimentTree random_labeled_tree(DeterministicRng& rng,
                                  const std::vector<std::string>& words,
                                  int leaves);

}  // namespace lexsent
