#include "trainer.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "errors.hpp"
#include "rng.hpp"
#include "util.hpp"

namespace lexsent {

namespace {

int gold_of(const TreeNode& node) {
  if (!node.gold_label) {
    fail(ErrorCode::unlabeled_node, "node is missing a gold label");
  }
  return static_cast<int>(*node.gold_label);
}

// Which embedding row a leaf token reads from, or -1 when the lookup does not
// touch E at all (seeded-random OOV vectors are not parameters).
int resolve_row(const SentimentModel& model, const std::string& token) {
  if (auto row = model.find(token)) return *row;
  if (model.oov_policy == OovPolicy::neutral_donor) {
    if (auto donor = model.find(model.neutral_donor)) return *donor;
    fail(ErrorCode::neutral_donor_missing,
         "neutral donor word '" + model.neutral_donor +
             "' is not in the vocabulary");
  }
  return -1;
}

void collect_rows(const SentimentModel& model, const TreeNode& node,
                  std::set<int>* rows) {
  if (node.is_leaf()) {
    int row = resolve_row(model, node.token);
    if (row >= 0) rows->insert(row);
    return;
  }
  collect_rows(model, *node.left, rows);
  collect_rows(model, *node.right, rows);
}

double subtree_ce(const TreeNode& node) {
  double total = -std::log(node.dist[gold_of(node)]);
  if (!node.is_leaf()) {
    total += subtree_ce(*node.left);
    total += subtree_ce(*node.right);
  }
  return total;
}

long count_nodes(const TreeNode& node) {
  if (node.is_leaf()) return 1;
  return 1 + count_nodes(*node.left) + count_nodes(*node.right);
}

double params_squared_norm(const SentimentModel& model,
                           const std::set<int>& rows) {
  double sq = 0.0;
  for (const auto& slice : model.layer.V) sq += slice.squaredNorm();
  sq += model.layer.W.squaredNorm();
  sq += model.layer.b.squaredNorm();
  sq += model.head.Ws.squaredNorm();
  sq += model.head.bs.squaredNorm();
  for (int row : rows) sq += model.embeddings.row(row).squaredNorm();
  return sq;
}

void backward(const SentimentModel& model, const TreeNode& node,
              const Eigen::VectorXd& from_parent, GradientBundle* g) {
  const int d = model.dim;
  Vector5d delta_y = node.dist;
  delta_y[gold_of(node)] -= 1.0;
  g->Ws += delta_y * node.vector.transpose();
  g->bs += delta_y;
  Eigen::VectorXd delta_p = model.head.Ws.transpose() * delta_y + from_parent;
  if (node.is_leaf()) {
    int row = resolve_row(model, node.token);
    if (row >= 0) {
      auto [it, _] = g->embedding_rows.try_emplace(row, Eigen::VectorXd::Zero(d));
      it->second += delta_p;
    }
    return;
  }
  // d tanh(z)/dz = 1 - p^2, with p the node vector saved by the forward pass.
  Eigen::VectorXd delta_z =
      (delta_p.array() * (1.0 - node.vector.array().square())).matrix();
  g->b += delta_z;
  Eigen::VectorXd c(2 * d);
  c << node.left->vector, node.right->vector;
  g->W += delta_z * c.transpose();
  Eigen::MatrixXd outer = c * c.transpose();
  Eigen::VectorXd delta_c = model.layer.W.transpose() * delta_z;
  for (int k = 0; k < d; ++k) {
    g->V[k] += delta_z[k] * outer;
    delta_c +=
        delta_z[k] * ((model.layer.V[k] + model.layer.V[k].transpose()) * c);
  }
  backward(model, *node.left, delta_c.head(d), g);
  backward(model, *node.right, delta_c.tail(d), g);
}

bool model_finite(const SentimentModel& model) {
  if (!model.embeddings.allFinite()) return false;
  for (const auto& slice : model.layer.V) {
    if (!slice.allFinite()) return false;
  }
  return model.layer.W.allFinite() && model.layer.b.allFinite() &&
         model.head.Ws.allFinite() && model.head.bs.allFinite();
}

// A named mutable view of one scalar parameter, used by the gradient check.
struct ParamView {
  std::string name;
  double* value;
  double analytic;
};

std::vector<ParamView> enumerate_params(SentimentModel& model,
                                        const GradientBundle& analytic) {
  const int d = model.dim;
  std::vector<ParamView> views;
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < 2 * d; ++i) {
      for (int j = 0; j < 2 * d; ++j) {
        views.push_back({"V[" + std::to_string(k) + "](" + std::to_string(i) +
                             "," + std::to_string(j) + ")",
                         &model.layer.V[k](i, j), analytic.V[k](i, j)});
      }
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < 2 * d; ++j) {
      views.push_back({"W(" + std::to_string(i) + "," + std::to_string(j) + ")",
                       &model.layer.W(i, j), analytic.W(i, j)});
    }
  }
  for (int i = 0; i < d; ++i) {
    views.push_back({"b(" + std::to_string(i) + ")", &model.layer.b[i],
                     analytic.b[i]});
  }
  for (int i = 0; i < kNumClasses; ++i) {
    for (int j = 0; j < d; ++j) {
      views.push_back({"Ws(" + std::to_string(i) + "," + std::to_string(j) +
                           ")",
                       &model.head.Ws(i, j), analytic.Ws(i, j)});
    }
  }
  for (int i = 0; i < kNumClasses; ++i) {
    views.push_back({"bs(" + std::to_string(i) + ")", &model.head.bs[i],
                     analytic.bs[i]});
  }
  for (int row = 0; row < static_cast<int>(model.vocab_size()); ++row) {
    auto it = analytic.embedding_rows.find(row);
    for (int j = 0; j < d; ++j) {
      double a = it == analytic.embedding_rows.end() ? 0.0 : it->second[j];
      views.push_back({"E[" + model.words[row] + "](" + std::to_string(j) + ")",
                       &model.embeddings(row, j), a});
    }
  }
  return views;
}

}  // namespace

GradientBundle GradientBundle::zeros_like(const SentimentModel& model) {
  const int d = model.dim;
  GradientBundle g;
  g.V.assign(d, Eigen::MatrixXd::Zero(2 * d, 2 * d));
  g.W = Eigen::MatrixXd::Zero(d, 2 * d);
  g.b = Eigen::VectorXd::Zero(d);
  g.Ws = Eigen::MatrixXd::Zero(kNumClasses, d);
  g.bs = Eigen::VectorXd::Zero(kNumClasses);
  return g;
}

void GradientBundle::add(const GradientBundle& other) {
  if (V.size() != other.V.size() || W.rows() != other.W.rows() ||
      W.cols() != other.W.cols()) {
    fail(ErrorCode::dimension_mismatch, "gradient bundles have different shapes");
  }
  for (size_t k = 0; k < V.size(); ++k) V[k] += other.V[k];
  W += other.W;
  b += other.b;
  Ws += other.Ws;
  bs += other.bs;
  for (const auto& [row, vec] : other.embedding_rows) {
    auto [it, inserted] = embedding_rows.try_emplace(row, vec);
    if (!inserted) it->second += vec;
  }
}

void GradientBundle::scale(double factor) {
  for (auto& slice : V) slice *= factor;
  W *= factor;
  b *= factor;
  Ws *= factor;
  bs *= factor;
  for (auto& [row, vec] : embedding_rows) vec *= factor;
}

bool GradientBundle::finite() const {
  for (const auto& slice : V) {
    if (!slice.allFinite()) return false;
  }
  if (!W.allFinite() || !b.allFinite() || !Ws.allFinite() || !bs.allFinite()) {
    return false;
  }
  for (const auto& [row, vec] : embedding_rows) {
    if (!vec.allFinite()) return false;
  }
  return true;
}

double tree_loss(const SentimentModel& model, const SentimentTree& tree,
                 double l2) {
  if (!model.loaded()) {
    fail(ErrorCode::model_not_loaded, "loss on an uninitialized model");
  }
  if (tree.empty()) fail(ErrorCode::empty_tree, "loss on an empty tree");
  SentimentTree work = tree.clone();
  forward(model, work);
  double total = subtree_ce(*work.root);
  if (l2 != 0.0) {
    std::set<int> rows;
    collect_rows(model, *work.root, &rows);
    total += l2 * params_squared_norm(model, rows);
  }
  return total;
}

GradientBundle gradients(const SentimentModel& model,
                         const SentimentTree& tree, double l2) {
  if (!model.loaded()) {
    fail(ErrorCode::model_not_loaded, "gradients on an uninitialized model");
  }
  if (tree.empty()) fail(ErrorCode::empty_tree, "gradients on an empty tree");
  SentimentTree work = tree.clone();
  forward(model, work);
  GradientBundle g = GradientBundle::zeros_like(model);
  backward(model, *work.root, Eigen::VectorXd::Zero(model.dim), &g);
  if (l2 != 0.0) {
    const double two_l2 = 2.0 * l2;
    for (int k = 0; k < model.dim; ++k) g.V[k] += two_l2 * model.layer.V[k];
    g.W += two_l2 * model.layer.W;
    g.b += two_l2 * model.layer.b;
    g.Ws += two_l2 * model.head.Ws;
    g.bs += two_l2 * model.head.bs;
    // backward() inserted a row for every leaf that reads E, so the keys are
    // exactly the touched rows the loss regularizes.
    for (auto& [row, vec] : g.embedding_rows) {
      vec += two_l2 * model.embeddings.row(row).transpose();
    }
  }
  return g;
}

GradCheckReport grad_check_against(const SentimentModel& model,
                                   const SentimentTree& tree, double l2,
                                   double epsilon,
                                   const GradientBundle& analytic) {
  if (!(epsilon > 0.0)) {
    fail(ErrorCode::invalid_argument, "epsilon must be positive");
  }
  SentimentModel work = model;
  std::vector<ParamView> views = enumerate_params(work, analytic);
  GradCheckReport report;
  report.parameters_checked = views.size();
  for (const auto& view : views) {
    const double original = *view.value;
    *view.value = original + epsilon;
    double loss_plus = tree_loss(work, tree, l2);
    *view.value = original - epsilon;
    double loss_minus = tree_loss(work, tree, l2);
    *view.value = original;
    double numeric = (loss_plus - loss_minus) / (2.0 * epsilon);
    double rel = std::abs(view.analytic - numeric) /
                 std::max(1e-12, std::abs(view.analytic) + std::abs(numeric));
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_parameter = view.name;
      report.worst_analytic = view.analytic;
      report.worst_numeric = numeric;
    }
  }
  return report;
}

GradCheckReport grad_check(const SentimentModel& model,
                           const SentimentTree& tree, double l2,
                           double epsilon) {
  return grad_check_against(model, tree, l2, epsilon,
                            gradients(model, tree, l2));
}

AdaGrad::AdaGrad(double learning_rate, double epsilon)
    : learning_rate_(learning_rate), epsilon_(epsilon) {
  if (!(learning_rate > 0.0)) {
    fail(ErrorCode::invalid_argument, "learning rate must be positive");
  }
  if (!(epsilon > 0.0)) {
    fail(ErrorCode::invalid_argument, "adagrad epsilon must be positive");
  }
}

void AdaGrad::init(const SentimentModel& model) {
  const int d = model.dim;
  gV_.assign(d, Eigen::MatrixXd::Zero(2 * d, 2 * d));
  gW_ = Eigen::MatrixXd::Zero(d, 2 * d);
  gb_ = Eigen::VectorXd::Zero(d);
  gWs_ = Eigen::MatrixXd::Zero(kNumClasses, d);
  gbs_ = Eigen::VectorXd::Zero(kNumClasses);
  gE_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(model.vocab_size()), d);
  initialized_ = true;
}

void AdaGrad::step(SentimentModel& model, const GradientBundle& grads) {
  if (!initialized_) init(model);
  if (static_cast<int>(grads.V.size()) != model.dim ||
      static_cast<int>(gV_.size()) != model.dim) {
    fail(ErrorCode::dimension_mismatch,
         "gradient bundle does not match the model");
  }
  if (gE_.rows() < static_cast<Eigen::Index>(model.vocab_size())) {
    // The vocabulary can grow between steps (adaptation inserts words).
    Eigen::Index old_rows = gE_.rows();
    gE_.conservativeResize(static_cast<Eigen::Index>(model.vocab_size()),
                           model.dim);
    gE_.bottomRows(gE_.rows() - old_rows).setZero();
  }
  auto apply = [&](auto& theta, auto& acc, const auto& grad) {
    acc.array() += grad.array().square();
    theta.array() -=
        learning_rate_ * grad.array() / (acc.array().sqrt() + epsilon_);
  };
  for (int k = 0; k < model.dim; ++k) apply(model.layer.V[k], gV_[k], grads.V[k]);
  apply(model.layer.W, gW_, grads.W);
  apply(model.layer.b, gb_, grads.b);
  apply(model.head.Ws, gWs_, grads.Ws);
  apply(model.head.bs, gbs_, grads.bs);
  for (const auto& [row, vec] : grads.embedding_rows) {
    if (row < 0 || row >= gE_.rows()) {
      fail(ErrorCode::dimension_mismatch,
           "gradient for embedding row " + std::to_string(row) +
               " is out of range");
    }
    gE_.row(row).array() += vec.transpose().array().square();
    model.embeddings.row(row).array() -=
        learning_rate_ * vec.transpose().array() /
        (gE_.row(row).array().sqrt() + epsilon_);
  }
}

namespace {

void require_labeled(const TreeNode& node) {
  if (!node.gold_label) {
    fail(ErrorCode::unlabeled_node, "treebank tree has an unlabeled node");
  }
  if (!node.is_leaf()) {
    require_labeled(*node.left);
    require_labeled(*node.right);
  }
}

void tally_labels(const TreeNode& node, std::array<bool, kNumClasses>& seen) {
  if (node.gold_label) seen[static_cast<int>(*node.gold_label)] = true;
  if (!node.is_leaf()) {
    tally_labels(*node.left, seen);
    tally_labels(*node.right, seen);
  }
}

}  // namespace

LabeledTreebank LabeledTreebank::from_trees(std::vector<SentimentTree> trees) {
  if (trees.empty()) fail(ErrorCode::empty_treebank, "treebank has no trees");
  std::array<bool, kNumClasses> seen{};
  for (const auto& tree : trees) {
    if (tree.empty()) fail(ErrorCode::empty_tree, "treebank contains an empty tree");
    require_labeled(*tree.root);
    tally_labels(*tree.root, seen);
  }
  for (int c = 0; c < kNumClasses; ++c) {
    if (!seen[c]) {
      fail(ErrorCode::invalid_argument,
           std::string("treebank never uses class ") + five_class_name(
               static_cast<FiveClass>(c)));
    }
  }
  LabeledTreebank bank;
  bank.trees = std::move(trees);
  return bank;
}

LabeledTreebank LabeledTreebank::from_file(const std::string& path) {
  return from_trees(load_treebank(path));
}

size_t LabeledTreebank::node_count() const {
  size_t total = 0;
  for (const auto& tree : trees) total += static_cast<size_t>(count_nodes(*tree.root));
  return total;
}

double mean_node_loss(const SentimentModel& model,
                      const LabeledTreebank& bank) {
  if (bank.trees.empty()) {
    fail(ErrorCode::empty_treebank, "treebank has no trees");
  }
  double total = 0.0;
  long nodes = 0;
  for (const auto& tree : bank.trees) {
    total += tree_loss(model, tree, 0.0);
    nodes += count_nodes(*tree.root);
  }
  return total / static_cast<double>(nodes);
}

TrainResult train(const LabeledTreebank& bank, const TrainConfig& config) {
  if (bank.trees.empty()) {
    fail(ErrorCode::empty_treebank, "treebank has no trees");
  }
  if (config.dim < 1) fail(ErrorCode::invalid_argument, "dim must be >= 1");
  if (config.epochs < 1) fail(ErrorCode::invalid_argument, "epochs must be >= 1");
  if (config.batch_size < 1) {
    fail(ErrorCode::invalid_argument, "batch size must be >= 1");
  }
  if (!(config.learning_rate > 0.0)) {
    fail(ErrorCode::invalid_argument, "learning rate must be positive");
  }
  if (config.l2 < 0.0) fail(ErrorCode::invalid_argument, "l2 must be >= 0");
  if (config.threads < 1) fail(ErrorCode::invalid_argument, "threads must be >= 1");
  for (const auto& tree : bank.trees) {
    if (tree.empty()) fail(ErrorCode::empty_tree, "treebank contains an empty tree");
    require_labeled(*tree.root);
  }

  // Vocabulary rows in first-appearance order over the case-folded leaves.
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  for (const auto& tree : bank.trees) {
    for (const auto& token : tree.leaf_tokens()) {
      std::string key = to_lower(token);
      if (seen.insert(key).second) words.push_back(std::move(key));
    }
  }

  TrainResult result;
  result.model =
      make_random_model(config.dim, words, config.seed, config.init_scale);
  result.initial_mean_node_loss = mean_node_loss(result.model, bank);

  AdaGrad optimizer(config.learning_rate);
  optimizer.init(result.model);
  DeterministicRng rng(config.seed ^ fnv1a("epoch-shuffle"));
  std::vector<size_t> order(bank.trees.size());
  std::iota(order.begin(), order.end(), size_t{0});

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(config.batch_size)) {
      size_t count = std::min(static_cast<size_t>(config.batch_size),
                              order.size() - start);
      std::vector<GradientBundle> bundles = parallel_map<GradientBundle>(
          count, config.threads, [&](size_t i) {
            return gradients(result.model, bank.trees[order[start + i]],
                             config.l2);
          });
      GradientBundle batch = GradientBundle::zeros_like(result.model);
      for (const auto& bundle : bundles) batch.add(bundle);
      batch.scale(1.0 / static_cast<double>(count));
      optimizer.step(result.model, batch);
    }
    double mean = mean_node_loss(result.model, bank);
    if (!std::isfinite(mean) || !model_finite(result.model)) {
      fail(ErrorCode::internal_error,
           "training diverged at epoch " + std::to_string(epoch));
    }
    result.history.push_back({epoch, mean});
  }

  result.final_mean_node_loss = result.history.empty()
                                    ? result.initial_mean_node_loss
                                    : result.history.back().mean_node_loss;
  return result;
}

SentimentTree random_labeled_tree(DeterministicRng& rng,
                                  const std::vector<std::string>& words,
                                  int leaves) {
  if (words.empty()) {
    fail(ErrorCode::invalid_argument, "word pool is empty");
  }
  if (leaves < 1) {
    fail(ErrorCode::invalid_argument, "a tree needs at least one leaf");
  }
  if (leaves == 1) {
    size_t word = rng.next_below(words.size());
    auto label = static_cast<FiveClass>(rng.next_below(kNumClasses));
    return make_leaf(words[word], label);
  }
  int left_leaves = 1 + static_cast<int>(rng.next_below(
                            static_cast<uint64_t>(leaves - 1)));
  SentimentTree left = random_labeled_tree(rng, words, left_leaves);
  SentimentTree right = random_labeled_tree(rng, words, leaves - left_leaves);
  auto label = static_cast<FiveClass>(rng.next_below(kNumClasses));
  return make_internal(std::move(left), std::move(right), label);
}

}  // namespace lexsent
