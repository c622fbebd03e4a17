#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "classes.hpp"

namespace lexsent {

// Strictly binary phrase tree. Leaves carry a token; after a forward pass
// every node carries a vector and a five-class distribution.
struct TreeNode {
  std::string token;  // leaves only
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  std::optional<FiveClass> gold_label;

  Eigen::VectorXd vector;
  Vector5d dist = Vector5d::Zero();
  bool annotated = false;

  bool is_leaf() const { return left == nullptr; }
};

struct SentimentTree {
  std::unique_ptr<TreeNode> root;

  bool empty() const { return root == nullptr; }
  int leaf_count() const;
  int node_count() const;
  bool fully_labeled() const;
  std::vector<std::string> leaf_tokens() const;
  SentimentTree clone() const;
};

SentimentTree make_leaf(std::string token,
                        std::optional<FiveClass> label = std::nullopt);
SentimentTree make_internal(SentimentTree left, SentimentTree right,
                            std::optional<FiveClass> label = std::nullopt);

// Reads one s-expression tree. Accepted node forms:
//   word                      bare leaf (top level only)
//   (word)                    leaf
//   (L word)                  labeled leaf, L an integer 0-4
//   (child child)             internal node
//   (L child child)           labeled internal node
// where each child is itself (...) or, in the two-word form (word word), a
// bare token. Anything else (three or more children, a lone nested node, a
// token mixed with a subtree) reports NonBinaryNode with the offending span.
SentimentTree read_tree(std::string_view text);

// Right-branching fallback: (t1 (t2 (... (tn-1 tn)))).
SentimentTree binarize(const std::vector<std::string>& tokens);

// Round-trips what read_tree accepts; used for fixtures and diagnostics.
std::string tree_to_string(const SentimentTree& tree, bool with_labels = true);

// One tree per non-empty line; every node must carry a label.
std::vector<SentimentTree> load_treebank(const std::string& path);
std::vector<SentimentTree> parse_treebank(std::string_view content,
                                          const std::string& source_name);

}  // namespace lexsent
