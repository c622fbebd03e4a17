#include "tree.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace lexsent {

namespace {

int count_nodes(const TreeNode* node, bool leaves_only) {
  if (!node) return 0;
  if (node->is_leaf()) return 1;
  int self = leaves_only ? 0 : 1;
  return self + count_nodes(node->left.get(), leaves_only) +
         count_nodes(node->right.get(), leaves_only);
}

bool all_labeled(const TreeNode* node) {
  if (!node) return true;
  if (!node->gold_label.has_value()) return false;
  return all_labeled(node->left.get()) && all_labeled(node->right.get());
}

void collect_tokens(const TreeNode* node, std::vector<std::string>& out) {
  if (!node) return;
  if (node->is_leaf()) {
    out.push_back(node->token);
    return;
  }
  collect_tokens(node->left.get(), out);
  collect_tokens(node->right.get(), out);
}

std::unique_ptr<TreeNode> clone_node(const TreeNode* node) {
  if (!node) return nullptr;
  auto copy = std::make_unique<TreeNode>();
  copy->token = node->token;
  copy->gold_label = node->gold_label;
  copy->vector = node->vector;
  copy->dist = node->dist;
  copy->annotated = node->annotated;
  copy->left = clone_node(node->left.get());
  copy->right = clone_node(node->right.get());
  return copy;
}

class SexprReader {
 public:
  explicit SexprReader(std::string_view text) : text_(text) {}

  std::unique_ptr<TreeNode> read() {
    skip_space();
    if (at_end()) fail(ErrorCode::parse_error, "empty tree text");
    std::unique_ptr<TreeNode> node;
    if (peek() == '(') {
      node = read_node();
    } else {
      node = leaf(read_token(), std::nullopt);
    }
    skip_space();
    if (!at_end()) {
      fail(ErrorCode::parse_error,
           "trailing content at position " + std::to_string(pos_));
    }
    return node;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  std::string read_token() {
    size_t start = pos_;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) &&
           peek() != '(' && peek() != ')') {
      ++pos_;
    }
    if (pos_ == start) {
      fail(ErrorCode::parse_error,
           "expected a token at position " + std::to_string(pos_));
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  static std::unique_ptr<TreeNode> leaf(std::string token,
                                        std::optional<FiveClass> label) {
    auto node = std::make_unique<TreeNode>();
    node->token = std::move(token);
    node->gold_label = label;
    return node;
  }

  static std::optional<FiveClass> as_label(const std::string& token) {
    if (token.size() == 1 && token[0] >= '0' && token[0] <= '4') {
      return static_cast<FiveClass>(token[0] - '0');
    }
    return std::nullopt;
  }

  std::unique_ptr<TreeNode> read_node() {
    size_t open = pos_;
    ++pos_;  // consume '('
    struct Item {
      std::unique_ptr<TreeNode> node;  // null means bare token
      std::string token;
    };
    std::vector<Item> items;
    while (true) {
      skip_space();
      if (at_end()) {
        fail(ErrorCode::parse_error,
             "unbalanced '(' opened at position " + std::to_string(open));
      }
      if (peek() == ')') {
        ++pos_;
        break;
      }
      if (peek() == '(') {
        items.push_back({read_node(), ""});
      } else {
        items.push_back({nullptr, read_token()});
      }
    }

    // A leading integer token is the gold label when anything follows it.
    std::optional<FiveClass> label;
    size_t first = 0;
    if (items.size() >= 2 && !items[0].node) {
      if (auto l = as_label(items[0].token)) {
        label = l;
        first = 1;
      }
    }
    size_t arity = items.size() - first;

    auto span = [&] {
      return "span starting at position " + std::to_string(open);
    };

    if (arity == 1) {
      if (items[first].node) {
        fail(ErrorCode::non_binary_node, "unary node, " + span());
      }
      return leaf(std::move(items[first].token), label);
    }
    if (arity == 2) {
      auto to_child = [&](Item& item) -> std::unique_ptr<TreeNode> {
        if (item.node) return std::move(item.node);
        return leaf(std::move(item.token), std::nullopt);
      };
      bool first_is_token = items[first].node == nullptr;
      bool second_is_token = items[first + 1].node == nullptr;
      if (first_is_token != second_is_token) {
        fail(ErrorCode::non_binary_node,
             "token mixed with a subtree, " + span());
      }
      auto node = std::make_unique<TreeNode>();
      node->gold_label = label;
      node->left = to_child(items[first]);
      node->right = to_child(items[first + 1]);
      return node;
    }
    fail(ErrorCode::non_binary_node,
         std::to_string(arity) + " children, " + span());
  }

  std::string_view text_;
  size_t pos_ = 0;
};

void write_node(const TreeNode* node, bool with_labels, std::string& out) {
  out += '(';
  if (with_labels && node->gold_label) {
    out += std::to_string(static_cast<int>(*node->gold_label));
    out += ' ';
  }
  if (node->is_leaf()) {
    out += node->token;
  } else {
    write_node(node->left.get(), with_labels, out);
    out += ' ';
    write_node(node->right.get(), with_labels, out);
  }
  out += ')';
}

}  // namespace

int SentimentTree::leaf_count() const { return count_nodes(root.get(), true); }
int SentimentTree::node_count() const { return count_nodes(root.get(), false); }
bool SentimentTree::fully_labeled() const {
  return root != nullptr && all_labeled(root.get());
}

std::vector<std::string> SentimentTree::leaf_tokens() const {
  std::vector<std::string> out;
  collect_tokens(root.get(), out);
  return out;
}

SentimentTree SentimentTree::clone() const {
  return SentimentTree{clone_node(root.get())};
}

SentimentTree make_leaf(std::string token, std::optional<FiveClass> label) {
  auto node = std::make_unique<TreeNode>();
  node->token = std::move(token);
  node->gold_label = label;
  return SentimentTree{std::move(node)};
}

SentimentTree make_internal(SentimentTree left, SentimentTree right,
                            std::optional<FiveClass> label) {
  auto node = std::make_unique<TreeNode>();
  node->gold_label = label;
  node->left = std::move(left.root);
  node->right = std::move(right.root);
  return SentimentTree{std::move(node)};
}

SentimentTree read_tree(std::string_view text) {
  return SentimentTree{SexprReader(text).read()};
}

SentimentTree binarize(const std::vector<std::string>& tokens) {
  if (tokens.empty()) fail(ErrorCode::empty_phrase, "no tokens to binarize");
  SentimentTree tree = make_leaf(tokens.back());
  for (size_t i = tokens.size() - 1; i-- > 0;) {
    tree = make_internal(make_leaf(tokens[i]), std::move(tree));
  }
  return tree;
}

std::string tree_to_string(const SentimentTree& tree, bool with_labels) {
  if (tree.empty()) fail(ErrorCode::empty_tree, "cannot print an empty tree");
  std::string out;
  write_node(tree.root.get(), with_labels, out);
  return out;
}

std::vector<SentimentTree> parse_treebank(std::string_view content,
                                          const std::string& source_name) {
  std::vector<SentimentTree> trees;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    ++line_no;
    start = end + 1;
    bool blank = true;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        blank = false;
        break;
      }
    }
    if (blank) {
      if (end == content.size()) break;
      continue;
    }
    try {
      trees.push_back(read_tree(line));
    } catch (const Error& e) {
      fail(e.code(), source_name + ":" + std::to_string(line_no) + ": " +
                         e.what());
    }
    if (end == content.size()) break;
  }
  return trees;
}

std::vector<SentimentTree> load_treebank(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open treebank file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_treebank(buf.str(), path);
}

}  // namespace lexsent
