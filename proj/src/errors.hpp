#pragma once

#include <stdexcept>
#include <string>

namespace lexsent {

// One code per failure mode surfaced through the C API. Values are part of
// the ABI; append only.
enum class ErrorCode : int {
  ok = 0,
  invalid_argument = 1,
  io_error = 2,
  parse_error = 3,
  model_not_loaded = 4,
  neutral_donor_missing = 5,
  dimension_mismatch = 6,
  empty_tree = 7,
  unsupported_version = 8,
  corrupt_model = 9,
  unlabeled_node = 10,
  empty_treebank = 11,
  stoplist_missing = 12,
  empty_table = 13,
  wrong_judge_count = 14,
  duplicate_word = 15,
  missing_gold = 16,
  missing_tag = 17,
  no_donor_for_tag = 18,
  donor_missing = 19,
  duplicate_deviation = 20,
  non_binary_node = 21,
  empty_phrase = 22,
  invalid_distribution = 23,
  length_mismatch = 24,
  empty_input = 25,
  internal_error = 26,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace lexsent
