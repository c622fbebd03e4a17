#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace lexsent {

constexpr int kNumClasses = 5;

// Index order is fixed and survives serialization: 0 = very negative,
// 4 = very positive.
enum class FiveClass : int {
  very_negative = 0,
  negative = 1,
  neutral = 2,
  positive = 3,
  very_positive = 4,
};

enum class TwoClass : int {
  negative = 0,
  non_negative = 1,
};

using Vector5d = Eigen::Matrix<double, kNumClasses, 1>;

// Very negative and negative collapse to negative; everything else is
// non-negative.
inline TwoClass map_five_to_two(FiveClass c) {
  switch (c) {
    case FiveClass::very_negative:
    case FiveClass::negative:
      return TwoClass::negative;
    case FiveClass::neutral:
    case FiveClass::positive:
    case FiveClass::very_positive:
      return TwoClass::non_negative;
  }
  fail(ErrorCode::internal_error, "invalid FiveClass value");
}

// Lowest index wins ties.
inline FiveClass argmax_class(const Vector5d& dist) {
  int best = 0;
  for (int i = 1; i < kNumClasses; ++i) {
    if (dist[i] > dist[best]) best = i;
  }
  return static_cast<FiveClass>(best);
}

inline bool is_valid_distribution(const Vector5d& dist, double tol = 1e-9) {
  double sum = 0.0;
  for (int i = 0; i < kNumClasses; ++i) {
    if (!(dist[i] >= 0.0 && dist[i] <= 1.0)) return false;
    sum += dist[i];
  }
  return std::abs(sum - 1.0) <= tol;
}

inline const char* two_class_token(TwoClass c) {
  return c == TwoClass::negative ? "neg" : "nonneg";
}

inline TwoClass parse_two_class(std::string_view token,
                                const std::string& context) {
  if (token == "neg") return TwoClass::negative;
  if (token == "nonneg") return TwoClass::non_negative;
  fail(ErrorCode::parse_error,
       "expected 'neg' or 'nonneg' but found '" + std::string(token) + "' " +
           context);
}

inline const char* five_class_name(FiveClass c) {
  switch (c) {
    case FiveClass::very_negative: return "very-negative";
    case FiveClass::negative: return "negative";
    case FiveClass::neutral: return "neutral";
    case FiveClass::positive: return "positive";
    case FiveClass::very_positive: return "very-positive";
  }
  return "?";
}

}  // namespace lexsent
