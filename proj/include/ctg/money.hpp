#pragma once

#include <cmath>

namespace ctg::money {

// Tolerance for algebraic identities (budget balance, cost bookkeeping).
inline constexpr double kEpsIdentity = 1e-9;
// Tolerance for values that come out of an optimisation (objective compares).
inline constexpr double kEpsOptimal = 1e-6;

inline bool eq(double a, double b, double eps = kEpsIdentity) {
  return std::fabs(a - b) <= eps;
}

// Weak inequality a <= b, with identity slack.
inline bool leq(double a, double b, double eps = kEpsIdentity) {
  return a <= b + eps;
}

// Strict inequality a < b; values closer than eps count as a tie.
inline bool lt(double a, double b, double eps = kEpsIdentity) {
  return a < b - eps;
}

}  // namespace ctg::money
