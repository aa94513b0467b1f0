#pragma once

namespace cdm {

/// Sign of an exact geometric test. Raw predicates may return Zero;
/// perturbed predicates never do.
enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

inline Sign sign_of(double v) {
  return v > 0 ? Sign::Positive : (v < 0 ? Sign::Negative : Sign::Zero);
}
inline Sign sign_of_int(int v) {
  return v > 0 ? Sign::Positive : (v < 0 ? Sign::Negative : Sign::Zero);
}
inline Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }
inline Sign operator*(Sign a, Sign b) {
  return static_cast<Sign>(static_cast<int>(a) * static_cast<int>(b));
}
inline int to_int(Sign s) { return static_cast<int>(s); }

}  // namespace cdm
