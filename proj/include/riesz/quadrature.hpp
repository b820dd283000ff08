#pragma once

#include <cstddef>
#include <functional>

namespace riesz {

using RealFn = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;

  QuadratureResult& operator+=(const QuadratureResult& other) {
    value += other.value;
    error_estimate += other.error_estimate;
    evaluations += other.evaluations;
    converged = converged && other.converged;
    return *this;
  }
};

inline constexpr int kMaxBisectionDepth = 50;
inline constexpr std::size_t kMaxEvaluationsPerCall = 4'000'000;

/// Adaptive bisection on [lo, hi]. Each panel compares the trapezoid-derived
/// Simpson estimate on the whole panel against the two halves; the panel is
/// accepted once |S2 - S1| / 15 < tol (the tolerance is split evenly between
/// halves on refinement) and contributes the Richardson value S2 + (S2 - S1)/15.
/// Hitting the depth cap or the evaluation budget keeps the best value, marks
/// the result unconverged and reports the raw |S2 - S1| as the error.
/// Throws NumericError if g returns a non-finite value.
QuadratureResult adaptive_simpson(const RealFn& g, double lo, double hi, double tol);

}  // namespace riesz
