#pragma once

#include <span>
#include <variant>
#include <vector>

#include "riesz/interval_sets.hpp"
#include "riesz/monotone.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

/// Pairwise-disjoint intervals, kept sorted.
class IntervalUnion {
 public:
  /// Throws DomainError if two components share a point.
  static IntervalUnion make(std::vector<Interval> items);
  const std::vector<Interval>& items() const { return items_; }

 private:
  std::vector<Interval> items_;
};

/// The sets a Lebesgue-Stieltjes measure can be evaluated on exactly.
using BorelSetDesc = std::variant<Interval, IntervalUnion, CompactSet, GapDecomposition>;

/// Components of a descriptor as a flat list of intervals.
std::vector<Interval> components(const BorelSetDesc& set);

/// The measure induced by a normalized monotone function: μ((s,t]) = α(t) - α(s)
/// for s > a and μ([a,t]) = α(t), so an atom at a is the mass of {a}.
class LSMeasure {
 public:
  /// Normalizes alpha.
  explicit LSMeasure(const MonotoneFn& alpha) : alpha_(normalize(alpha)) {}

  const MonotoneFn& alpha() const { return alpha_; }
  const ClosedInterval& hull() const { return alpha_.hull(); }
  double total_mass() const;

  /// μ([a, x]).
  double cdf(double x) const;
  /// μ([a, x)).
  double cdf_before(double x) const;

 private:
  MonotoneFn alpha_;
};

double measure_set(const LSMeasure& mu, const BorelSetDesc& set);

/// ∫_A f dμ: atoms of A contribute f(c)·μ({c}), the continuous part is
/// integrated over the closure of each component of A. On the full hull the
/// result coincides with rs_integral(f, α, tol).
QuadratureResult lebesgue_integral(const RealFn& f, const LSMeasure& mu, const BorelSetDesc& set,
                                   double tol, std::span<const double> breakpoints = {});

struct InnerApproximation {
  std::vector<ClosedInterval> closed;
  /// μ(A \ F), always reported exactly as computed.
  double defect = 0.0;
};

/// Closed F ⊆ A with μ(A \ F) < eps. Each gap is shrunk from its open ends by
/// a bisected margin that shaves less than eps / (#gaps); gaps lighter than
/// that are dropped whole.
InnerApproximation inner_approx(const LSMeasure& mu, const GapDecomposition& set, double eps);

}  // namespace riesz
