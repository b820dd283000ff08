#pragma once

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "riesz/expr.hpp"
#include "riesz/interval_sets.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

/// Linear interpolation through samples, held constant beyond the end samples.
struct SampledSegment {
  std::vector<double> xs;
  std::vector<double> ys;

  double operator()(double x) const;
};

using Segment = std::variant<expr::Expression, SampledSegment, RealFn>;

struct Piece {
  ClosedInterval span;
  Segment segment;
};

/// A continuous function on a compact domain described piece by piece.
/// Evaluating outside the domain throws DomainError.
class PiecewiseFunction {
 public:
  /// Pieces must lie in the domain and cover it.
  static PiecewiseFunction make(CompactSet domain, std::vector<Piece> pieces);
  /// One segment per part of the domain.
  static PiecewiseFunction on_parts(const CompactSet& domain, std::vector<Segment> segments);

  double operator()(double x) const;

  const CompactSet& domain() const { return domain_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  /// Piece endpoints, i.e. the places where the description may have kinks.
  std::vector<double> breakpoints() const;

 private:
  PiecewiseFunction(CompactSet domain, std::vector<Piece> pieces)
      : domain_(std::move(domain)), pieces_(std::move(pieces)) {}

  CompactSet domain_;
  std::vector<Piece> pieces_;
};

/// r(f): f seen as an element of C(K).
PiecewiseFunction restrict(const RealFn& f, const CompactSet& k);
PiecewiseFunction restrict(const expr::Expression& f, const CompactSet& k);
PiecewiseFunction restrict(const PiecewiseFunction& f, const CompactSet& k);

/// Continuous extension of f ∈ C(K) to the hull: f itself on K, the chord
/// (1 - t) f(u) + t f(v) across each interior gap (u, v), and the nearest
/// K-value across a gap touching the hull boundary. Never exceeds sup |f|.
PiecewiseFunction extend_linear(const PiecewiseFunction& f, const CompactSet& k);

/// x -> d(x, F) / (d(x, F) + d(x, K)): 1 on K, 0 on F, in [0, 1].
class Urysohn {
 public:
  Urysohn(CompactSet k, CompactSet f) : k_(std::move(k)), f_(std::move(f)) {}

  double operator()(double x) const;
  /// Same values as operator(), bit for bit, through the batch kernels.
  void evaluate(std::span<const double> xs, std::span<double> out) const;

  const CompactSet& near() const { return k_; }
  const CompactSet& far() const { return f_; }

 private:
  CompactSet k_;
  CompactSet f_;
};

/// Throws DomainError if F is empty, leaves the hull or meets K.
Urysohn urysohn(const CompactSet& k, std::vector<ClosedInterval> f, ClosedInterval hull);

/// f_k(x) = max{0, 1 - k d(x, C)}: equal to 1 on C, decreasing to 1_C as k grows.
class IndicatorApprox {
 public:
  IndicatorApprox(CompactSet c, double k);

  double operator()(double x) const;
  void evaluate(std::span<const double> xs, std::span<double> out) const;

  double k() const { return k_; }
  const CompactSet& set() const { return c_; }
  /// Where f_k has kinks: the ends of each part and the points 1/k beyond them.
  std::vector<double> breakpoints() const;

 private:
  CompactSet c_;
  double k_;
};

IndicatorApprox indicator_approx(const CompactSet& c, double k);
IndicatorApprox indicator_approx(std::vector<ClosedInterval> c, double k);

}  // namespace riesz
