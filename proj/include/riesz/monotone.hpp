#pragma once

#include <memory>
#include <string>
#include <vector>

#include "riesz/interval_sets.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

struct Knot {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Knot&, const Knot&) = default;
};

// Which side of a jump the function value sits on.
enum class AtomSide { right, left };

struct Atom {
  double at = 0.0;
  double weight = 0.0;
  AtomSide side = AtomSide::right;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A nonnegative continuous density on a closed support, contributing
/// x -> ∫_{lo}^{min(x,hi)} rho to the continuous part of a monotone function.
/// Partial masses come from a cumulative table built once at construction, so
/// the full-support mass is a fixed number shared by every query.
class DensityTerm {
 public:
  static DensityTerm make(RealFn rho, ClosedInterval support, std::string label = {});

  const ClosedInterval& support() const { return data_->support; }
  const std::string& label() const { return data_->label; }
  double mass() const { return data_->cumulative.back(); }
  double density(double x) const { return data_->rho(x); }
  const RealFn& rho() const { return data_->rho; }

  /// ∫ rho over [u, v] ∩ support.
  double mass_between(double u, double v) const;
  /// ∫ f·rho over [lo, hi] ∩ support with local tolerance tol.
  QuadratureResult integrate(const RealFn& f, double lo, double hi, double tol) const;
  /// Edges of the cells behind the cumulative table, support ends included.
  std::vector<double> cell_edges() const;

 private:
  struct Data {
    RealFn rho;
    ClosedInterval support;
    std::string label;
    std::vector<double> cumulative;  // cumulative[i] = mass on [lo, lo + i·cell]
    double cell_tol = 0.0;
  };
  double cumulative_at(double x) const;

  std::shared_ptr<const Data> data_;
};

struct Limits {
  double left = 0.0;
  double value = 0.0;
  double right = 0.0;
};

struct Variation {
  double value = 0.0;
};

/// Nondecreasing α on [a, b]: offset + piecewise-linear part + density terms
/// + jumps. A right-sided atom contributes to α(x) for x >= at, except that an
/// atom sitting exactly at a never contributes to α(a) itself; a left-sided
/// atom contributes for x > at. With zero offset, α(a) = 0 and right-sided
/// atoms only, the function is normalized.
class MonotoneFn {
 public:
  /// Knots must have strictly increasing x and nondecreasing y; missing hull
  /// endpoints are filled by extending the first/last value. Atoms must have
  /// positive weights and strictly increasing locations inside the hull.
  static MonotoneFn make(ClosedInterval hull, std::vector<Knot> knots,
                         std::vector<Atom> atoms = {}, std::vector<DensityTerm> densities = {},
                         double offset = 0.0);
  static MonotoneFn zero(ClosedInterval hull);
  /// α(x) = x - a.
  static MonotoneFn identity(ClosedInterval hull);
  static MonotoneFn step(ClosedInterval hull, double at, double weight);

  const ClosedInterval& hull() const { return hull_; }
  const std::vector<Knot>& knots() const { return knots_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityTerm>& densities() const { return densities_; }
  double offset() const { return offset_; }

  double operator()(double x) const { return eval_with_limits(x).value; }
  /// (α(x-), α(x), α(x+)), with α(a-) := α(a) and α(b+) := α(b).
  Limits eval_with_limits(double x) const;

  /// Piecewise-linear part at x (no offset, densities or atoms).
  double linear_part(double x) const;
  /// Increase of the continuous part (linear + densities) over [u, v].
  double continuous_rise(double u, double v) const;
  /// Sum of atom weights located in the given interval.
  double atom_weight_in(const Interval& interval) const;

  bool is_normalized() const;

 private:
  MonotoneFn() = default;
  void check_in_hull(double x) const;

  ClosedInterval hull_;
  std::vector<Knot> knots_;
  std::vector<Atom> atoms_;
  std::vector<double> atom_prefix_;  // atom_prefix_[i] = Σ weights of atoms_[0..i)
  std::vector<DensityTerm> densities_;
  double offset_ = 0.0;
};

/// α - α(a), with every jump re-expressed right-continuously. Idempotent.
MonotoneFn normalize(const MonotoneFn& alpha);

/// α(b) - α(a).
Variation total_variation(const MonotoneFn& alpha);

/// Normalized pointwise sum; hulls must match.
MonotoneFn combine(const MonotoneFn& lhs, const MonotoneFn& rhs);

/// Piecewise-linear Cantor function: rises by 2^-depth across each part of
/// cantor_approx(depth, hull) and is flat on every gap.
MonotoneFn devil_staircase(int depth, ClosedInterval hull);

/// True iff α(v-) - α(u+) vanishes (within 1e-12) and no atom lies in (u, v).
bool is_constant_on(const MonotoneFn& alpha, double u, double v);

inline constexpr double kIdentityTolerance = 1e-12;

}  // namespace riesz
