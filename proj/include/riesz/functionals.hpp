#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "riesz/extension.hpp"
#include "riesz/interval_sets.hpp"
#include "riesz/ls_measure.hpp"
#include "riesz/monotone.hpp"

namespace riesz {

struct WeightedPoint {
  double at = 0.0;
  double weight = 0.0;
};

/// f -> Σ w_i f(c_i).
struct DiracCombo {
  std::vector<WeightedPoint> points;
};

/// f -> ∫_carrier f·rho, one density term per carrier interval.
struct DensityPart {
  std::vector<DensityTerm> terms;

  static DensityPart make(const RealFn& rho, const std::vector<ClosedInterval>& carrier,
                          const std::string& label = {});
};

/// f -> ∫_K f dμ for a measure carried by K.
struct MeasureBacked {
  LSMeasure mu;
};

using FunctionalPart = std::variant<DiracCombo, DensityPart, MeasureBacked>;

/// A positive linear functional on C(K), built from parts that are positive
/// by construction.
class PositiveFunctional {
 public:
  /// Validates that Dirac points and carriers lie in K and that measure-backed
  /// parts put no mass on the gaps of K.
  static PositiveFunctional make(CompactSet k, std::vector<FunctionalPart> parts);

  const CompactSet& domain() const { return k_; }
  const std::vector<FunctionalPart>& parts() const { return parts_; }

 private:
  PositiveFunctional(CompactSet k, std::vector<FunctionalPart> parts)
      : k_(std::move(k)), parts_(std::move(parts)) {}

  CompactSet k_;
  std::vector<FunctionalPart> parts_;
};

/// ℓ(f) for f continuous on K; f is only ever evaluated at points of K.
double apply(const PositiveFunctional& ell, const RealFn& f, double tol);

/// ∥ℓ∥ = ℓ(1): total Dirac weight + density mass + measure mass.
double norm(const PositiveFunctional& ell);

struct Representation {
  LSMeasure mu;
  MonotoneFn alpha;
  double norm = 0.0;
};

/// α(x) = ℓ-mass of [a, x] (normalized) and its measure μ.
Representation represent(const PositiveFunctional& ell);

/// r^t ℓ: the functional f -> ℓ(r f) on C(hull).
class TransposedFunctional {
 public:
  explicit TransposedFunctional(PositiveFunctional ell);

  double operator()(const RealFn& f, double tol) const;
  /// The (α, μ) representing r^t ℓ, shared with represent(ℓ).
  const Representation& representation() const { return rep_; }
  const PositiveFunctional& restricted() const { return ell_; }

 private:
  PositiveFunctional ell_;
  Representation rep_;
};

TransposedFunctional transpose_restriction(const PositiveFunctional& ell);

struct IsometryCheck {
  double variation = 0.0;  // V(α)
  double mass = 0.0;       // μ(K)
  double norm = 0.0;       // ∥ℓ∥
  double spread() const;
};

IsometryCheck check_isometry(const PositiveFunctional& ell);

/// α is flat on every gap of K, closed hull-side gap ends included.
bool is_constant_on_gaps(const MonotoneFn& alpha, const CompactSet& k);

/// ∫ g** dα - ∫ g* dα where g* = extend_linear(g, K) and g** adds a unit tent
/// on every gap of K.
double extension_discrepancy(const MonotoneFn& alpha, const CompactSet& k, const PiecewiseFunction& g,
                             double tol);

/// True iff every probe's two extensions integrate to within 2·tol, i.e. L_α
/// only sees f through its values on K.
bool factors_through_K(const MonotoneFn& alpha, const CompactSet& k,
                       std::span<const PiecewiseFunction> probes, double tol);

/// Linearity and positivity are promised, not checked.
using BlackBoxFunctional = std::function<double(const RealFn&)>;

inline constexpr double kMaxSharpness = 1048576.0;  // 2^20

struct CdfRecovery {
  double value = 0.0;
  bool converged = false;
  double k = 0.0;  // last sharpness evaluated
};

/// ℓ(f_k) for the indicator approximations of K ∩ [a, x] with k = 2, 4, 8, ...
/// until successive values differ by less than tol.
CdfRecovery recover_cdf(const BlackBoxFunctional& ell, const CompactSet& k, double x, double tol);

struct ClosedSetComparison {
  double exact_mu = 0.0;
  double exact_nu = 0.0;
  double oracle_mu = 0.0;
  double oracle_nu = 0.0;
  bool oracle_converged = false;
  double k_reached = 0.0;
  bool equal = false;
};

/// Limit of ∫ f_k dμ as k doubles, extrapolated in 1/k and bracketed by
/// [0, ∫ f_k dμ]. Stops once three successive estimates agree within tol.
CdfRecovery closed_set_oracle(const LSMeasure& mu, const CompactSet& c, double tol,
                              double max_k = kMaxSharpness);

/// Compares μ(C) and ν(C) along the exact path (measure_set) and the f_k
/// oracle path; equal iff both paths agree across the measures within tol.
ClosedSetComparison compare_on_closed(const LSMeasure& mu, const LSMeasure& nu, const CompactSet& c,
                                      double tol);
bool measures_equal_on_closed(const LSMeasure& mu, const LSMeasure& nu, const CompactSet& c, double tol);

}  // namespace riesz
