#pragma once

#include <cstddef>
#include <span>

#include "riesz/monotone.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

/// ∫_a^b f dα for continuous f. Atoms contribute f(c)·w exactly; each linear
/// piece and density term of the continuous part is integrated adaptively
/// with an absolute tolerance proportional to its share of V(α), so the whole
/// result targets tol. Optional breakpoints (kinks of f) split the pieces.
/// Throws DomainError for tol <= 0 and NumericError if f is not finite.
QuadratureResult rs_integral(const RealFn& f, const MonotoneFn& alpha, double tol,
                             std::span<const double> breakpoints = {});

/// Σ_{j=1}^n f(x_j)(α(x_j) - α(x_{j-1})) on the uniform partition
/// x_j = a + j(b - a)/n, tagged at right endpoints. Evaluated by summation by
/// parts so that f ≡ 1 telescopes to α(b) - α(a) exactly.
double riesz_partition_sum(const RealFn& f, const MonotoneFn& alpha, std::size_t n);

namespace detail {

/// ∫_{[lo,hi]} f dα_c over the continuous part only; each piece gets local
/// tolerance tol_per_mass times its α-rise.
QuadratureResult integrate_continuous(const RealFn& f, const MonotoneFn& alpha, double lo, double hi,
                                      double tol_per_mass, std::span<const double> breakpoints);

/// ∫_{[lo,hi] ∩ support} f·rho with the same tolerance apportioning.
QuadratureResult integrate_density(const RealFn& f, const DensityTerm& term, double lo, double hi,
                                   double tol_per_mass, std::span<const double> breakpoints);

}  // namespace detail
}  // namespace riesz
