#include "riesz/stieltjes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "riesz/errors.hpp"
#include "riesz/kernels.hpp"

namespace riesz {
namespace {

double checked(const RealFn& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand is not finite at x = " << x;
    throw NumericError(os.str());
  }
  return y;
}

// Calls body(l, h) for each sub-interval of [lo, hi] cut at the breakpoints.
template <typename Body>
void for_each_panel(double lo, double hi, std::span<const double> breakpoints, Body&& body) {
  double start = lo;
  if (!breakpoints.empty()) {
    std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts) {
      if (c > start && c < hi) {
        body(start, c);
        start = c;
      }
    }
  }
  body(start, hi);
}

}  // namespace

namespace detail {

QuadratureResult integrate_density(const RealFn& f, const DensityTerm& term, double lo, double hi,
                                   double tol_per_mass, std::span<const double> breakpoints) {
  QuadratureResult out;
  const auto& s = term.support();
  const double l = std::max(lo, s.lo);
  const double h = std::min(hi, s.hi);
  if (!(l < h) || term.mass() == 0.0) return out;
  const double mass_per_length = term.mass() / s.length();
  // Never coarser than the cells that produced term.mass().
  std::vector<double> cuts = term.cell_edges();
  cuts.insert(cuts.end(), breakpoints.begin(), breakpoints.end());
  for_each_panel(l, h, cuts, [&](double pl, double ph) {
    const double local = tol_per_mass * mass_per_length * (ph - pl);
    out += term.integrate(f, pl, ph, local);
  });
  return out;
}

QuadratureResult integrate_continuous(const RealFn& f, const MonotoneFn& alpha, double lo, double hi,
                                      double tol_per_mass, std::span<const double> breakpoints) {
  QuadratureResult out;
  if (!(lo < hi)) return out;
  const auto& knots = alpha.knots();
  // First segment whose right knot lies beyond lo.
  auto it = std::upper_bound(knots.begin(), knots.end(), lo,
                             [](double v, const Knot& k) { return v < k.x; });
  std::size_t i = (it == knots.begin()) ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
  for (; i + 1 < knots.size() && knots[i].x < hi; ++i) {
    const Knot& a = knots[i];
    const Knot& b = knots[i + 1];
    if (b.y == a.y) continue;
    const double l = std::max(lo, a.x);
    const double h = std::min(hi, b.x);
    if (!(l < h)) continue;
    const double slope = (b.y - a.y) / (b.x - a.x);
    for_each_panel(l, h, breakpoints, [&](double pl, double ph) {
      const double local = tol_per_mass * slope * (ph - pl);
      out += adaptive_simpson([&](double x) { return f(x) * slope; }, pl, ph, local);
    });
  }
  for (const auto& term : alpha.densities()) {
    out += integrate_density(f, term, lo, hi, tol_per_mass, breakpoints);
  }
  return out;
}

}  // namespace detail

QuadratureResult rs_integral(const RealFn& f, const MonotoneFn& alpha, double tol,
                             std::span<const double> breakpoints) {
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  QuadratureResult out;
  out.evaluations = 0;
  for (const auto& atom : alpha.atoms()) {
    out.value += checked(f, atom.at) * atom.weight;
    ++out.evaluations;
  }
  const double variation = total_variation(alpha).value;
  if (variation > 0.0) {
    const auto& hull = alpha.hull();
    out += detail::integrate_continuous(f, alpha, hull.lo, hull.hi, tol / variation, breakpoints);
  }
  if (out.evaluations == 0) out.evaluations = 1;
  out.converged = out.converged && out.error_estimate <= tol;
  return out;
}

double riesz_partition_sum(const RealFn& f, const MonotoneFn& alpha, std::size_t n) {
  if (n == 0) throw DomainError("partition needs at least one cell");
  const auto& hull = alpha.hull();
  const double width = hull.hi - hull.lo;
  std::vector<double> fs(n + 1);
  std::vector<double> as(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double x = (j == n) ? hull.hi : hull.lo + width * (static_cast<double>(j) / static_cast<double>(n));
    as[j] = alpha(x);
    if (j > 0) fs[j] = checked(f, x);
  }
  fs[0] = fs[1];
  // Σ f_j(α_j - α_{j-1}) = f_n α_n - f_1 α_0 - Σ_{j=1}^{n-1} α_j (f_{j+1} - f_j)
  return (fs[n] * as[n] - fs[1] * as[0]) - kernels::abel_sum(fs, as);
}

}  // namespace riesz
