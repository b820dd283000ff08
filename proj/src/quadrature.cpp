#include "riesz/quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "riesz/errors.hpp"

namespace riesz {
namespace {

// Symmetric integrands can fool the very first comparison.
constexpr int kMinDepth = 2;

struct Simpson {
  const RealFn& g;
  std::size_t evaluations = 0;
  double error = 0.0;
  bool converged = true;

  double eval(double x) {
    ++evaluations;
    const double y = g(x);
    if (!std::isfinite(y)) {
      std::ostringstream os;
      os.precision(17);
      os << "integrand is not finite at x = " << x;
      throw NumericError(os.str());
    }
    return y;
  }

  // whole: Simpson estimate on [l, r] from fl, fm, fr.
  double refine(double l, double r, double fl, double fm, double fr, double whole, double tol,
                int depth) {
    const double m = 0.5 * (l + r);
    const double lm = 0.5 * (l + m);
    const double rm = 0.5 * (m + r);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - l) / 6.0 * (fl + 4.0 * flm + fm);
    const double right = (r - m) / 6.0 * (fm + 4.0 * frm + fr);
    const double halves = left + right;
    const double delta = halves - whole;
    if (depth >= kMinDepth && std::abs(delta) <= 15.0 * tol) {
      error += std::abs(delta) / 15.0;
      return halves + delta / 15.0;
    }
    const bool exhausted = depth >= kMaxBisectionDepth || evaluations >= kMaxEvaluationsPerCall ||
                           lm <= l || m <= lm || rm <= m || r <= rm;
    if (exhausted) {
      converged = false;
      error += std::abs(delta);
      return halves;
    }
    return refine(l, m, fl, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, r, fm, frm, fr, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const RealFn& g, double lo, double hi, double tol) {
  QuadratureResult out;
  if (!(hi > lo)) return out;
  Simpson s{g};
  const double fl = s.eval(lo);
  const double fr = s.eval(hi);
  const double m = 0.5 * (lo + hi);
  const double fm = s.eval(m);
  const double whole = (hi - lo) / 6.0 * (fl + 4.0 * fm + fr);
  out.value = s.refine(lo, hi, fl, fm, fr, whole, tol, 1);
  out.error_estimate = s.error;
  out.evaluations = s.evaluations;
  out.converged = s.converged;
  return out;
}

}  // namespace riesz
