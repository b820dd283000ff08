#include "riesz/ls_measure.hpp"

#include <algorithm>
#include <cmath>

#include "riesz/errors.hpp"
#include "riesz/stieltjes.hpp"

namespace riesz {
namespace {

bool overlaps(const Interval& a, const Interval& b) {
  // a sorted before b.
  if (a.hi > b.lo) return true;
  return a.hi == b.lo && a.hi_closed && b.lo_closed;
}

void check_within(const ClosedInterval& hull, const Interval& iv) {
  if (iv.empty()) return;
  if (iv.lo < hull.lo || iv.hi > hull.hi) {
    throw DomainError("set " + to_string(iv) + " leaves the hull");
  }
}

double measure_interval(const LSMeasure& mu, const Interval& iv) {
  if (iv.empty()) return 0.0;
  const double upper = iv.hi_closed ? mu.cdf(iv.hi) : mu.cdf_before(iv.hi);
  const double lower = iv.lo_closed ? mu.cdf_before(iv.lo) : mu.cdf(iv.lo);
  return std::max(0.0, upper - lower);
}

}  // namespace

IntervalUnion IntervalUnion::make(std::vector<Interval> items) {
  items.erase(std::remove_if(items.begin(), items.end(), [](const Interval& i) { return i.empty(); }),
              items.end());
  std::sort(items.begin(), items.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.lo_closed && !b.lo_closed);
  });
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (overlaps(items[i - 1], items[i])) {
      throw DomainError("union components " + to_string(items[i - 1]) + " and " +
                        to_string(items[i]) + " overlap");
    }
  }
  IntervalUnion out;
  out.items_ = std::move(items);
  return out;
}

std::vector<Interval> components(const BorelSetDesc& set) {
  struct Visitor {
    std::vector<Interval> operator()(const Interval& iv) const { return {iv}; }
    std::vector<Interval> operator()(const IntervalUnion& u) const { return u.items(); }
    std::vector<Interval> operator()(const CompactSet& k) const {
      std::vector<Interval> out;
      for (const auto& p : k.parts()) out.push_back(Interval::closed(p.lo, p.hi));
      return out;
    }
    std::vector<Interval> operator()(const GapDecomposition& g) const { return g.gaps; }
  };
  return std::visit(Visitor{}, set);
}

double LSMeasure::total_mass() const { return total_variation(alpha_).value; }

double LSMeasure::cdf(double x) const {
  const auto lim = alpha_.eval_with_limits(x);
  return x == hull().lo ? lim.right : lim.value;
}

double LSMeasure::cdf_before(double x) const {
  if (x == hull().lo) return 0.0;
  return alpha_.eval_with_limits(x).left;
}

double measure_set(const LSMeasure& mu, const BorelSetDesc& set) {
  const auto& hull = mu.hull();
  if (const auto* k = std::get_if<CompactSet>(&set)) {
    if (!(k->hull() == hull)) throw DomainError("compact set hull differs from the measure hull");
    double gap_mass = 0.0;
    for (const auto& g : gaps(*k).gaps) gap_mass += measure_interval(mu, g);
    return std::max(0.0, measure_interval(mu, Interval::closed(hull.lo, hull.hi)) - gap_mass);
  }
  if (const auto* g = std::get_if<GapDecomposition>(&set)) {
    if (!(g->hull == hull)) throw DomainError("gap decomposition hull differs from the measure hull");
  }
  double total = 0.0;
  for (const auto& iv : components(set)) {
    check_within(hull, iv);
    total += measure_interval(mu, iv);
  }
  return total;
}

QuadratureResult lebesgue_integral(const RealFn& f, const LSMeasure& mu, const BorelSetDesc& set,
                                   double tol, std::span<const double> breakpoints) {
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  const auto& alpha = mu.alpha();
  const auto parts = components(set);
  for (const auto& iv : parts) check_within(mu.hull(), iv);

  QuadratureResult out;
  out.evaluations = 0;
  for (const auto& atom : alpha.atoms()) {
    const bool inside = std::any_of(parts.begin(), parts.end(),
                                    [&](const Interval& iv) { return iv.contains(atom.at); });
    if (!inside) continue;
    const double y = f(atom.at);
    if (!std::isfinite(y)) throw NumericError("integrand is not finite at an atom");
    out.value += y * atom.weight;
    ++out.evaluations;
  }
  const double variation = total_variation(alpha).value;
  if (variation > 0.0) {
    for (const auto& iv : parts) {
      if (iv.empty()) continue;
      out += detail::integrate_continuous(f, alpha, iv.lo, iv.hi, tol / variation, breakpoints);
    }
  }
  if (out.evaluations == 0) out.evaluations = 1;
  out.converged = out.converged && out.error_estimate <= tol;
  return out;
}

namespace {

// μ of the part of gap g removed when keeping [g.lo + margin, g.hi - margin]
// (closed hull-side endpoints are kept rather than shaved).
struct GapShaver {
  const LSMeasure& mu;
  const Interval& gap;
  double full;

  ClosedInterval kept(double margin) const {
    const double lo = gap.lo_closed ? gap.lo : gap.lo + margin;
    const double hi = gap.hi_closed ? gap.hi : gap.hi - margin;
    return {lo, hi};
  }
  double shaved(double margin) const {
    const auto k = kept(margin);
    if (k.lo > k.hi) return full;
    return std::max(0.0, full - measure_interval(mu, Interval::closed(k.lo, k.hi)));
  }
};

}  // namespace

InnerApproximation inner_approx(const LSMeasure& mu, const GapDecomposition& set, double eps) {
  if (!(eps > 0.0)) throw DomainError("inner approximation needs eps > 0");
  InnerApproximation out;
  if (set.gaps.empty()) return out;
  const double budget = eps / static_cast<double>(set.gaps.size());

  for (const auto& gap : set.gaps) {
    if (gap.empty()) continue;
    check_within(mu.hull(), gap);
    const double full = measure_interval(mu, gap);
    if (full < budget) {
      out.defect += full;
      continue;
    }
    GapShaver shaver{mu, gap, full};
    const int open_sides = (gap.lo_closed ? 0 : 1) + (gap.hi_closed ? 0 : 1);
    double bad = open_sides == 2 ? 0.5 * gap.length() : gap.length();
    double good = 0.5 * bad;
    // Mass next to an open end vanishes as the margin shrinks, so halving terminates
    // unless the margin underflows against the endpoint.
    while (shaver.shaved(good) >= budget && good > 0.0) {
      const auto k = shaver.kept(good);
      if (k.lo == gap.lo && !gap.lo_closed) break;
      if (k.hi == gap.hi && !gap.hi_closed) break;
      bad = good;
      good *= 0.5;
    }
    const auto inside = [&](double margin) {
      const auto k = shaver.kept(margin);
      return (gap.lo_closed || k.lo > gap.lo) && (gap.hi_closed || k.hi < gap.hi) && k.lo <= k.hi;
    };
    if (!inside(good) || shaver.shaved(good) >= budget) {
      // Mass that cannot be reached by any closed subset at this resolution.
      out.defect += full;
      continue;
    }
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (good + bad);
      if (mid <= good || mid >= bad) break;
      if (inside(mid) && shaver.shaved(mid) < budget) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    out.closed.push_back(shaver.kept(good));
    out.defect += shaver.shaved(good);
  }
  return out;
}

}  // namespace riesz
