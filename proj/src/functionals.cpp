#include "riesz/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>

#include "riesz/errors.hpp"
#include "riesz/stieltjes.hpp"

namespace riesz {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<Atom> dirac_atoms(const DiracCombo& combo) {
  std::vector<WeightedPoint> pts = combo.points;
  std::stable_sort(pts.begin(), pts.end(),
                   [](const WeightedPoint& a, const WeightedPoint& b) { return a.at < b.at; });
  std::vector<Atom> atoms;
  for (const auto& p : pts) {
    if (!atoms.empty() && atoms.back().at == p.at) {
      atoms.back().weight += p.weight;
    } else {
      atoms.push_back({p.at, p.weight});
    }
  }
  return atoms;
}

double tol_per_mass(const PositiveFunctional& ell, double tol) {
  const double n = norm(ell);
  return n > 0.0 ? tol / n : 0.0;
}

// Unit tent on each gap of K, zero on K.
RealFn gap_tents(const CompactSet& k) {
  auto gs = std::make_shared<const std::vector<Interval>>(gaps(k).gaps);
  return [gs](double x) {
    auto it = std::lower_bound(gs->begin(), gs->end(), x,
                               [](const Interval& g, double v) { return g.hi < v; });
    if (it == gs->end() || !(it->lo <= x && x <= it->hi)) return 0.0;
    const double mid = 0.5 * (it->lo + it->hi);
    const double half = 0.5 * (it->hi - it->lo);
    return std::max(0.0, 1.0 - std::abs(x - mid) / half);
  };
}

}  // namespace

DensityPart DensityPart::make(const RealFn& rho, const std::vector<ClosedInterval>& carrier,
                              const std::string& label) {
  DensityPart out;
  for (const auto& c : carrier) {
    validate(c);
    if (c.length() > 0.0) out.terms.push_back(DensityTerm::make(rho, c, label));
  }
  return out;
}

PositiveFunctional PositiveFunctional::make(CompactSet k, std::vector<FunctionalPart> parts) {
  for (const auto& part : parts) {
    if (const auto* d = std::get_if<DiracCombo>(&part)) {
      for (const auto& p : d->points) {
        if (!std::isfinite(p.at) || !k.contains(p.at)) {
          throw DomainError("Dirac point " + fmt(p.at) + " is not in K");
        }
        if (!(p.weight > 0.0) || !std::isfinite(p.weight)) {
          throw DomainError("Dirac point " + fmt(p.at) + " needs a positive finite weight");
        }
      }
    } else if (const auto* dp = std::get_if<DensityPart>(&part)) {
      for (const auto& t : dp->terms) {
        if (!k.contains(t.support())) {
          throw DomainError("density carrier [" + fmt(t.support().lo) + ", " + fmt(t.support().hi) +
                            "] is not inside K");
        }
      }
    } else {
      const auto& mb = std::get<MeasureBacked>(part);
      if (!(mb.mu.hull() == k.hull())) throw DomainError("measure-backed part lives on a different hull");
      const double outside = measure_set(mb.mu, gaps(k));
      if (outside > kIdentityTolerance) {
        throw DomainError("measure-backed part puts mass " + fmt(outside) + " outside K");
      }
    }
  }
  return PositiveFunctional(std::move(k), std::move(parts));
}

double apply(const PositiveFunctional& ell, const RealFn& f, double tol) {
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  const double per_mass = tol_per_mass(ell, tol);
  double total = 0.0;
  for (const auto& part : ell.parts()) {
    if (const auto* d = std::get_if<DiracCombo>(&part)) {
      for (const auto& p : d->points) total += p.weight * f(p.at);
    } else if (const auto* dp = std::get_if<DensityPart>(&part)) {
      for (const auto& t : dp->terms) {
        total += detail::integrate_density(f, t, t.support().lo, t.support().hi, per_mass, {}).value;
      }
    } else {
      const auto& mu = std::get<MeasureBacked>(part).mu;
      const double mass = mu.total_mass();
      if (mass > 0.0) total += lebesgue_integral(f, mu, ell.domain(), per_mass * mass).value;
    }
  }
  if (!std::isfinite(total)) throw NumericError("functional value is not finite");
  return total;
}

double norm(const PositiveFunctional& ell) {
  double total = 0.0;
  for (const auto& part : ell.parts()) {
    if (const auto* d = std::get_if<DiracCombo>(&part)) {
      for (const auto& p : d->points) total += p.weight;
    } else if (const auto* dp = std::get_if<DensityPart>(&part)) {
      for (const auto& t : dp->terms) total += t.mass();
    } else {
      total += measure_set(std::get<MeasureBacked>(part).mu, ell.domain());
    }
  }
  return total;
}

Representation represent(const PositiveFunctional& ell) {
  const ClosedInterval hull = ell.domain().hull();
  MonotoneFn alpha = MonotoneFn::zero(hull);
  for (const auto& part : ell.parts()) {
    if (const auto* d = std::get_if<DiracCombo>(&part)) {
      alpha = combine(alpha, MonotoneFn::make(hull, {}, dirac_atoms(*d)));
    } else if (const auto* dp = std::get_if<DensityPart>(&part)) {
      alpha = combine(alpha, MonotoneFn::make(hull, {}, {}, dp->terms));
    } else {
      alpha = combine(alpha, std::get<MeasureBacked>(part).mu.alpha());
    }
  }
  LSMeasure mu(alpha);
  return Representation{mu, mu.alpha(), norm(ell)};
}

TransposedFunctional::TransposedFunctional(PositiveFunctional ell)
    : ell_(std::move(ell)), rep_(represent(ell_)) {}

double TransposedFunctional::operator()(const RealFn& f, double tol) const {
  const PiecewiseFunction restricted = restrict(f, ell_.domain());
  return apply(ell_, [&restricted](double x) { return restricted(x); }, tol);
}

TransposedFunctional transpose_restriction(const PositiveFunctional& ell) { return TransposedFunctional(ell); }

double IsometryCheck::spread() const {
  return std::max({std::abs(variation - mass), std::abs(mass - norm), std::abs(variation - norm)});
}

IsometryCheck check_isometry(const PositiveFunctional& ell) {
  const Representation rep = represent(ell);
  return {total_variation(rep.alpha).value, measure_set(rep.mu, ell.domain()), norm(ell)};
}

bool is_constant_on_gaps(const MonotoneFn& alpha, const CompactSet& k) {
  if (!(alpha.hull() == k.hull())) throw DomainError("α and K live on different hulls");
  for (const auto& g : gaps(k).gaps) {
    if (!is_constant_on(alpha, g.lo, g.hi)) return false;
    if (g.lo_closed && alpha.atom_weight_in(Interval::point(g.lo)) > 0.0) return false;
    if (g.hi_closed && alpha.atom_weight_in(Interval::point(g.hi)) > 0.0) return false;
  }
  return true;
}

double extension_discrepancy(const MonotoneFn& alpha, const CompactSet& k, const PiecewiseFunction& g,
                             double tol) {
  const PiecewiseFunction straight = extend_linear(g, k);
  const RealFn tents = gap_tents(k);
  const RealFn bumped = [&straight, &tents](double x) { return straight(x) + tents(x); };

  std::vector<double> cuts = straight.breakpoints();
  for (const auto& gap : gaps(k).gaps) cuts.push_back(0.5 * (gap.lo + gap.hi));
  const RealFn plain = [&straight](double x) { return straight(x); };
  const double base = rs_integral(plain, alpha, tol, cuts).value;
  return rs_integral(bumped, alpha, tol, cuts).value - base;
}

bool factors_through_K(const MonotoneFn& alpha, const CompactSet& k,
                       std::span<const PiecewiseFunction> probes, double tol) {
  return std::all_of(probes.begin(), probes.end(), [&](const PiecewiseFunction& g) {
    return std::abs(extension_discrepancy(alpha, k, g, tol)) <= 2.0 * tol;
  });
}

namespace {

// Width available to the ramps of f_k: they must neither overlap nor run off the hull.
double ramp_room(const CompactSet& c, const ClosedInterval& hull, bool right_end_only) {
  double room = std::numeric_limits<double>::infinity();
  const auto& parts = c.parts();
  if (parts.back().hi < hull.hi) room = std::min(room, hull.hi - parts.back().hi);
  if (right_end_only) return room;
  if (parts.front().lo > hull.lo) room = std::min(room, parts.front().lo - hull.lo);
  for (std::size_t i = 1; i < parts.size(); ++i) room = std::min(room, 0.5 * (parts[i].lo - parts[i - 1].hi));
  return room;
}

// Distance from each outer face of C to the nearest place where α stops being smooth.
// Until the ramps fit inside one smooth piece, ∫ f_k dμ does not yet decay like 1/k.
double smooth_room(const CompactSet& c, const MonotoneFn& alpha) {
  std::vector<double> breaks;
  for (const auto& knot : alpha.knots()) breaks.push_back(knot.x);
  for (const auto& atom : alpha.atoms()) breaks.push_back(atom.at);
  for (const auto& term : alpha.densities()) {
    breaks.push_back(term.support().lo);
    breaks.push_back(term.support().hi);
  }
  std::sort(breaks.begin(), breaks.end());
  double room = std::numeric_limits<double>::infinity();
  for (const auto& p : c.parts()) {
    auto above = std::upper_bound(breaks.begin(), breaks.end(), p.hi);
    if (above != breaks.end()) room = std::min(room, *above - p.hi);
    auto below = std::lower_bound(breaks.begin(), breaks.end(), p.lo);
    if (below != breaks.begin()) room = std::min(room, p.lo - *std::prev(below));
  }
  return room;
}

double first_sharpness(double room, double cap) {
  double k = 2.0;
  while (k * room < 1.0 && k < cap) k *= 2.0;
  return k;
}

}  // namespace

CdfRecovery recover_cdf(const BlackBoxFunctional& ell, const CompactSet& k, double x, double tol) {
  if (!(tol > 0.0)) throw DomainError("recovery tolerance must be positive");
  if (!k.hull().contains(x)) throw DomainError("x = " + fmt(x) + " lies outside the hull");
  const auto c = k.clip(k.hull().lo, x);
  if (!c) return {0.0, true, 0.0};

  double sharpness = first_sharpness(ramp_room(*c, k.hull(), true), kMaxSharpness / 4.0);
  double previous = ell(indicator_approx(*c, sharpness));
  while (true) {
    sharpness *= 2.0;
    if (sharpness > kMaxSharpness) return {previous, false, sharpness / 2.0};
    const double current = ell(indicator_approx(*c, sharpness));
    if (std::abs(current - previous) < tol) return {current, true, sharpness};
    previous = current;
  }
}

CdfRecovery closed_set_oracle(const LSMeasure& mu, const CompactSet& c, double tol, double max_k) {
  if (!(tol > 0.0)) throw DomainError("oracle tolerance must be positive");
  if (!(c.hull() == mu.hull())) throw DomainError("closed set hull differs from the measure hull");
  const double quad_tol = std::min(1e-10, 1e-3 * tol);
  const ClosedInterval hull = mu.hull();
  const BorelSetDesc whole = Interval::closed(hull.lo, hull.hi);

  auto value_at = [&](double sharpness) {
    const IndicatorApprox fk = indicator_approx(c, sharpness);
    const auto cuts = fk.breakpoints();
    return lebesgue_integral([&fk](double x) { return fk(x); }, mu, whole, quad_tol, cuts).value;
  };

  // Once every ramp sits inside one smooth piece of α, ∫ f_k dμ - μ(C) is a power
  // series in 1/k and two Richardson levels apply. A density can still vary on a
  // scale finer than 1/k, so unless the first-level estimates already agree closely,
  // their differences must also shrink by about 4 per doubling before we stop.
  double sharpness = first_sharpness(std::min(ramp_room(c, hull, false), smooth_room(c, mu.alpha())), max_k / 4.0);
  double previous = value_at(sharpness);
  std::vector<double> first;
  double best = previous;
  while (sharpness * 2.0 <= max_k) {
    sharpness *= 2.0;
    const double current = value_at(sharpness);
    first.push_back(2.0 * current - previous);
    previous = current;
    const std::size_t n = first.size();
    best = std::clamp(first.back(), 0.0, current);
    if (n < 2) continue;
    const double step = first[n - 1] - first[n - 2];
    best = std::clamp(first[n - 1] + step / 3.0, 0.0, current);
    if (std::abs(step) < tol / 8.0) return {best, true, sharpness};
    if (n >= 3) {
      const double ratio = (first[n - 2] - first[n - 3]) / step;
      if (ratio > 2.5 && ratio < 6.5 && std::abs(step) < tol) return {best, true, sharpness};
    }
  }
  return {best, false, sharpness};
}

ClosedSetComparison compare_on_closed(const LSMeasure& mu, const LSMeasure& nu, const CompactSet& c,
                                      double tol) {
  if (!(mu.hull() == nu.hull())) throw DomainError("measures live on different hulls");
  ClosedSetComparison out;
  out.exact_mu = measure_set(mu, c);
  out.exact_nu = measure_set(nu, c);
  const auto om = closed_set_oracle(mu, c, tol);
  const auto on = closed_set_oracle(nu, c, tol);
  out.oracle_mu = om.value;
  out.oracle_nu = on.value;
  out.oracle_converged = om.converged && on.converged;
  out.k_reached = std::max(om.k, on.k);
  out.equal = std::abs(out.exact_mu - out.exact_nu) <= tol && std::abs(out.oracle_mu - out.oracle_nu) <= tol;
  return out;
}

bool measures_equal_on_closed(const LSMeasure& mu, const LSMeasure& nu, const CompactSet& c, double tol) {
  return compare_on_closed(mu, nu, c, tol).equal;
}

}  // namespace riesz
