#include "riesz/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riesz/errors.hpp"

namespace riesz {
namespace {

constexpr int kDensityCells = 32;
constexpr int kPositivitySamples = 257;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

DensityTerm DensityTerm::make(RealFn rho, ClosedInterval support, std::string label) {
  validate(support);
  if (!rho) throw DomainError("density term needs an evaluator");
  auto data = std::make_shared<Data>();
  data->rho = std::move(rho);
  data->support = support;
  data->label = std::move(label);

  double scale = 0.0;
  for (int i = 0; i < kPositivitySamples; ++i) {
    const double x = support.lo + support.length() * (static_cast<double>(i) / (kPositivitySamples - 1));
    const double y = data->rho(x);
    if (!std::isfinite(y)) throw DomainError("density is not finite at x = " + fmt(x));
    if (y < -kIdentityTolerance) throw DomainError("density is negative at x = " + fmt(x));
    scale = std::max(scale, std::abs(y));
  }

  const double cell = support.length() / kDensityCells;
  data->cell_tol = 1e-15 * std::max(1.0, scale) * std::max(cell, 1e-300);
  data->cumulative.assign(kDensityCells + 1, 0.0);
  for (int i = 0; i < kDensityCells; ++i) {
    const double l = support.lo + cell * i;
    const double h = (i + 1 == kDensityCells) ? support.hi : support.lo + cell * (i + 1);
    const auto r = adaptive_simpson(data->rho, l, h, data->cell_tol);
    data->cumulative[i + 1] = data->cumulative[i] + std::max(0.0, r.value);
  }

  DensityTerm term;
  term.data_ = std::move(data);
  return term;
}

double DensityTerm::cumulative_at(double x) const {
  const auto& d = *data_;
  if (x <= d.support.lo) return 0.0;
  if (x >= d.support.hi) return d.cumulative.back();
  const double cell = d.support.length() / kDensityCells;
  int i = static_cast<int>((x - d.support.lo) / cell);
  i = std::clamp(i, 0, kDensityCells - 1);
  const double l = d.support.lo + cell * i;
  if (x == l) return d.cumulative[i];
  const auto r = adaptive_simpson(d.rho, l, x, d.cell_tol);
  return std::clamp(d.cumulative[i] + r.value, d.cumulative[i], d.cumulative[i + 1]);
}

std::vector<double> DensityTerm::cell_edges() const {
  const auto& s = data_->support;
  const double cell = s.length() / kDensityCells;
  std::vector<double> edges(kDensityCells + 1);
  for (int i = 0; i < kDensityCells; ++i) edges[i] = s.lo + cell * i;
  edges[kDensityCells] = s.hi;
  return edges;
}

double DensityTerm::mass_between(double u, double v) const {
  const auto& s = data_->support;
  const double l = std::max(u, s.lo);
  const double h = std::min(v, s.hi);
  if (!(l < h)) return 0.0;
  if (l == s.lo && h == s.hi) return mass();
  return std::max(0.0, cumulative_at(h) - cumulative_at(l));
}

QuadratureResult DensityTerm::integrate(const RealFn& f, double lo, double hi, double tol) const {
  const auto& s = data_->support;
  const double l = std::max(lo, s.lo);
  const double h = std::min(hi, s.hi);
  if (!(l < h)) return {};
  const auto& rho = data_->rho;
  return adaptive_simpson([&](double x) { return f(x) * rho(x); }, l, h, tol);
}

MonotoneFn MonotoneFn::make(ClosedInterval hull, std::vector<Knot> knots, std::vector<Atom> atoms,
                            std::vector<DensityTerm> densities, double offset) {
  validate(hull);
  if (!(hull.lo < hull.hi)) throw DomainError("monotone function needs a hull with lo < hi");
  if (!std::isfinite(offset)) throw DomainError("offset must be finite");

  if (knots.empty()) knots = {{hull.lo, 0.0}, {hull.hi, 0.0}};
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto& k = knots[i];
    if (!std::isfinite(k.x) || !std::isfinite(k.y)) throw DomainError("knot coordinates must be finite");
    if (!hull.contains(k.x)) throw DomainError("knot x = " + fmt(k.x) + " lies outside the hull");
    if (i > 0 && !(knots[i - 1].x < k.x)) {
      throw DomainError("knot x values must be strictly increasing (at x = " + fmt(k.x) + ")");
    }
    if (i > 0 && k.y < knots[i - 1].y) {
      throw DomainError("knot values must be nondecreasing (at x = " + fmt(k.x) + ")");
    }
  }
  if (knots.front().x > hull.lo) knots.insert(knots.begin(), Knot{hull.lo, knots.front().y});
  if (knots.back().x < hull.hi) knots.push_back(Knot{hull.hi, knots.back().y});

  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    if (!std::isfinite(a.at) || !hull.contains(a.at)) {
      throw DomainError("atom at " + fmt(a.at) + " lies outside the hull");
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw DomainError("atom at " + fmt(a.at) + " must have a positive finite weight");
    }
    if (i > 0 && !(atoms[i - 1].at < a.at)) {
      throw DomainError("atom locations must be strictly increasing (at " + fmt(a.at) + ")");
    }
  }
  for (const auto& d : densities) {
    if (!hull.contains(d.support())) throw DomainError("density support lies outside the hull");
  }

  MonotoneFn out;
  out.hull_ = hull;
  out.knots_ = std::move(knots);
  out.atoms_ = std::move(atoms);
  out.densities_ = std::move(densities);
  out.offset_ = offset;
  out.atom_prefix_.assign(out.atoms_.size() + 1, 0.0);
  for (std::size_t i = 0; i < out.atoms_.size(); ++i) {
    out.atom_prefix_[i + 1] = out.atom_prefix_[i] + out.atoms_[i].weight;
  }
  return out;
}

MonotoneFn MonotoneFn::zero(ClosedInterval hull) { return make(hull, {}); }

MonotoneFn MonotoneFn::identity(ClosedInterval hull) {
  return make(hull, {{hull.lo, 0.0}, {hull.hi, hull.hi - hull.lo}});
}

MonotoneFn MonotoneFn::step(ClosedInterval hull, double at, double weight) {
  return make(hull, {}, {{at, weight}});
}

void MonotoneFn::check_in_hull(double x) const {
  if (!(hull_.lo <= x && x <= hull_.hi)) {
    throw DomainError("x = " + fmt(x) + " lies outside the hull [" + fmt(hull_.lo) + ", " +
                      fmt(hull_.hi) + "]");
  }
}

double MonotoneFn::linear_part(double x) const {
  if (x <= knots_.front().x) return knots_.front().y;
  if (x >= knots_.back().x) return knots_.back().y;
  // Segment starting at the last knot with knot.x <= x, so knots evaluate exactly.
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const Knot& k) { return v < k.x; });
  const Knot& r = *it;
  const Knot& l = *std::prev(it);
  const double t = (x - l.x) / (r.x - l.x);
  return std::min(l.y + (r.y - l.y) * t, r.y);
}

double MonotoneFn::continuous_rise(double u, double v) const {
  if (!(u < v)) return 0.0;
  double rise = linear_part(v) - linear_part(u);
  for (const auto& d : densities_) rise += d.mass_between(u, v);
  return rise;
}

double MonotoneFn::atom_weight_in(const Interval& interval) const {
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (interval.contains(a.at)) total += a.weight;
  }
  return total;
}

Limits MonotoneFn::eval_with_limits(double x) const {
  check_in_hull(x);
  double continuous = offset_ + linear_part(x);
  for (const auto& d : densities_) continuous += d.mass_between(hull_.lo, x);

  const auto first_at_or_after =
      std::lower_bound(atoms_.begin(), atoms_.end(), x,
                       [](const Atom& a, double v) { return a.at < v; });
  const auto below = static_cast<std::size_t>(first_at_or_after - atoms_.begin());
  const double before = atom_prefix_[below];
  double here = 0.0;
  bool here_in_value = false;
  if (first_at_or_after != atoms_.end() && first_at_or_after->at == x) {
    here = first_at_or_after->weight;
    here_in_value = first_at_or_after->side == AtomSide::right && x > hull_.lo;
  }

  Limits out;
  out.value = continuous + before + (here_in_value ? here : 0.0);
  out.left = (x == hull_.lo) ? out.value : continuous + before;
  out.right = (x == hull_.hi) ? out.value : continuous + before + here;
  return out;
}

bool MonotoneFn::is_normalized() const {
  if (offset_ != 0.0 || knots_.front().y != 0.0) return false;
  return std::all_of(atoms_.begin(), atoms_.end(),
                     [](const Atom& a) { return a.side == AtomSide::right; });
}

MonotoneFn normalize(const MonotoneFn& alpha) {
  if (alpha.is_normalized()) return alpha;
  const double base = alpha.knots().front().y;
  std::vector<Knot> knots = alpha.knots();
  for (auto& k : knots) k.y -= base;
  // Rounding in the shift must not break monotonicity.
  for (std::size_t i = 1; i < knots.size(); ++i) knots[i].y = std::max(knots[i].y, knots[i - 1].y);
  knots.front().y = 0.0;

  std::vector<Atom> atoms;
  for (const auto& a : alpha.atoms()) {
    // A left-sided jump at b never shows up inside the hull.
    if (a.side == AtomSide::left && a.at == alpha.hull().hi) continue;
    atoms.push_back({a.at, a.weight, AtomSide::right});
  }
  return MonotoneFn::make(alpha.hull(), std::move(knots), std::move(atoms), alpha.densities(), 0.0);
}

Variation total_variation(const MonotoneFn& alpha) {
  return {alpha(alpha.hull().hi) - alpha(alpha.hull().lo)};
}

MonotoneFn combine(const MonotoneFn& lhs_raw, const MonotoneFn& rhs_raw) {
  if (!(lhs_raw.hull() == rhs_raw.hull())) throw DomainError("cannot combine functions on different hulls");
  const MonotoneFn lhs = normalize(lhs_raw);
  const MonotoneFn rhs = normalize(rhs_raw);

  std::vector<double> xs;
  xs.reserve(lhs.knots().size() + rhs.knots().size());
  for (const auto& k : lhs.knots()) xs.push_back(k.x);
  for (const auto& k : rhs.knots()) xs.push_back(k.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Knot> knots;
  knots.reserve(xs.size());
  for (double x : xs) {
    double y = lhs.linear_part(x) + rhs.linear_part(x);
    if (!knots.empty()) y = std::max(y, knots.back().y);
    knots.push_back({x, y});
  }

  std::vector<Atom> atoms;
  std::merge(lhs.atoms().begin(), lhs.atoms().end(), rhs.atoms().begin(), rhs.atoms().end(),
             std::back_inserter(atoms), [](const Atom& a, const Atom& b) { return a.at < b.at; });
  std::vector<Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().at == a.at) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }

  std::vector<DensityTerm> densities = lhs.densities();
  densities.insert(densities.end(), rhs.densities().begin(), rhs.densities().end());
  return MonotoneFn::make(lhs.hull(), std::move(knots), std::move(merged), std::move(densities));
}

MonotoneFn devil_staircase(int depth, ClosedInterval hull) {
  const CompactSet k = cantor_approx(depth, hull);
  const auto& parts = k.parts();
  const double step = std::ldexp(1.0, -depth);
  std::vector<Knot> knots;
  knots.reserve(2 * parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    knots.push_back({parts[i].lo, step * static_cast<double>(i)});
    knots.push_back({parts[i].hi, step * static_cast<double>(i + 1)});
  }
  return MonotoneFn::make(hull, std::move(knots));
}

bool is_constant_on(const MonotoneFn& alpha, double u, double v) {
  if (!(u < v)) throw DomainError("gap (" + fmt(u) + ", " + fmt(v) + ") must have u < v");
  if (!alpha.hull().contains(u) || !alpha.hull().contains(v)) {
    throw DomainError("gap (" + fmt(u) + ", " + fmt(v) + ") leaves the hull");
  }
  if (alpha.atom_weight_in(Interval::open(u, v)) > 0.0) return false;
  return alpha.continuous_rise(u, v) <= kIdentityTolerance;
}

}  // namespace riesz
