#include "riesz/extension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riesz/errors.hpp"
#include "riesz/kernels.hpp"

namespace riesz {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double eval_segment(const Segment& seg, double x) {
  return std::visit([x](const auto& s) { return s(x); }, seg);
}

void require_subset(const CompactSet& inner, const CompactSet& outer) {
  for (const auto& p : inner.parts()) {
    if (!outer.contains(p)) {
      throw DomainError("[" + fmt(p.lo) + ", " + fmt(p.hi) + "] is not inside the function's domain");
    }
  }
}

}  // namespace

double SampledSegment::operator()(double x) const {
  if (xs.empty()) throw DomainError("sampled segment has no samples");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double u = xs[i - 1];
  const double v = xs[i];
  const double t = (x - u) / (v - u);
  return (1.0 - t) * ys[i - 1] + t * ys[i];
}

PiecewiseFunction PiecewiseFunction::make(CompactSet domain, std::vector<Piece> pieces) {
  if (pieces.empty()) throw DomainError("piecewise function needs at least one piece");
  std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    return a.span.lo < b.span.lo || (a.span.lo == b.span.lo && a.span.hi < b.span.hi);
  });
  std::vector<ClosedInterval> spans;
  for (const auto& p : pieces) {
    validate(p.span);
    if (!domain.contains(p.span)) {
      throw DomainError("piece [" + fmt(p.span.lo) + ", " + fmt(p.span.hi) + "] leaves the domain");
    }
    if (const auto* s = std::get_if<SampledSegment>(&p.segment)) {
      if (s->xs.empty() || s->xs.size() != s->ys.size() || !std::is_sorted(s->xs.begin(), s->xs.end())) {
        throw DomainError("sampled segment needs sorted xs matching ys");
      }
    }
    spans.push_back(p.span);
  }
  const CompactSet covered = make_compact(spans, domain.hull());
  if (!(covered.parts() == domain.parts())) throw DomainError("pieces do not cover the domain");
  return PiecewiseFunction(std::move(domain), std::move(pieces));
}

PiecewiseFunction PiecewiseFunction::on_parts(const CompactSet& domain, std::vector<Segment> segments) {
  if (segments.size() != domain.parts().size()) {
    throw DomainError("expected one segment per part (" + std::to_string(domain.parts().size()) +
                      "), got " + std::to_string(segments.size()));
  }
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    pieces.push_back({domain.parts()[i], std::move(segments[i])});
  }
  return make(domain, std::move(pieces));
}

double PiecewiseFunction::operator()(double x) const {
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x,
                             [](const Piece& p, double v) { return p.span.hi < v; });
  // Adjacent pieces may share an endpoint; the first one in order wins.
  if (it == pieces_.end() || !it->span.contains(x)) {
    throw DomainError("x = " + fmt(x) + " is outside the function's domain");
  }
  return eval_segment(it->segment, x);
}

std::vector<double> PiecewiseFunction::breakpoints() const {
  std::vector<double> out;
  for (const auto& p : pieces_) {
    out.push_back(p.span.lo);
    out.push_back(p.span.hi);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PiecewiseFunction restrict(const RealFn& f, const CompactSet& k) {
  if (!f) throw DomainError("cannot restrict an empty function");
  return PiecewiseFunction::on_parts(k, std::vector<Segment>(k.parts().size(), Segment{f}));
}

PiecewiseFunction restrict(const expr::Expression& f, const CompactSet& k) {
  return PiecewiseFunction::on_parts(k, std::vector<Segment>(k.parts().size(), Segment{f}));
}

PiecewiseFunction restrict(const PiecewiseFunction& f, const CompactSet& k) {
  require_subset(k, f.domain());
  auto shared = std::make_shared<const PiecewiseFunction>(f);
  const RealFn delegate = [shared](double x) { return (*shared)(x); };
  return restrict(delegate, k);
}

PiecewiseFunction extend_linear(const PiecewiseFunction& f, const CompactSet& k) {
  require_subset(k, f.domain());
  auto shared = std::make_shared<const PiecewiseFunction>(f);
  const RealFn delegate = [shared](double x) { return (*shared)(x); };

  std::vector<Piece> pieces;
  for (const auto& part : k.parts()) pieces.push_back({part, delegate});
  for (const auto& gap : gaps(k).gaps) {
    if (gap.lo_closed) {
      // [a, v): nothing of K to the left.
      pieces.push_back({{gap.lo, gap.hi}, SampledSegment{{gap.hi}, {f(gap.hi)}}});
    } else if (gap.hi_closed) {
      pieces.push_back({{gap.lo, gap.hi}, SampledSegment{{gap.lo}, {f(gap.lo)}}});
    } else {
      pieces.push_back({{gap.lo, gap.hi}, SampledSegment{{gap.lo, gap.hi}, {f(gap.lo), f(gap.hi)}}});
    }
  }
  const ClosedInterval hull = k.hull();
  return PiecewiseFunction::make(make_compact({hull}, hull), std::move(pieces));
}

double Urysohn::operator()(double x) const {
  const double d_far = distance(x, f_);
  const double d_near = distance(x, k_);
  return d_far / (d_far + d_near);
}

void Urysohn::evaluate(std::span<const double> xs, std::span<double> out) const {
  kernels::urysohn_batch(xs, k_.parts(), f_.parts(), out);
}

Urysohn urysohn(const CompactSet& k, std::vector<ClosedInterval> f, ClosedInterval hull) {
  if (f.empty()) throw DomainError("urysohn function needs a nonempty closed set F");
  CompactSet far = make_compact(std::move(f), hull);
  for (const auto& p : far.parts()) {
    for (const auto& q : k.parts()) {
      if (std::max(p.lo, q.lo) <= std::min(p.hi, q.hi)) {
        throw DomainError("F part [" + fmt(p.lo) + ", " + fmt(p.hi) + "] meets K");
      }
    }
  }
  return Urysohn(k, std::move(far));
}

IndicatorApprox::IndicatorApprox(CompactSet c, double k) : c_(std::move(c)), k_(k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("indicator sharpness k must be positive");
}

double IndicatorApprox::operator()(double x) const { return std::max(0.0, 1.0 - k_ * distance(x, c_)); }

void IndicatorApprox::evaluate(std::span<const double> xs, std::span<double> out) const {
  kernels::indicator_batch(xs, c_.parts(), k_, out);
}

std::vector<double> IndicatorApprox::breakpoints() const {
  std::vector<double> out;
  const double reach = 1.0 / k_;
  for (const auto& p : c_.parts()) {
    out.push_back(p.lo - reach);
    out.push_back(p.lo);
    out.push_back(p.hi);
    out.push_back(p.hi + reach);
  }
  return out;
}

IndicatorApprox indicator_approx(const CompactSet& c, double k) { return IndicatorApprox(c, k); }

IndicatorApprox indicator_approx(std::vector<ClosedInterval> c, double k) {
  if (c.empty()) throw DomainError("indicator of an empty set is undefined");
  ClosedInterval hull = c.front();
  for (const auto& p : c) {
    validate(p);
    hull.lo = std::min(hull.lo, p.lo);
    hull.hi = std::max(hull.hi, p.hi);
  }
  return IndicatorApprox(make_compact(std::move(c), hull), k);
}

}  // namespace riesz
