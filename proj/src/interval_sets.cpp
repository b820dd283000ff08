#include "riesz/interval_sets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "riesz/errors.hpp"

namespace riesz {

void validate(const ClosedInterval& interval) {
  if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi)) {
    throw DomainError("interval endpoints must be finite");
  }
  if (interval.lo > interval.hi) {
    std::ostringstream os;
    os << "interval [" << interval.lo << ", " << interval.hi << "] has lo > hi";
    throw DomainError(os.str());
  }
}

std::string to_string(const Interval& interval) {
  std::ostringstream os;
  os.precision(17);
  os << (interval.lo_closed ? '[' : '(') << interval.lo << ", " << interval.hi
     << (interval.hi_closed ? ']' : ')');
  return os.str();
}

bool CompactSet::contains(double x) const {
  // First part whose hi >= x.
  auto it = std::lower_bound(parts_.begin(), parts_.end(), x,
                             [](const ClosedInterval& p, double v) { return p.hi < v; });
  return it != parts_.end() && it->lo <= x;
}

bool CompactSet::contains(const ClosedInterval& interval) const {
  auto it = std::lower_bound(parts_.begin(), parts_.end(), interval.lo,
                             [](const ClosedInterval& p, double v) { return p.hi < v; });
  return it != parts_.end() && it->contains(interval);
}

double CompactSet::length() const {
  double total = 0.0;
  for (const auto& p : parts_) total += p.length();
  return total;
}

std::optional<CompactSet> CompactSet::clip(double lo, double hi) const {
  std::vector<ClosedInterval> out;
  for (const auto& p : parts_) {
    const double l = std::max(p.lo, lo);
    const double h = std::min(p.hi, hi);
    if (l <= h) out.push_back({l, h});
  }
  if (out.empty()) return std::nullopt;
  return CompactSet(std::move(out), hull_);
}

CompactSet make_compact(std::vector<ClosedInterval> intervals, ClosedInterval hull) {
  validate(hull);
  if (intervals.empty()) throw DomainError("compact set needs at least one interval");
  for (const auto& iv : intervals) {
    validate(iv);
    if (!hull.contains(iv)) {
      std::ostringstream os;
      os << "interval [" << iv.lo << ", " << iv.hi << "] lies outside hull [" << hull.lo << ", "
         << hull.hi << "]";
      throw DomainError(os.str());
    }
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const ClosedInterval& a, const ClosedInterval& b) {
              return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
            });
  std::vector<ClosedInterval> merged;
  merged.reserve(intervals.size());
  for (const auto& iv : intervals) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return CompactSet(std::move(merged), hull);
}

double GapDecomposition::length() const {
  double total = 0.0;
  for (const auto& g : gaps) total += g.length();
  return total;
}

GapDecomposition gaps(const CompactSet& k) {
  GapDecomposition out{k.hull(), {}};
  const auto& parts = k.parts();
  if (k.hull().lo < parts.front().lo) {
    out.gaps.push_back({k.hull().lo, parts.front().lo, true, false});
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    out.gaps.push_back(Interval::open(parts[i].hi, parts[i + 1].lo));
  }
  if (parts.back().hi < k.hull().hi) {
    out.gaps.push_back({parts.back().hi, k.hull().hi, false, true});
  }
  return out;
}

namespace {

double distance_to(double x, const ClosedInterval& p) {
  if (x < p.lo) return p.lo - x;
  if (x > p.hi) return x - p.hi;
  return 0.0;
}

}  // namespace

double distance(double x, const CompactSet& set) {
  const auto& parts = set.parts();
  auto it = std::lower_bound(parts.begin(), parts.end(), x,
                             [](const ClosedInterval& p, double v) { return p.hi < v; });
  double best = std::numeric_limits<double>::infinity();
  if (it != parts.end()) best = distance_to(x, *it);
  if (it != parts.begin()) best = std::min(best, distance_to(x, *std::prev(it)));
  return best;
}

double distance(double x, std::span<const ClosedInterval> set) {
  if (set.empty()) throw DomainError("distance to an empty set is undefined");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : set) best = std::min(best, distance_to(x, p));
  return best;
}

CompactSet cantor_approx(int depth, ClosedInterval hull) {
  validate(hull);
  if (depth < 0 || depth > kMaxCantorDepth) {
    throw DomainError("cantor depth must lie in [0, " + std::to_string(kMaxCantorDepth) + "]");
  }
  const std::size_t count = std::size_t{1} << depth;
  std::int64_t denom = 1;
  for (int i = 0; i < depth; ++i) denom *= 3;

  // Left end of part i in units of 3^-depth: ternary digits are the bits of i doubled.
  std::vector<ClosedInterval> parts;
  parts.reserve(count);
  const double width = hull.hi - hull.lo;
  const double d = static_cast<double>(denom);
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t start = 0;
    for (int bit = depth - 1; bit >= 0; --bit) {
      start = start * 3 + (((i >> bit) & 1u) ? 2 : 0);
    }
    const double lo = hull.lo + width * (static_cast<double>(start) / d);
    const double hi = (start + 1 == denom) ? hull.hi
                                           : hull.lo + width * (static_cast<double>(start + 1) / d);
    parts.push_back({lo, hi});
  }
  return make_compact(std::move(parts), hull);
}

}  // namespace riesz
