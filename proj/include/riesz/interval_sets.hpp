#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace riesz {

struct ClosedInterval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const ClosedInterval& other) const { return lo <= other.lo && other.hi <= hi; }

  friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};

// Throws DomainError unless lo <= hi and both ends are finite.
void validate(const ClosedInterval& interval);

/// An interval of the real line with explicit endpoint status. Used for the
/// components of a complement (which may be half-open at the hull boundary)
/// and for the sets a Lebesgue-Stieltjes measure is evaluated on.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval point(double at) { return {at, at, true, true}; }
  /// (s,t], or [s,t] when includes_left is set.
  static Interval half_open(double s, double t, bool includes_left = false) {
    return {s, t, includes_left, true};
  }

  bool empty() const { return hi < lo || (lo == hi && !(lo_closed && hi_closed)); }
  bool contains(double x) const {
    return (lo_closed ? lo <= x : lo < x) && (hi_closed ? x <= hi : x < hi);
  }
  double length() const { return empty() ? 0.0 : hi - lo; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

std::string to_string(const Interval& interval);

/// Finite union of pairwise disjoint closed intervals inside an ambient hull.
/// Always held in canonical form: sorted, with touching parts merged.
class CompactSet {
 public:
  const std::vector<ClosedInterval>& parts() const { return parts_; }
  const ClosedInterval& hull() const { return hull_; }

  bool contains(double x) const;
  bool contains(const ClosedInterval& interval) const;
  /// Sum of part lengths.
  double length() const;
  /// K ∩ [lo, hi]; empty optional when the intersection is empty.
  std::optional<CompactSet> clip(double lo, double hi) const;

  friend bool operator==(const CompactSet&, const CompactSet&) = default;

 private:
  friend CompactSet make_compact(std::vector<ClosedInterval>, ClosedInterval);
  CompactSet(std::vector<ClosedInterval> parts, ClosedInterval hull)
      : parts_(std::move(parts)), hull_(hull) {}

  std::vector<ClosedInterval> parts_;
  ClosedInterval hull_;
};

/// Sorts and merges overlapping or touching intervals. Throws DomainError on
/// empty input or when an interval leaves the hull.
CompactSet make_compact(std::vector<ClosedInterval> intervals, ClosedInterval hull);

/// Components of hull \ K in increasing order. Interior gaps are open; a gap
/// touching the hull boundary is closed on that side.
struct GapDecomposition {
  ClosedInterval hull;
  std::vector<Interval> gaps;

  double length() const;
};

GapDecomposition gaps(const CompactSet& k);

/// inf over y in A of |x - y|.
double distance(double x, const CompactSet& set);
/// Same for an arbitrary (unsorted, possibly overlapping) list; throws on empty.
double distance(double x, std::span<const ClosedInterval> set);

inline constexpr int kMaxCantorDepth = 20;

/// Depth-n middle-thirds approximant: 2^n closed intervals of length
/// (hi - lo) / 3^n. Successive depths are nested exactly in floating point.
CompactSet cantor_approx(int depth, ClosedInterval hull);

}  // namespace riesz
