#include <algorithm>
#include <limits>

#include "kernels_impl.hpp"

namespace riesz::kernels::scalar {
namespace {

inline double distance_one(double x, std::span<const ClosedInterval> parts) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) {
    const double d = std::max(std::max(p.lo - x, x - p.hi), 0.0);
    best = std::min(best, d);
  }
  return best;
}

}  // namespace

double abel_sum(std::span<const double> f, std::span<const double> alpha) {
  double sum = 0.0;
  const std::size_t n = f.size() - 1;
  for (std::size_t j = 1; j < n; ++j) sum += alpha[j] * (f[j + 1] - f[j]);
  return sum;
}

void distance_batch(std::span<const double> xs, std::span<const ClosedInterval> parts,
                    std::span<double> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = distance_one(xs[i], parts);
}

void indicator_batch(std::span<const double> xs, std::span<const ClosedInterval> parts, double k,
                     std::span<double> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i] = std::max(0.0, 1.0 - k * distance_one(xs[i], parts));
  }
}

void urysohn_batch(std::span<const double> xs, std::span<const ClosedInterval> near,
                   std::span<const ClosedInterval> far, std::span<double> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d_far = distance_one(xs[i], far);
    const double d_near = distance_one(xs[i], near);
    out[i] = d_far / (d_far + d_near);
  }
}

}  // namespace riesz::kernels::scalar
