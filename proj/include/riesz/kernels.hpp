#pragma once

#include <span>
#include <string_view>

#include "riesz/interval_sets.hpp"

// Batch inner loops with a scalar reference path and vector paths picked at
// runtime. Distances, indicator ramps and Urysohn quotients are computed with
// the same operation sequence on every path and agree bit for bit; reductions
// reassociate and agree to rounding.
namespace riesz::kernels {

enum class Isa { scalar, avx2 };

std::string_view name(Isa isa);
bool available(Isa isa);
/// Best instruction set supported by this CPU.
Isa detected_isa();
/// detected_isa(), unless STIELTJES_SIMD=scalar|avx2 requests otherwise
/// (a request for an unavailable set falls back to scalar).
Isa active_isa();

/// Σ_{j=1}^{n-1} alpha[j] * (f[j+1] - f[j]) for arrays of length n + 1: the
/// inner term of a Stieltjes sum rewritten by summation by parts.
double abel_sum(std::span<const double> f, std::span<const double> alpha, Isa isa = active_isa());

/// out[i] = distance from xs[i] to the union of parts.
void distance_batch(std::span<const double> xs, std::span<const ClosedInterval> parts,
                    std::span<double> out, Isa isa = active_isa());

/// out[i] = max(0, 1 - k * d(xs[i], parts)).
void indicator_batch(std::span<const double> xs, std::span<const ClosedInterval> parts, double k,
                     std::span<double> out, Isa isa = active_isa());

/// out[i] = d(x, far) / (d(x, far) + d(x, near)); near and far must be disjoint.
void urysohn_batch(std::span<const double> xs, std::span<const ClosedInterval> near,
                   std::span<const ClosedInterval> far, std::span<double> out,
                   Isa isa = active_isa());

}  // namespace riesz::kernels
