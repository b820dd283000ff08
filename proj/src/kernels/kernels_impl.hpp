#pragma once

#include <span>

#include "riesz/interval_sets.hpp"

namespace riesz::kernels {

namespace scalar {
double abel_sum(std::span<const double> f, std::span<const double> alpha);
void distance_batch(std::span<const double> xs, std::span<const ClosedInterval> parts,
                    std::span<double> out);
void indicator_batch(std::span<const double> xs, std::span<const ClosedInterval> parts, double k,
                     std::span<double> out);
void urysohn_batch(std::span<const double> xs, std::span<const ClosedInterval> near,
                   std::span<const ClosedInterval> far, std::span<double> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(__i386__)
#define RIESZ_HAVE_AVX2_KERNELS 1
namespace avx2 {
double abel_sum(std::span<const double> f, std::span<const double> alpha);
void distance_batch(std::span<const double> xs, std::span<const ClosedInterval> parts,
                    std::span<double> out);
void indicator_batch(std::span<const double> xs, std::span<const ClosedInterval> parts, double k,
                     std::span<double> out);
void urysohn_batch(std::span<const double> xs, std::span<const ClosedInterval> near,
                   std::span<const ClosedInterval> far, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace riesz::kernels
