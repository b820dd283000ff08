#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "riesz/errors.hpp"
#include "riesz/kernels.hpp"

namespace riesz::kernels {
namespace {

Isa resolve(Isa isa) { return available(isa) ? isa : Isa::scalar; }

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw DomainError("kernel output span does not match input size");
}

}  // namespace

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "scalar";
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#ifdef RIESZ_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() { return available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() {
  static const Isa chosen = [] {
    if (const char* env = std::getenv("STIELTJES_SIMD")) {
      const std::string v = env;
      if (v == "scalar") return Isa::scalar;
      if (v == "avx2") return resolve(Isa::avx2);
    }
    return detected_isa();
  }();
  return chosen;
}

double abel_sum(std::span<const double> f, std::span<const double> alpha, Isa isa) {
  check_same_size(f.size(), alpha.size());
  if (f.size() < 3) return 0.0;
#ifdef RIESZ_HAVE_AVX2_KERNELS
  if (resolve(isa) == Isa::avx2) return avx2::abel_sum(f, alpha);
#endif
  (void)isa;
  return scalar::abel_sum(f, alpha);
}

void distance_batch(std::span<const double> xs, std::span<const ClosedInterval> parts,
                    std::span<double> out, Isa isa) {
  check_same_size(xs.size(), out.size());
  if (parts.empty()) throw DomainError("distance to an empty set is undefined");
#ifdef RIESZ_HAVE_AVX2_KERNELS
  if (resolve(isa) == Isa::avx2) return avx2::distance_batch(xs, parts, out);
#endif
  (void)isa;
  scalar::distance_batch(xs, parts, out);
}

void indicator_batch(std::span<const double> xs, std::span<const ClosedInterval> parts, double k,
                     std::span<double> out, Isa isa) {
  check_same_size(xs.size(), out.size());
  if (parts.empty()) throw DomainError("indicator of an empty set is undefined");
#ifdef RIESZ_HAVE_AVX2_KERNELS
  if (resolve(isa) == Isa::avx2) return avx2::indicator_batch(xs, parts, k, out);
#endif
  (void)isa;
  scalar::indicator_batch(xs, parts, k, out);
}

void urysohn_batch(std::span<const double> xs, std::span<const ClosedInterval> near,
                   std::span<const ClosedInterval> far, std::span<double> out, Isa isa) {
  check_same_size(xs.size(), out.size());
  if (near.empty() || far.empty()) throw DomainError("urysohn function needs two nonempty sets");
#ifdef RIESZ_HAVE_AVX2_KERNELS
  if (resolve(isa) == Isa::avx2) return avx2::urysohn_batch(xs, near, far, out);
#endif
  (void)isa;
  scalar::urysohn_batch(xs, near, far, out);
}

}  // namespace riesz::kernels
