#pragma once

// Dense double-precision inner loops with a scalar reference and SIMD
// variants. The active variant is picked once at startup from the CPU
// features; SIMVEC_SIMD=scalar in the environment forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace simvec::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// Best variant supported by this CPU and build.
Isa detected_isa();

// Variant currently used by the dispatching entry points.
Isa active_isa();

// Overrides dispatch (tests, benchmarks). Requesting an unsupported variant
// falls back to scalar. Not thread-safe with concurrent kernel calls.
void set_active_isa(Isa isa);

// Dispatching entry points. Spans must have equal length.
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// x *= alpha
void scale(double alpha, std::span<double> x);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SIMVEC_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define SIMVEC_HAVE_NEON_KERNELS 1
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace simvec::kernels
