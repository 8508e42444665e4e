#pragma once

#include <cstddef>
#include <span>
#include <string>

// Dense double-vector kernels behind the embedding pipeline (dot products,
// weighted accumulation, Kalman blending, normalization). Each kernel has a
// scalar reference implementation and an AVX2 variant; the active set is
// chosen once at startup from CPU capabilities and can be forced for
// equivalence testing.

namespace objnav::vecops {

enum class Backend { Scalar, Avx2 };

using DotFn = double (*)(const double*, const double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);
using ScaleFn = void (*)(double*, double, std::size_t);
using BlendFn = void (*)(const double*, const double*, double, double*, std::size_t);

extern DotFn dot_ptr;
extern AxpyFn axpy_ptr;
extern ScaleFn scale_ptr;
extern BlendFn blend_ptr;

// sum(a[i] * b[i])
inline double dot(std::span<const double> a, std::span<const double> b) {
  return dot_ptr(a.data(), b.data(), a.size());
}

// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  axpy_ptr(a, x.data(), y.data(), y.size());
}

// x *= s
inline void scale(std::span<double> x, double s) { scale_ptr(x.data(), s, x.size()); }

// out = obs + k * (prior - obs), component-wise
inline void blend(std::span<const double> obs, std::span<const double> prior, double k,
                  std::span<double> out) {
  blend_ptr(obs.data(), prior.data(), k, out.data(), out.size());
}

inline double norm(std::span<const double> a) {
  double s = dot(a, a);
  return s > 0.0 ? __builtin_sqrt(s) : 0.0;
}

// Scales x to unit norm; returns false (and leaves x untouched) when the norm
// is numerically zero.
bool normalize(std::span<double> x);

// Runtime selection. `set_backend` with an unsupported backend returns false.
Backend active_backend();
bool set_backend(Backend b);
bool cpu_supports_avx2();
std::string backend_name();

// Direct access to both variants for equivalence tests.
namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void scale_scalar(double* x, double s, std::size_t n);
void blend_scalar(const double* obs, const double* prior, double k, double* out, std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void scale_avx2(double* x, double s, std::size_t n);
void blend_avx2(const double* obs, const double* prior, double k, double* out, std::size_t n);
#endif
}  // namespace detail

}  // namespace objnav::vecops
