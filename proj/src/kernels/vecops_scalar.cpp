#include "objnav/kernels/vecops.hpp"

namespace objnav::vecops::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double* x, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

void blend_scalar(const double* obs, const double* prior, double k, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = obs[i] + k * (prior[i] - obs[i]);
}

}  // namespace objnav::vecops::detail
