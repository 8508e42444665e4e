#include "objnav/kernels/vecops.hpp"

#include <cmath>

namespace objnav::vecops {

namespace {

Backend g_backend = Backend::Scalar;

bool backend_available(Backend b) {
  if (b == Backend::Scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
  return cpu_supports_avx2();
#else
  return false;
#endif
}

Backend pick_default() {
  return backend_available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

void install(Backend b);

struct Init {
  Init() { install(pick_default()); }
};

}  // namespace

DotFn dot_ptr = detail::dot_scalar;
AxpyFn axpy_ptr = detail::axpy_scalar;
ScaleFn scale_ptr = detail::scale_scalar;
BlendFn blend_ptr = detail::blend_scalar;

namespace {
void install(Backend b) {
  g_backend = b;
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::Avx2) {
    dot_ptr = detail::dot_avx2;
    axpy_ptr = detail::axpy_avx2;
    scale_ptr = detail::scale_avx2;
    blend_ptr = detail::blend_avx2;
    return;
  }
#endif
  dot_ptr = detail::dot_scalar;
  axpy_ptr = detail::axpy_scalar;
  scale_ptr = detail::scale_scalar;
  blend_ptr = detail::blend_scalar;
}

Init g_init;
}  // namespace

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return g_backend; }

bool set_backend(Backend b) {
  if (!backend_available(b)) return false;
  install(b);
  return true;
}

std::string backend_name() { return g_backend == Backend::Avx2 ? "avx2" : "scalar"; }

bool normalize(std::span<double> x) {
  const double n = norm(x);
  if (!(n > 1e-300)) return false;
  scale(x, 1.0 / n);
  return true;
}

}  // namespace objnav::vecops
