#include "railbeam/kernels.hpp"

#include "railbeam/common.hpp"

namespace railbeam::kernels {

namespace detail {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

} // namespace detail

namespace {

struct Ops {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
};

constexpr Ops kScalarOps{detail::dot_scalar, detail::axpy_scalar};

#if defined(RAILBEAM_HAVE_AVX2_TU)
constexpr Ops kAvx2Ops{detail::dot_avx2, detail::axpy_avx2};
#endif

bool cpu_has_avx2() {
#if defined(RAILBEAM_HAVE_AVX2_TU) && defined(__x86_64__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend g_backend = cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;

const Ops& ops() {
#if defined(RAILBEAM_HAVE_AVX2_TU)
  if (g_backend == Backend::Avx2) return kAvx2Ops;
#endif
  return kScalarOps;
}

} // namespace

Backend active_backend() { return g_backend; }

bool backend_available(Backend b) {
  if (b == Backend::Scalar) return true;
  return cpu_has_avx2();
}

void force_backend(Backend b) {
  if (!backend_available(b))
    throw ConfigError("kernel backend not available: " + backend_name(b));
  g_backend = b;
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

double dot(const double* x, const double* y, std::size_t n) {
  return ops().dot(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  ops().axpy(a, x, y, n);
}

void gemv(const double* w, const double* x, const double* b, double* y,
          std::size_t rows, std::size_t cols) {
  const Ops& o = ops();
  for (std::size_t r = 0; r < rows; ++r)
    y[r] = o.dot(w + r * cols, x, cols) + (b ? b[r] : 0.0);
}

void gemv_t(const double* w, const double* d, double* y, std::size_t rows,
            std::size_t cols) {
  const Ops& o = ops();
  for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) o.axpy(d[r], w + r * cols, y, cols);
}

void ger_acc(const double* d, const double* x, double* gw, std::size_t rows,
             std::size_t cols) {
  const Ops& o = ops();
  for (std::size_t r = 0; r < rows; ++r) o.axpy(d[r], x, gw + r * cols, cols);
}

} // namespace railbeam::kernels
