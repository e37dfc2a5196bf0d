#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "railbeam/common.hpp"
#include "railbeam/kernels.hpp"

using namespace railbeam;
namespace k = railbeam::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * uniform01(rng) - 1.0;
  return v;
}

struct BackendGuard {
  k::Backend saved = k::active_backend();
  ~BackendGuard() { k::force_backend(saved); }
};

} // namespace

TEST_CASE("scalar dot/axpy reference values") {
  const double x[3] = {1.0, 2.0, 3.0};
  const double y[3] = {4.0, -5.0, 6.0};
  CHECK(k::detail::dot_scalar(x, y, 3) == doctest::Approx(12.0).epsilon(1e-15));
  double acc[3] = {1.0, 1.0, 1.0};
  k::detail::axpy_scalar(2.0, x, acc, 3);
  CHECK(acc[0] == 3.0);
  CHECK(acc[1] == 5.0);
  CHECK(acc[2] == 7.0);
  CHECK(k::detail::dot_scalar(x, y, 0) == 0.0);
}

TEST_CASE("backend equivalence: dot and axpy across sizes") {
  if (!k::backend_available(k::Backend::Avx2)) {
    MESSAGE("avx2 backend not available; equivalence trivially scalar-only");
    return;
  }
  BackendGuard guard;
  std::mt19937_64 rng(42);
  for (std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(3),
                        std::size_t(4), std::size_t(7), std::size_t(8),
                        std::size_t(9), std::size_t(31), std::size_t(64),
                        std::size_t(129), std::size_t(257)}) {
    const auto x = random_vec(rng, n);
    const auto y = random_vec(rng, n);
    k::force_backend(k::Backend::Scalar);
    const double d_ref = k::dot(x.data(), y.data(), n);
    auto acc_ref = random_vec(rng, n);
    auto acc_simd = acc_ref;
    k::axpy(0.7, x.data(), acc_ref.data(), n);

    k::force_backend(k::Backend::Avx2);
    const double d_simd = k::dot(x.data(), y.data(), n);
    k::axpy(0.7, x.data(), acc_simd.data(), n);

    CHECK(d_simd == doctest::Approx(d_ref).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i)
      CHECK(acc_simd[i] == doctest::Approx(acc_ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("backend equivalence: gemv, gemv_t, ger_acc") {
  if (!k::backend_available(k::Backend::Avx2)) return;
  BackendGuard guard;
  std::mt19937_64 rng(7);
  const std::size_t rows = 9, cols = 64;
  const auto w = random_vec(rng, rows * cols);
  const auto x = random_vec(rng, cols);
  const auto b = random_vec(rng, rows);
  const auto d = random_vec(rng, rows);

  std::vector<double> y_ref(rows), y_simd(rows), t_ref(cols), t_simd(cols);
  auto g_ref = random_vec(rng, rows * cols);
  auto g_simd = g_ref;

  k::force_backend(k::Backend::Scalar);
  k::gemv(w.data(), x.data(), b.data(), y_ref.data(), rows, cols);
  k::gemv_t(w.data(), d.data(), t_ref.data(), rows, cols);
  k::ger_acc(d.data(), x.data(), g_ref.data(), rows, cols);

  k::force_backend(k::Backend::Avx2);
  k::gemv(w.data(), x.data(), b.data(), y_simd.data(), rows, cols);
  k::gemv_t(w.data(), d.data(), t_simd.data(), rows, cols);
  k::ger_acc(d.data(), x.data(), g_simd.data(), rows, cols);

  for (std::size_t i = 0; i < rows; ++i)
    CHECK(y_simd[i] == doctest::Approx(y_ref[i]).epsilon(1e-12));
  for (std::size_t i = 0; i < cols; ++i)
    CHECK(t_simd[i] == doctest::Approx(t_ref[i]).epsilon(1e-12));
  for (std::size_t i = 0; i < rows * cols; ++i)
    CHECK(g_simd[i] == doctest::Approx(g_ref[i]).epsilon(1e-12));
}

TEST_CASE("gemv against a hand-computed 2x3 case") {
  // W = [[1,2,3],[4,5,6]], x = (1,-1,2), b = (0.5,-0.5)
  const double w[6] = {1, 2, 3, 4, 5, 6};
  const double x[3] = {1, -1, 2};
  const double b[2] = {0.5, -0.5};
  double y[2];
  k::gemv(w, x, b, y, 2, 3);
  CHECK(y[0] == doctest::Approx(5.5));
  CHECK(y[1] == doctest::Approx(10.5));
  double t[3];
  const double d[2] = {1.0, 0.5};
  k::gemv_t(w, d, t, 2, 3);
  CHECK(t[0] == doctest::Approx(3.0));
  CHECK(t[1] == doctest::Approx(4.5));
  CHECK(t[2] == doctest::Approx(6.0));
}
