#pragma once

#include <cstddef>
#include <string>

// Dense kernels behind the Q-network training loop. A scalar reference
// path always exists; an AVX2 path is compiled when the toolchain
// supports it and selected at runtime via cpuid. Backends are
// equivalence-tested against the scalar reference.
namespace railbeam::kernels {

enum class Backend { Scalar, Avx2 };

/// Backend currently in use (selected on first call).
Backend active_backend();

bool backend_available(Backend b);

/// Override the runtime selection. Throws ConfigError when the backend
/// was not compiled in or the CPU lacks it.
void force_backend(Backend b);

std::string backend_name(Backend b);

double dot(const double* x, const double* y, std::size_t n);

/// y += a * x
void axpy(double a, const double* x, double* y, std::size_t n);

/// y = W x + b with row-major W [rows x cols]; b may be nullptr.
void gemv(const double* w, const double* x, const double* b, double* y,
          std::size_t rows, std::size_t cols);

/// y = W^T d with row-major W [rows x cols]; y has length cols.
void gemv_t(const double* w, const double* d, double* y, std::size_t rows,
            std::size_t cols);

/// gw += d x^T with row-major gw [rows x cols].
void ger_acc(const double* d, const double* x, double* gw, std::size_t rows,
             std::size_t cols);

namespace detail {

double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);

#if defined(RAILBEAM_HAVE_AVX2_TU)
double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
#endif

} // namespace detail

} // namespace railbeam::kernels
