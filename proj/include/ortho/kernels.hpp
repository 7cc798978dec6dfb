// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel kernels behind the classifier and ranker inner loops.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant selected at runtime. The active backend can be pinned
// with set_backend() or the ORTHO_KERNELS environment variable ("scalar"
// or "avx2"); by default the best backend the CPU supports is used.
// The SIMD variants are equivalence-tested against the scalar reference.
// Results of the two backends may differ in the last bits (FMA and
// different summation order), so a fixed backend should be used when
// bit-identical output across machines matters.

namespace ortho::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend b);
// Pins the backend. Throws std::invalid_argument if it is unavailable.
void set_backend(Backend b);
std::string_view backend_name(Backend b);

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum of w at the given indices (dot of w with a binary sparse vector)
double sparse_dot(const double* w, const std::uint32_t* idx, std::size_t k);

// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

// y += x
void add(const double* x, double* y, std::size_t n);

// x *= alpha
void scal(double alpha, double* x, std::size_t n);

// y = A x for row-major A (rows x cols); y has rows entries
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y);

// y += A^T x for row-major A (rows x cols); y has cols entries
void gemv_t_acc(const double* a, std::size_t rows, std::size_t cols,
                const double* x, double* y);

// x[i] = max(x[i], 0)
void relu(double* x, std::size_t n);

// grad[i] = pre[i] > 0 ? grad[i] : 0
void relu_backward(const double* pre, double* grad, std::size_t n);

}  // namespace ortho::kernels
