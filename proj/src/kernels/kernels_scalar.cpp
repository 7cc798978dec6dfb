// SPDX-License-Identifier: Apache-2.0
//
// Scalar reference implementations. These are the ground truth the SIMD
// variants are tested against; keep them simple.

#include "kernels_impl.hpp"

namespace ortho::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += a[i] * b[i];
  }
  return s;
}

double sparse_dot_scalar(const double* w, const std::uint32_t* idx,
                         std::size_t k) {
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    s += w[idx[i]];
  }
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

void add_scalar(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += x[i];
  }
}

void scal_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] *= alpha;
  }
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot_scalar(a + r * cols, x, cols);
  }
}

void gemv_t_acc_scalar(const double* a, std::size_t rows, std::size_t cols,
                       const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    axpy_scalar(x[r], a + r * cols, y, cols);
  }
}

void relu_scalar(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < 0.0) {
      x[i] = 0.0;
    }
  }
}

void relu_backward_scalar(const double* pre, double* grad, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pre[i] > 0.0)) {
      grad[i] = 0.0;
    }
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      dot_scalar,  sparse_dot_scalar,  axpy_scalar, add_scalar,
      scal_scalar, gemv_scalar,        gemv_t_acc_scalar,
      relu_scalar, relu_backward_scalar,
  };
  return ops;
}

}  // namespace ortho::kernels::detail
