// SPDX-License-Identifier: Apache-2.0
//
// Backend selection and dispatch. The table of the active backend is
// resolved once at startup (honoring ORTHO_KERNELS) and can be switched
// explicitly with set_backend().

#include "ortho/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace ortho::kernels {
namespace {

Backend resolve_initial() {
  const bool have_avx2 = detail::avx2_ops() != nullptr;
  if (const char* env = std::getenv("ORTHO_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") {
      return Backend::scalar;
    }
    if (want == "avx2" && have_avx2) {
      return Backend::avx2;
    }
    // Unknown or unavailable request falls through to auto selection.
  }
  return have_avx2 ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{resolve_initial()};
  return slot;
}

const detail::Ops& ops() {
  return backend_slot().load(std::memory_order_relaxed) == Backend::avx2
             ? *detail::avx2_ops()
             : detail::scalar_ops();
}

}  // namespace

Backend active_backend() {
  return backend_slot().load(std::memory_order_relaxed);
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return detail::avx2_ops() != nullptr;
  }
  return false;
}

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("kernel backend unavailable: " +
                                std::string(backend_name(b)));
  }
  backend_slot().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

double dot(const double* a, const double* b, std::size_t n) {
  return ops().dot(a, b, n);
}

double sparse_dot(const double* w, const std::uint32_t* idx, std::size_t k) {
  return ops().sparse_dot(w, idx, k);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  ops().axpy(alpha, x, y, n);
}

void add(const double* x, double* y, std::size_t n) { ops().add(x, y, n); }

void scal(double alpha, double* x, std::size_t n) { ops().scal(alpha, x, n); }

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y) {
  ops().gemv(a, rows, cols, x, y);
}

void gemv_t_acc(const double* a, std::size_t rows, std::size_t cols,
                const double* x, double* y) {
  ops().gemv_t_acc(a, rows, cols, x, y);
}

void relu(double* x, std::size_t n) { ops().relu(x, n); }

void relu_backward(const double* pre, double* grad, std::size_t n) {
  ops().relu_backward(pre, grad, n);
}

}  // namespace ortho::kernels
