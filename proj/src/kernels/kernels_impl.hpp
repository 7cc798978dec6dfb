// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>

namespace ortho::kernels::detail {

// One function pointer per public kernel; the dispatcher holds the table
// of the active backend.
struct Ops {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sparse_dot)(const double*, const std::uint32_t*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*add)(const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  void (*gemv)(const double*, std::size_t, std::size_t, const double*,
               double*);
  void (*gemv_t_acc)(const double*, std::size_t, std::size_t, const double*,
                     double*);
  void (*relu)(double*, std::size_t);
  void (*relu_backward)(const double*, double*, std::size_t);
};

const Ops& scalar_ops();

// Non-null only when the AVX2 variant was compiled in and the CPU
// supports AVX2 and FMA.
const Ops* avx2_ops();

}  // namespace ortho::kernels::detail
