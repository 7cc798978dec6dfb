// SPDX-License-Identifier: Apache-2.0
#include "ortho/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ortho {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("Rng::below: n must be positive");
  }
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  std::uint64_t r;
  do {
    r = next();
  } while (r < threshold);
  return r % n;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u;
  do {
    u = 1.0 - uniform();  // (0, 1], keeps log() finite
  } while (u <= 0.0);
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double a = 2.0 * std::numbers::pi * v;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::uint32_t Rng::poisson(double mean) {
  const double limit = std::exp(-mean);
  std::uint32_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform();
  } while (p > limit);
  return k - 1;
}

}  // namespace ortho
