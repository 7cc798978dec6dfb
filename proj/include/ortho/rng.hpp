// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ortho {

// Derives an independent child seed from a base seed and a salt
// (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// mt19937_64 engine with hand-rolled distribution transforms. The engine
// output sequence is fixed by the standard, but std::*_distribution is
// implementation-defined; the transforms below are pinned here so that
// generated corpora and training runs are byte-identical across standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // uniform double in [0, 1), 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n), unbiased via rejection
  std::uint64_t below(std::uint64_t n);

  // standard normal, Box-Muller with cached spare
  double normal();

  // Poisson-distributed count (Knuth multiplication method; fine for
  // the moderate means used here)
  std::uint32_t poisson(double mean);

  // Fisher-Yates shuffle driven by below()
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ortho
