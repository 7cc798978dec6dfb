// SPDX-License-Identifier: Apache-2.0
#pragma once

// Synthetic corpus generator. Labels are schematic ("g0", "g1", ...) and
// each label owns a fixed set of keyword tokens ("kw_g3_0"). Findings text
// is rendered by emitting the keyword phrase of every gold label plus
// shared filler tokens, so a keyword-matching oracle can recover the gold
// label set exactly when label_noise_rate is zero. Priorities follow a
// per-label severity score; higher severity means a smaller (more urgent)
// priority number.

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "ortho/corpus.hpp"

namespace ortho {

struct SynthSpec {
  std::uint32_t n_certificates = 990;
  std::uint32_t n_labels = 151;
  std::uint32_t keywords_per_label = 2;
  double problems_per_cert_mean = 15.4;
  double label_noise_rate = 0.0;  // chance a gold label is dropped from text
  double priority_noise = 0.0;    // stddev of per-certificate severity jitter
  // Priority utility per class id; labels absent from the map default to
  // n_labels minus the label ordinal, which is strictly decreasing.
  std::map<std::string, double> severity;
  std::uint64_t rng_seed = 1;

  void validate() const;  // throws std::invalid_argument
};

struct SynthResult {
  Corpus corpus;
  LabelCatalog catalog;
};

// "g<i>"
std::string synth_label_id(std::uint32_t ordinal);
// "kw_<label>_<k>"
std::string synth_keyword(const std::string& label_id, std::uint32_t k);

// Deterministic: equal specs give equal corpora.
SynthResult generate_synthetic(const SynthSpec& spec);

}  // namespace ortho
