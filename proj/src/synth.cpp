// SPDX-License-Identifier: Apache-2.0
#include "ortho/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "ortho/rng.hpp"

namespace ortho {
namespace {

constexpr std::uint32_t kFillerVocabulary = 25;
constexpr std::uint32_t kFillerLines = 2;

std::string filler_token(std::uint32_t j) {
  return "filler_" + std::to_string(j);
}

std::string zero_padded_id(std::uint32_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "c%06u", i);
  return buf;
}

}  // namespace

void SynthSpec::validate() const {
  if (n_certificates < 1) {
    throw std::invalid_argument("n_certificates must be >= 1");
  }
  if (n_labels < 2) throw std::invalid_argument("n_labels must be >= 2");
  if (keywords_per_label < 1) {
    throw std::invalid_argument("keywords_per_label must be >= 1");
  }
  if (!(problems_per_cert_mean > 0.0)) {
    throw std::invalid_argument("problems_per_cert_mean must be > 0");
  }
  if (label_noise_rate < 0.0 || label_noise_rate > 1.0) {
    throw std::invalid_argument("label_noise_rate must be in [0,1]");
  }
  if (priority_noise < 0.0) {
    throw std::invalid_argument("priority_noise must be >= 0");
  }
}

std::string synth_label_id(std::uint32_t ordinal) {
  return "g" + std::to_string(ordinal);
}

std::string synth_keyword(const std::string& label_id, std::uint32_t k) {
  return "kw_" + label_id + "_" + std::to_string(k);
}

SynthResult generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  SynthResult result;

  std::vector<std::string> label_ids(spec.n_labels);
  std::vector<std::string> phrases(spec.n_labels);
  std::vector<double> severity(spec.n_labels);
  for (std::uint32_t i = 0; i < spec.n_labels; ++i) {
    label_ids[i] = synth_label_id(i);
    std::string phrase;
    for (std::uint32_t k = 0; k < spec.keywords_per_label; ++k) {
      if (k != 0) phrase += ' ';
      phrase += synth_keyword(label_ids[i], k);
    }
    phrases[i] = phrase;
    auto it = spec.severity.find(label_ids[i]);
    severity[i] = it != spec.severity.end()
                      ? it->second
                      : static_cast<double>(spec.n_labels - i);
    result.catalog.classes[label_ids[i]] = phrase;
    result.catalog.grouping[label_ids[i]] = label_ids[i];
  }

  Rng rng(spec.rng_seed);
  std::vector<std::uint32_t> ordinals(spec.n_labels);
  result.corpus.reserve(spec.n_certificates);
  for (std::uint32_t c = 0; c < spec.n_certificates; ++c) {
    Certificate cert;
    cert.id = zero_padded_id(c);

    std::uint64_t drawn = rng.poisson(spec.problems_per_cert_mean);
    std::uint32_t m = static_cast<std::uint32_t>(
        std::clamp<std::uint64_t>(drawn, 1, spec.n_labels));

    std::iota(ordinals.begin(), ordinals.end(), 0u);
    rng.shuffle(ordinals);
    std::vector<std::uint32_t> chosen(ordinals.begin(), ordinals.begin() + m);

    // Rank the chosen labels by jittered severity; ties break toward the
    // smaller label ordinal. Priority 1 is the highest score.
    std::vector<std::pair<double, std::uint32_t>> scored;
    scored.reserve(m);
    for (std::uint32_t ord : chosen) {
      double score = severity[ord] + spec.priority_noise * rng.normal();
      scored.emplace_back(score, ord);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });

    std::string text;
    for (std::uint32_t rank = 0; rank < m; ++rank) {
      std::uint32_t ord = scored[rank].second;
      Problem p;
      p.surface_text = phrases[ord];
      p.class_id = label_ids[ord];
      p.priority = rank + 1;
      cert.problems.push_back(std::move(p));

      bool dropped = spec.label_noise_rate > 0.0 &&
                     rng.uniform() < spec.label_noise_rate;
      if (!dropped) {
        text += "- " + phrases[ord];
        std::uint64_t extra = 1 + rng.below(3);
        for (std::uint64_t e = 0; e < extra; ++e) {
          text += ' ';
          text += filler_token(static_cast<std::uint32_t>(
              rng.below(kFillerVocabulary)));
        }
        text += '\n';
      }
    }
    for (std::uint32_t l = 0; l < kFillerLines; ++l) {
      text += "- ";
      std::uint64_t n_tokens = 2 + rng.below(4);
      for (std::uint64_t t = 0; t < n_tokens; ++t) {
        if (t != 0) text += ' ';
        text += filler_token(
            static_cast<std::uint32_t>(rng.below(kFillerVocabulary)));
      }
      text += '\n';
    }
    cert.findings_text = std::move(text);
    result.corpus.push_back(std::move(cert));
  }
  return result;
}

}  // namespace ortho
