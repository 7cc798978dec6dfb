// SPDX-License-Identifier: Apache-2.0
#include "ortho/pipeline.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "ortho/errors.hpp"

namespace ortho {
namespace {

void require(const void* artifact, const char* what, FeatureKind kind) {
  if (artifact == nullptr) {
    throw std::invalid_argument(std::string(what) + " required for " +
                                feature_kind_name(kind) + " features");
  }
}

}  // namespace

FeatureKind parse_feature_kind(const std::string& name) {
  if (name == "bow") return FeatureKind::bow;
  if (name == "ook") return FeatureKind::ook;
  if (name == "embedding") return FeatureKind::embedding;
  throw std::invalid_argument("unknown feature kind \"" + name + "\"");
}

std::string feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::bow:
      return "bow";
    case FeatureKind::ook:
      return "ook";
    case FeatureKind::embedding:
      return "embedding";
  }
  throw std::invalid_argument("bad feature kind");
}

FeatureVector encode_findings(const Certificate& cert, FeatureKind kind,
                              const EncoderContext& ctx) {
  switch (kind) {
    case FeatureKind::bow:
      require(ctx.vocab, "vocabulary", kind);
      return bow_vectorize(tokenize(cert.findings_text, ctx.scheme),
                           *ctx.vocab);
    case FeatureKind::embedding:
      require(ctx.table, "embedding table", kind);
      return lookup_embedding(cert.id, *ctx.table);
    case FeatureKind::ook:
      throw std::invalid_argument(
          "ook features encode single problems, not findings text");
  }
  throw std::invalid_argument("bad feature kind");
}

FeatureVector encode_problem(const Problem& problem, FeatureKind kind,
                             const EncoderContext& ctx) {
  switch (kind) {
    case FeatureKind::bow:
      require(ctx.vocab, "vocabulary", kind);
      return bow_vectorize(tokenize(problem.surface_text, ctx.scheme),
                           *ctx.vocab);
    case FeatureKind::ook:
      require(ctx.classes, "class index", kind);
      return ook_vectorize(problem.class_id, *ctx.classes);
    case FeatureKind::embedding:
      require(ctx.table, "embedding table", kind);
      return lookup_embedding(problem.surface_text, *ctx.table);
  }
  throw std::invalid_argument("bad feature kind");
}

Corpus subset_by_ids(const Corpus& corpus,
                     const std::vector<std::string>& ids) {
  std::unordered_map<std::string, const Certificate*> by_id;
  by_id.reserve(corpus.size());
  for (const Certificate& cert : corpus) by_id.emplace(cert.id, &cert);
  Corpus out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw DataError("split references unknown certificate id \"" + id +
                      "\"");
    }
    out.push_back(*it->second);
  }
  return out;
}

std::vector<std::string> collect_label_ids(const Corpus& corpus) {
  std::vector<std::string> ids;
  for (const Certificate& cert : corpus) {
    for (const Problem& p : cert.problems) ids.push_back(p.class_id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<std::vector<std::string>> tokenized_findings(
    const Corpus& corpus, TokenizerScheme scheme) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  for (const Certificate& cert : corpus) {
    docs.push_back(tokenize(cert.findings_text, scheme));
  }
  return docs;
}

std::vector<std::vector<std::string>> tokenized_problem_texts(
    const Corpus& corpus, TokenizerScheme scheme) {
  std::vector<std::vector<std::string>> docs;
  for (const Certificate& cert : corpus) {
    for (const Problem& p : cert.problems) {
      docs.push_back(tokenize(p.surface_text, scheme));
    }
  }
  return docs;
}

std::vector<LabeledExample> make_classifier_examples(
    const Corpus& corpus, const std::vector<std::string>& labels,
    FeatureKind kind, const EncoderContext& ctx) {
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::uint32_t l = 0; l < labels.size(); ++l) index.emplace(labels[l], l);
  std::vector<LabeledExample> examples;
  examples.reserve(corpus.size());
  for (const Certificate& cert : corpus) {
    LabeledExample e{encode_findings(cert, kind, ctx),
                     std::vector<std::uint8_t>(labels.size(), 0)};
    for (const Problem& p : cert.problems) {
      auto it = index.find(p.class_id);
      if (it != index.end()) e.targets[it->second] = 1;
    }
    examples.push_back(std::move(e));
  }
  return examples;
}

std::vector<std::vector<PreferencePair>> make_pair_groups(
    const Corpus& corpus, FeatureKind kind, const EncoderContext& ctx) {
  std::vector<std::vector<PreferencePair>> groups;
  for (const Certificate& cert : corpus) {
    std::vector<PreferencePair> pairs = build_pairs(
        cert, [&](const Problem& p) { return encode_problem(p, kind, ctx); });
    if (!pairs.empty()) groups.push_back(std::move(pairs));
  }
  return groups;
}

std::vector<RankValidationGroup> make_validation_groups(
    const Corpus& corpus, FeatureKind kind, const EncoderContext& ctx) {
  std::vector<RankValidationGroup> groups;
  for (const Certificate& cert : corpus) {
    if (cert.problems.size() < 2) continue;
    RankValidationGroup g;
    g.group_id = cert.id;
    for (const Problem& p : cert.problems) {
      g.items.push_back(encode_problem(p, kind, ctx));
      g.gold_ranks.push_back(static_cast<double>(p.priority));
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace ortho
