// SPDX-License-Identifier: Apache-2.0
#pragma once

// Glue between the corpus and the learners: feature-kind dispatch and the
// builders that turn certificates into classifier examples and ranking
// pair groups. Embedding features are keyed by certificate id for findings
// text and by surface text for problems, matching the embedding export.

#include <string>
#include <vector>

#include "ortho/classifier.hpp"
#include "ortho/corpus.hpp"
#include "ortho/features.hpp"
#include "ortho/ranker.hpp"

namespace ortho {

enum class FeatureKind { bow, ook, embedding };

FeatureKind parse_feature_kind(const std::string& name);
std::string feature_kind_name(FeatureKind kind);

// Artifacts backing a feature encoding; only the members a kind needs have
// to be set (bow: vocab, ook: classes, embedding: table).
struct EncoderContext {
  TokenizerScheme scheme = TokenizerScheme::whitespace;
  const Vocabulary* vocab = nullptr;
  const ClassIndex* classes = nullptr;
  const EmbeddingTable* table = nullptr;
};

// Findings-text features for the classifier. The ook kind is not a
// findings encoding and is rejected.
FeatureVector encode_findings(const Certificate& cert, FeatureKind kind,
                              const EncoderContext& ctx);

// Per-problem features for the ranker.
FeatureVector encode_problem(const Problem& problem, FeatureKind kind,
                             const EncoderContext& ctx);

// Certificates in the order of the given ids; unknown ids are an error.
Corpus subset_by_ids(const Corpus& corpus, const std::vector<std::string>& ids);

// Sorted distinct class ids occurring in the corpus.
std::vector<std::string> collect_label_ids(const Corpus& corpus);

// One token list per certificate's findings text.
std::vector<std::vector<std::string>> tokenized_findings(
    const Corpus& corpus, TokenizerScheme scheme);

// One token list per problem surface text across the corpus.
std::vector<std::vector<std::string>> tokenized_problem_texts(
    const Corpus& corpus, TokenizerScheme scheme);

// Classifier examples with 0/1 targets over the given label list. Gold
// labels outside the list are dropped (they cannot be represented).
std::vector<LabeledExample> make_classifier_examples(
    const Corpus& corpus, const std::vector<std::string>& labels,
    FeatureKind kind, const EncoderContext& ctx);

// Preference pairs per certificate; certificates with fewer than two
// problems contribute nothing.
std::vector<std::vector<PreferencePair>> make_pair_groups(
    const Corpus& corpus, FeatureKind kind, const EncoderContext& ctx);

// Validation groups with gold priorities as rank values.
std::vector<RankValidationGroup> make_validation_groups(
    const Corpus& corpus, FeatureKind kind, const EncoderContext& ctx);

}  // namespace ortho
