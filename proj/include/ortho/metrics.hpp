// SPDX-License-Identifier: Apache-2.0
#pragma once

// Evaluation helpers: multi-label precision/recall/F1 (per-document
// averaged or micro-pooled) and Spearman rank correlation with fractional
// ranks for ties.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ortho {

// A mean per-document rho above this value counts as positive correlation.
inline constexpr double kPositiveCorrelationThreshold = 0.4;

enum class PrfMode { example_based, micro };

struct PrfOptions {
  // Score credited to a document where prediction and gold are both empty.
  // When a prediction is empty but gold is not, precision is 0.
  double both_empty_value = 1.0;
};

struct DocumentPrf {
  std::string id;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassificationReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  PrfMode mode = PrfMode::example_based;
  std::size_t n_documents = 0;
  std::vector<DocumentPrf> per_document;  // filled in example_based mode
};

struct DocumentRho {
  std::string id;
  double rho = 0.0;
};

struct RankingReport {
  double mean_rho = 0.0;
  std::vector<DocumentRho> per_document;
  std::size_t n_excluded = 0;  // documents with < 2 items or zero variance
  bool positive_correlation = false;  // mean_rho > 0.4
};

using LabelSet = std::set<std::string>;

// P, R, F1 for a single document.
DocumentPrf prf1_sets(const LabelSet& predicted, const LabelSet& gold,
                      const PrfOptions& options = {});

// Pre: identical key sets. example_based averages per-document scores;
// micro pools true/false positive and negative counts first.
ClassificationReport prf1(const std::map<std::string, LabelSet>& predictions,
                          const std::map<std::string, LabelSet>& gold,
                          PrfMode mode, const PrfOptions& options = {});

// Fractional-rank Spearman correlation. Requires equal lengths >= 2;
// returns nullopt when either input has zero variance.
std::optional<double> spearman_rho(const std::vector<double>& ranks_a,
                                   const std::vector<double>& ranks_b);

// Pre: identical key sets and equal per-document lengths. Documents with
// fewer than two items or an undefined rho are excluded and counted.
RankingReport mean_rank_correlation(
    const std::map<std::string, std::vector<double>>& predicted,
    const std::map<std::string, std::vector<double>>& gold);

}  // namespace ortho
