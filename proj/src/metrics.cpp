// SPDX-License-Identifier: Apache-2.0
#include "ortho/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ortho/errors.hpp"

namespace ortho {
namespace {

template <typename A, typename B>
void check_same_keys(const std::map<std::string, A>& a,
                     const std::map<std::string, B>& b) {
  if (a.size() != b.size()) {
    throw DataError("prediction and gold key sets differ in size");
  }
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first) {
      throw DataError("prediction and gold key sets differ at \"" + ia->first +
                      "\" vs \"" + ib->first + "\"");
    }
  }
}

std::size_t intersection_size(const LabelSet& a, const LabelSet& b) {
  const LabelSet& small = a.size() <= b.size() ? a : b;
  const LabelSet& large = a.size() <= b.size() ? b : a;
  std::size_t n = 0;
  for (const auto& x : small) n += large.count(x);
  return n;
}

// Average (fractional) ranks, 1-based; tied values share the mean of the
// positions they occupy.
std::vector<double> fractional_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

DocumentPrf prf1_sets(const LabelSet& predicted, const LabelSet& gold,
                      const PrfOptions& options) {
  DocumentPrf out;
  if (predicted.empty() && gold.empty()) {
    out.precision = out.recall = out.f1 = options.both_empty_value;
    return out;
  }
  const double inter = static_cast<double>(intersection_size(predicted, gold));
  out.precision =
      predicted.empty() ? 0.0 : inter / static_cast<double>(predicted.size());
  out.recall = gold.empty() ? 0.0 : inter / static_cast<double>(gold.size());
  const double pr = out.precision + out.recall;
  out.f1 = pr > 0.0 ? 2.0 * out.precision * out.recall / pr : 0.0;
  return out;
}

ClassificationReport prf1(const std::map<std::string, LabelSet>& predictions,
                          const std::map<std::string, LabelSet>& gold,
                          PrfMode mode, const PrfOptions& options) {
  check_same_keys(predictions, gold);
  ClassificationReport report;
  report.mode = mode;
  report.n_documents = predictions.size();
  if (predictions.empty()) return report;

  if (mode == PrfMode::example_based) {
    double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
    for (const auto& [id, pred] : predictions) {
      DocumentPrf doc = prf1_sets(pred, gold.at(id), options);
      doc.id = id;
      sum_p += doc.precision;
      sum_r += doc.recall;
      sum_f += doc.f1;
      report.per_document.push_back(std::move(doc));
    }
    const double n = static_cast<double>(report.n_documents);
    report.precision = sum_p / n;
    report.recall = sum_r / n;
    report.f1 = sum_f / n;
    return report;
  }

  std::size_t tp = 0, n_pred = 0, n_gold = 0;
  for (const auto& [id, pred] : predictions) {
    const LabelSet& g = gold.at(id);
    tp += intersection_size(pred, g);
    n_pred += pred.size();
    n_gold += g.size();
  }
  // Empty denominators: credit 1 only when the other side is empty too.
  report.precision = n_pred > 0 ? static_cast<double>(tp) /
                                      static_cast<double>(n_pred)
                                : (n_gold == 0 ? options.both_empty_value : 0.0);
  report.recall = n_gold > 0 ? static_cast<double>(tp) /
                                   static_cast<double>(n_gold)
                             : (n_pred == 0 ? options.both_empty_value : 0.0);
  const double pr = report.precision + report.recall;
  report.f1 = pr > 0.0 ? 2.0 * report.precision * report.recall / pr : 0.0;
  return report;
}

std::optional<double> spearman_rho(const std::vector<double>& ranks_a,
                                   const std::vector<double>& ranks_b) {
  if (ranks_a.size() != ranks_b.size()) {
    throw std::invalid_argument("spearman_rho: length mismatch");
  }
  const std::size_t n = ranks_a.size();
  if (n < 2) throw std::invalid_argument("spearman_rho: need at least 2 items");

  std::vector<double> ra = fractional_ranks(ranks_a);
  std::vector<double> rb = fractional_ranks(ranks_b);
  const double nd = static_cast<double>(n);
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += ra[i];
    mean_b += rb[i];
  }
  mean_a /= nd;
  mean_b /= nd;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = ra[i] - mean_a;
    const double db = rb[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) return std::nullopt;
  return cov / std::sqrt(var_a * var_b);
}

RankingReport mean_rank_correlation(
    const std::map<std::string, std::vector<double>>& predicted,
    const std::map<std::string, std::vector<double>>& gold) {
  check_same_keys(predicted, gold);
  RankingReport report;
  double sum = 0.0;
  for (const auto& [id, pred] : predicted) {
    const std::vector<double>& g = gold.at(id);
    if (pred.size() != g.size()) {
      throw DataError("document \"" + id + "\": rank list lengths differ");
    }
    if (pred.size() < 2) {
      report.n_excluded += 1;
      continue;
    }
    std::optional<double> rho = spearman_rho(pred, g);
    if (!rho) {
      report.n_excluded += 1;
      continue;
    }
    sum += *rho;
    report.per_document.push_back({id, *rho});
  }
  if (!report.per_document.empty()) {
    report.mean_rho = sum / static_cast<double>(report.per_document.size());
  }
  report.positive_correlation =
      !report.per_document.empty() &&
      report.mean_rho > kPositiveCorrelationThreshold;
  return report;
}

}  // namespace ortho
