// SPDX-License-Identifier: Apache-2.0
#pragma once

// Pairwise linear ranking SVM. Training minimizes
//   L(w) = 1/2 ||w||^2 + (C/P) * sum_pairs max(0, 1 - w.(x_pref - x_other))
// over all P preference pairs by seeded subgradient descent with step size
// 1/(1+t) per epoch and per-epoch pair shuffling. C is chosen on
// validation data by mean per-certificate Spearman rho.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ortho/corpus.hpp"
#include "ortho/features.hpp"

namespace ortho {

// Margin shortfalls smaller than this count as satisfied when reporting
// hinge violations: support pairs sit exactly on the unit margin at the
// optimum, and the solver only reaches it up to its stopping tolerance.
inline constexpr double kViolationSlack = 1e-6;

struct RankModel {
  std::vector<double> w;
  std::uint32_t dim = 0;
  double c_value = 0.0;

  void validate() const;
};

struct PreferencePair {
  std::string group_id;       // certificate id
  std::string preferred_id;   // class id of the preferred problem
  std::string other_id;
  FeatureVector x_preferred;  // smaller priority number, treated first
  FeatureVector x_other;
};

// Held-out certificate used for C selection: per-problem features plus the
// gold priority numbers.
struct RankValidationGroup {
  std::string group_id;
  std::vector<FeatureVector> items;
  std::vector<double> gold_ranks;
};

struct RankTrainConfig {
  std::vector<double> c_grid = {1, 5, 10, 50, 100, 500, 1000, 5000};
  std::uint32_t max_epochs = 200;
  double tolerance = 1e-6;  // relative objective change per epoch
  std::uint64_t rng_seed = 1;

  void validate() const;
};

struct RankGridEntry {
  double c = 0.0;
  std::uint32_t epochs_run = 0;
  double final_objective = 0.0;
  std::size_t train_violations = 0;  // margins below 1 - kViolationSlack
  double val_rho = 0.0;
  std::size_t val_excluded = 0;
  std::string status = "ok";  // or "diverged"
};

struct RankTrainResult {
  RankModel model;
  std::vector<RankGridEntry> grid;
  std::size_t selected_index = 0;
};

// One pair per unordered problem pair, oriented so x_preferred has the
// smaller priority number. Fewer than two problems yields an empty list.
std::vector<PreferencePair> build_pairs(
    const Certificate& cert,
    const std::function<FeatureVector(const Problem&)>& encode);

// Trains one model per C; selection maximizes mean validation rho, ties
// broken by fewer training violations, then by the smaller (earlier) C.
// Throws NumericError if every grid point diverges.
RankTrainResult train_rank(const std::vector<std::vector<PreferencePair>>& groups,
                           const std::vector<RankValidationGroup>& validation,
                           const RankTrainConfig& cfg);

// w . x
double score(const RankModel& model, const FeatureVector& x);

// 1-based priority ranks: rank 1 is the highest score; ties keep input
// order. The output is a permutation of 1..n.
std::vector<std::uint32_t> rank_problems(const RankModel& model,
                                         const std::vector<FeatureVector>& items);

// One line per pair: group_id, preferred id, other id, tab-separated.
void dump_pairs(std::ostream& os,
                const std::vector<std::vector<PreferencePair>>& groups);

void save_rank(const RankModel& model,
               const std::map<std::string, std::string>& meta,
               const std::string& path);

struct LoadedRank {
  RankModel model;
  std::map<std::string, std::string> meta;
};

LoadedRank load_rank(const std::string& path);

}  // namespace ortho
