// SPDX-License-Identifier: Apache-2.0
#include "ortho/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "ortho/errors.hpp"
#include "ortho/kernels.hpp"
#include "ortho/metrics.hpp"
#include "ortho/rng.hpp"
#include "serialize.hpp"

namespace ortho {
namespace {

constexpr const char* kRankMagic = "ORTHO-RANK";

std::vector<double> to_dense(const FeatureVector& x) {
  if (!x.is_sparse()) return x.values();
  std::vector<double> out(x.dim(), 0.0);
  for (std::uint32_t i : x.indices()) out[i] = 1.0;
  return out;
}

// Precomputed difference x_preferred - x_other. Two binary sparse inputs
// reduce to the index sets unique to each side; anything else is dense.
struct Diff {
  bool dense = false;
  std::vector<std::uint32_t> plus, minus;
  std::vector<double> dx;
};

Diff make_diff(const FeatureVector& pref, const FeatureVector& other) {
  Diff d;
  if (pref.is_sparse() && other.is_sparse()) {
    std::set_difference(pref.indices().begin(), pref.indices().end(),
                        other.indices().begin(), other.indices().end(),
                        std::back_inserter(d.plus));
    std::set_difference(other.indices().begin(), other.indices().end(),
                        pref.indices().begin(), pref.indices().end(),
                        std::back_inserter(d.minus));
    return d;
  }
  d.dense = true;
  d.dx = to_dense(pref);
  std::vector<double> o = to_dense(other);
  for (std::size_t i = 0; i < d.dx.size(); ++i) d.dx[i] -= o[i];
  return d;
}

double diff_margin(const std::vector<double>& w, const Diff& d) {
  if (d.dense) return kernels::dot(w.data(), d.dx.data(), d.dx.size());
  return kernels::sparse_dot(w.data(), d.plus.data(), d.plus.size()) -
         kernels::sparse_dot(w.data(), d.minus.data(), d.minus.size());
}

void diff_apply(double alpha, const Diff& d, std::vector<double>& w) {
  if (d.dense) {
    kernels::axpy(alpha, d.dx.data(), w.data(), w.size());
    return;
  }
  for (std::uint32_t i : d.plus) w[i] += alpha;
  for (std::uint32_t i : d.minus) w[i] -= alpha;
}

double objective(const std::vector<double>& w, const std::vector<Diff>& diffs,
                 double c) {
  const double p = static_cast<double>(diffs.size());
  double hinge = 0.0;
  for (const Diff& d : diffs) {
    hinge += std::max(0.0, 1.0 - diff_margin(w, d));
  }
  return 0.5 * kernels::dot(w.data(), w.data(), w.size()) + c / p * hinge;
}

std::size_t count_violations(const std::vector<double>& w,
                             const std::vector<Diff>& diffs) {
  std::size_t n = 0;
  for (const Diff& d : diffs) {
    if (diff_margin(w, d) < 1.0 - kViolationSlack) ++n;
  }
  return n;
}

// Mean Spearman rho of the induced ranking against gold priorities over
// the validation groups; groups with < 2 items or undefined rho are
// skipped and counted in *excluded.
double mean_validation_rho(const std::vector<double>& w,
                           const std::vector<RankValidationGroup>& validation,
                           std::size_t* excluded) {
  double sum = 0.0;
  std::size_t used = 0;
  *excluded = 0;
  RankModel probe;
  probe.w = w;
  probe.dim = static_cast<std::uint32_t>(w.size());
  probe.c_value = 1.0;
  for (const RankValidationGroup& group : validation) {
    if (group.items.size() < 2) {
      ++*excluded;
      continue;
    }
    std::vector<std::uint32_t> ranks = rank_problems(probe, group.items);
    std::vector<double> predicted(ranks.begin(), ranks.end());
    auto rho = spearman_rho(predicted, group.gold_ranks);
    if (!rho) {
      ++*excluded;
      continue;
    }
    sum += *rho;
    ++used;
  }
  return used ? sum / static_cast<double>(used) : 0.0;
}

}  // namespace

void RankModel::validate() const {
  if (dim == 0 || w.size() != dim) {
    throw DataError("rank model dimension mismatch");
  }
  for (double x : w) {
    if (!std::isfinite(x)) throw DataError("non-finite rank model weight");
  }
  if (!std::isfinite(c_value) || c_value <= 0.0) {
    throw DataError("rank model c_value must be positive");
  }
}

void RankTrainConfig::validate() const {
  if (c_grid.empty()) throw std::invalid_argument("c_grid must be nonempty");
  for (double c : c_grid) {
    if (!(c > 0.0)) throw std::invalid_argument("all C values must be positive");
  }
  if (max_epochs == 0) throw std::invalid_argument("max_epochs must be >= 1");
  if (!(tolerance >= 0.0)) {
    throw std::invalid_argument("tolerance must be nonnegative");
  }
}

std::vector<PreferencePair> build_pairs(
    const Certificate& cert,
    const std::function<FeatureVector(const Problem&)>& encode) {
  const std::size_t n = cert.problems.size();
  if (n < 2) return {};
  std::set<std::uint32_t> priorities;
  for (const Problem& p : cert.problems) {
    if (!priorities.insert(p.priority).second) {
      throw DataError("certificate " + cert.id + ": duplicate priority " +
                      std::to_string(p.priority));
    }
  }
  std::vector<FeatureVector> encoded;
  encoded.reserve(n);
  for (const Problem& p : cert.problems) {
    encoded.push_back(encode(p));
    if (encoded.back().dim() != encoded.front().dim()) {
      throw DataError("certificate " + cert.id +
                      ": inconsistent feature dimensions");
    }
  }
  std::vector<PreferencePair> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool i_first = cert.problems[i].priority < cert.problems[j].priority;
      const std::size_t a = i_first ? i : j;
      const std::size_t b = i_first ? j : i;
      pairs.push_back({cert.id, cert.problems[a].class_id,
                       cert.problems[b].class_id, encoded[a], encoded[b]});
    }
  }
  return pairs;
}

RankTrainResult train_rank(const std::vector<std::vector<PreferencePair>>& groups,
                           const std::vector<RankValidationGroup>& validation,
                           const RankTrainConfig& cfg) {
  cfg.validate();
  std::vector<Diff> diffs;
  std::uint32_t dim = 0;
  for (const auto& group : groups) {
    for (const PreferencePair& pair : group) {
      if (pair.x_preferred.dim() != pair.x_other.dim()) {
        throw DataError("pair in group \"" + pair.group_id +
                        "\" mixes feature dimensions");
      }
      if (dim == 0) {
        dim = pair.x_preferred.dim();
      } else if (pair.x_preferred.dim() != dim) {
        throw DataError("inconsistent feature dimensions across pairs");
      }
      diffs.push_back(make_diff(pair.x_preferred, pair.x_other));
    }
  }
  if (diffs.empty()) throw DataError("no preference pairs to train on");
  if (dim == 0) throw DataError("zero-dimensional ranking features");
  for (const RankValidationGroup& group : validation) {
    if (group.items.size() != group.gold_ranks.size()) {
      throw DataError("validation group \"" + group.group_id +
                      "\": item and rank counts differ");
    }
    for (const FeatureVector& x : group.items) {
      if (x.dim() != dim) {
        throw DataError("validation group \"" + group.group_id +
                        "\": feature dimension mismatch");
      }
    }
  }

  const double pd = static_cast<double>(diffs.size());
  RankTrainResult result;
  std::vector<std::vector<double>> weights(cfg.c_grid.size());
  std::vector<std::size_t> order(diffs.size());

  for (std::size_t ci = 0; ci < cfg.c_grid.size(); ++ci) {
    const double c = cfg.c_grid[ci];
    std::vector<double>& w = weights[ci];
    w.assign(dim, 0.0);
    Rng rng(mix_seed(cfg.rng_seed, ci));
    std::iota(order.begin(), order.end(), std::size_t{0});

    RankGridEntry entry;
    entry.c = c;
    double prev_obj = objective(w, diffs, c);
    for (std::uint32_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
      const double eta = 1.0 / (1.0 + static_cast<double>(epoch));
      rng.shuffle(order);
      for (std::size_t k : order) {
        const Diff& d = diffs[k];
        const double margin = diff_margin(w, d);
        kernels::scal(1.0 - eta / pd, w.data(), w.size());
        if (margin < 1.0) diff_apply(eta * c / pd, d, w);
      }
      const double obj = objective(w, diffs, c);
      entry.epochs_run = epoch + 1;
      if (!std::isfinite(obj)) {
        entry.status = "diverged";
        break;
      }
      const bool converged =
          std::abs(prev_obj - obj) <=
          cfg.tolerance * std::max(1.0, std::abs(prev_obj));
      prev_obj = obj;
      if (converged) break;
    }
    entry.final_objective = prev_obj;
    if (entry.status == "ok") {
      entry.train_violations = count_violations(w, diffs);
      entry.val_rho = mean_validation_rho(w, validation, &entry.val_excluded);
    }
    result.grid.push_back(std::move(entry));
  }

  // Highest validation rho wins; ties prefer fewer training violations,
  // then the earlier (smaller) C.
  bool have_best = false;
  std::size_t best = 0;
  for (std::size_t ci = 0; ci < result.grid.size(); ++ci) {
    const RankGridEntry& e = result.grid[ci];
    if (e.status != "ok") continue;
    if (!have_best) {
      best = ci;
      have_best = true;
      continue;
    }
    const RankGridEntry& b = result.grid[best];
    if (e.val_rho > b.val_rho ||
        (e.val_rho == b.val_rho && e.train_violations < b.train_violations)) {
      best = ci;
    }
  }
  if (!have_best) {
    throw NumericError("ranking objective diverged for every C in the grid");
  }
  result.selected_index = best;
  result.model.w = std::move(weights[best]);
  result.model.dim = dim;
  result.model.c_value = cfg.c_grid[best];
  return result;
}

double score(const RankModel& model, const FeatureVector& x) {
  if (x.dim() != model.dim) {
    throw std::invalid_argument("feature dimension " + std::to_string(x.dim()) +
                                " does not match rank model dim " +
                                std::to_string(model.dim));
  }
  if (x.is_sparse()) {
    return kernels::sparse_dot(model.w.data(), x.indices().data(),
                               x.indices().size());
  }
  return kernels::dot(model.w.data(), x.values().data(), x.values().size());
}

std::vector<std::uint32_t> rank_problems(const RankModel& model,
                                         const std::vector<FeatureVector>& items) {
  if (items.empty()) {
    throw std::invalid_argument("rank_problems: empty item list");
  }
  std::vector<double> scores;
  scores.reserve(items.size());
  for (const FeatureVector& x : items) scores.push_back(score(model, x));
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<std::uint32_t> ranks(items.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    ranks[order[pos]] = static_cast<std::uint32_t>(pos + 1);
  }
  return ranks;
}

void dump_pairs(std::ostream& os,
                const std::vector<std::vector<PreferencePair>>& groups) {
  for (const auto& group : groups) {
    for (const PreferencePair& pair : group) {
      os << pair.group_id << '\t' << pair.preferred_id << '\t'
         << pair.other_id << '\n';
    }
  }
}

void save_rank(const RankModel& model,
               const std::map<std::string, std::string>& meta,
               const std::string& path) {
  model.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path);
  detail::write_magic(os, kRankMagic, 1);
  detail::write_kv(os, "meta", std::to_string(meta.size()));
  for (const auto& [key, value] : meta) {
    if (key.empty() || key.find_first_of(" \t\n") != std::string::npos ||
        value.find('\n') != std::string::npos) {
      throw DataError("invalid metadata entry \"" + key + "\"");
    }
    detail::write_kv(os, key, value);
  }
  detail::write_kv(os, "dim", std::to_string(model.dim));
  detail::write_kv(os, "c", detail::format_double(model.c_value));
  os << "w\n";
  detail::write_double_row(os, model.w.data(), model.w.size());
  if (!os) throw DataError("write failed: " + path);
}

LoadedRank load_rank(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot read " + path);
  const int version = detail::read_magic(is, kRankMagic, path);
  if (version != 1) {
    throw DataError(path + ": unsupported model version " +
                    std::to_string(version));
  }
  LoadedRank out;
  const std::uint64_t n_meta = detail::expect_kv_u64(is, "meta", path);
  for (std::uint64_t i = 0; i < n_meta; ++i) {
    std::string line;
    if (!std::getline(is, line)) throw DataError(path + ": truncated metadata");
    auto space = line.find(' ');
    if (space == std::string::npos || space == 0) {
      throw DataError(path + ": malformed metadata line \"" + line + "\"");
    }
    out.meta[line.substr(0, space)] = line.substr(space + 1);
  }
  out.model.dim =
      static_cast<std::uint32_t>(detail::expect_kv_u64(is, "dim", path));
  out.model.c_value = detail::expect_kv_double(is, "c", path);
  std::string line;
  if (!std::getline(is, line) || line != "w") {
    throw DataError(path + ": expected \"w\" section");
  }
  out.model.w = detail::read_double_row(is, out.model.dim, path);
  try {
    out.model.validate();
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
  return out;
}

}  // namespace ortho
