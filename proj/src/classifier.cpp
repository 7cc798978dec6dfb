// SPDX-License-Identifier: Apache-2.0
#include "ortho/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ortho/errors.hpp"
#include "ortho/kernels.hpp"
#include "ortho/rng.hpp"
#include "serialize.hpp"

namespace ortho {
namespace {

constexpr double kProbEps = 1e-12;
constexpr const char* kMlpMagic = "ORTHO-MLP";

double sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double clamp_prob(double p) {
  return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

void check_input(const MlpModel& model, const FeatureVector& x) {
  if (x.dim() != model.input_dim) {
    throw std::invalid_argument("feature dimension " + std::to_string(x.dim()) +
                                " does not match model input_dim " +
                                std::to_string(model.input_dim));
  }
}

// Scratch space reused across examples.
struct Workspace {
  std::vector<double> z1, h, p, delta2, deltah;

  explicit Workspace(const MlpModel& m)
      : z1(m.hidden_dim),
        h(m.hidden_dim),
        p(m.n_labels),
        delta2(m.n_labels),
        deltah(m.hidden_dim) {}
};

void forward_into(const MlpModel& model, const FeatureVector& x,
                  Workspace& ws) {
  ws.z1 = model.b1;
  if (x.is_sparse()) {
    for (std::uint32_t i : x.indices()) {
      kernels::add(model.w1_row(i), ws.z1.data(), model.hidden_dim);
    }
  } else {
    kernels::gemv_t_acc(model.w1.data(), model.input_dim, model.hidden_dim,
                        x.values().data(), ws.z1.data());
  }
  ws.h = ws.z1;
  kernels::relu(ws.h.data(), model.hidden_dim);
  kernels::gemv(model.w2.data(), model.n_labels, model.hidden_dim,
                ws.h.data(), ws.p.data());
  for (std::uint32_t l = 0; l < model.n_labels; ++l) {
    ws.p[l] = clamp_prob(sigmoid(ws.p[l] + model.b2[l]));
  }
}

double bce_loss(const std::vector<double>& p,
                const std::vector<std::uint8_t>& y) {
  double sum = 0.0;
  for (std::size_t l = 0; l < p.size(); ++l) {
    sum -= y[l] ? std::log(p[l]) : std::log(1.0 - p[l]);
  }
  return sum;
}

void zero_like(const MlpModel& model, Gradients& g) {
  g.w1.assign(model.w1.size(), 0.0);
  g.b1.assign(model.b1.size(), 0.0);
  g.w2.assign(model.w2.size(), 0.0);
  g.b2.assign(model.b2.size(), 0.0);
}

// Adds one example's loss gradient into g and returns its loss.
double accumulate_example(const MlpModel& model, const FeatureVector& x,
                          const std::vector<std::uint8_t>& y, Gradients& g,
                          Workspace& ws) {
  forward_into(model, x, ws);
  const double example_loss = bce_loss(ws.p, y);

  const std::uint32_t H = model.hidden_dim;
  const std::uint32_t L = model.n_labels;
  for (std::uint32_t l = 0; l < L; ++l) {
    ws.delta2[l] = ws.p[l] - static_cast<double>(y[l]);
  }
  kernels::add(ws.delta2.data(), g.b2.data(), L);
  for (std::uint32_t l = 0; l < L; ++l) {
    kernels::axpy(ws.delta2[l], ws.h.data(), g.w2.data() + std::size_t(l) * H,
                  H);
  }
  std::fill(ws.deltah.begin(), ws.deltah.end(), 0.0);
  kernels::gemv_t_acc(model.w2.data(), L, H, ws.delta2.data(),
                      ws.deltah.data());
  kernels::relu_backward(ws.z1.data(), ws.deltah.data(), H);
  kernels::add(ws.deltah.data(), g.b1.data(), H);
  if (x.is_sparse()) {
    for (std::uint32_t i : x.indices()) {
      kernels::add(ws.deltah.data(), g.w1.data() + std::size_t(i) * H, H);
    }
  } else {
    const std::vector<double>& xv = x.values();
    for (std::uint32_t i = 0; i < model.input_dim; ++i) {
      if (xv[i] != 0.0) {
        kernels::axpy(xv[i], ws.deltah.data(),
                      g.w1.data() + std::size_t(i) * H, H);
      }
    }
  }
  return example_loss;
}

void check_examples(const std::vector<LabeledExample>& set,
                    std::uint32_t input_dim, std::size_t n_labels,
                    const char* what) {
  for (const LabeledExample& e : set) {
    if (e.x.dim() != input_dim) {
      throw DataError(std::string(what) + ": inconsistent feature dimension");
    }
    if (e.targets.size() != n_labels) {
      throw DataError(std::string(what) + ": target length does not match labels");
    }
  }
}

struct ValScore {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

ValScore validation_score(const MlpModel& model,
                          const std::vector<LabeledExample>& val_set,
                          double threshold, Workspace& ws) {
  double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
  for (const LabeledExample& e : val_set) {
    forward_into(model, e.x, ws);
    std::size_t tp = 0, n_pred = 0, n_gold = 0;
    for (std::uint32_t l = 0; l < model.n_labels; ++l) {
      const bool pred = ws.p[l] >= threshold;
      const bool gold = e.targets[l] != 0;
      n_pred += pred;
      n_gold += gold;
      tp += pred && gold;
    }
    double p, r, f;
    if (n_pred == 0 && n_gold == 0) {
      p = r = f = 1.0;
    } else {
      p = n_pred ? static_cast<double>(tp) / static_cast<double>(n_pred) : 0.0;
      r = n_gold ? static_cast<double>(tp) / static_cast<double>(n_gold) : 0.0;
      f = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
    sum_p += p;
    sum_r += r;
    sum_f += f;
  }
  const double n = static_cast<double>(val_set.size());
  return {sum_p / n, sum_r / n, sum_f / n};
}

struct Snapshot {
  std::vector<double> w1, b1, w2, b2;
};

// The clamped sigmoid keeps losses finite even from garbage weights, so
// divergence is detected on the parameters themselves.
bool finite_params(const MlpModel& m) {
  for (const auto* v : {&m.w1, &m.b1, &m.w2, &m.b2}) {
    for (double x : *v) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

}  // namespace

void MlpModel::validate() const {
  if (input_dim == 0 || hidden_dim == 0 || n_labels == 0) {
    throw DataError("model dimensions must be positive");
  }
  if (labels.size() != n_labels || label_index.size() != n_labels) {
    throw DataError("label list does not match n_labels");
  }
  for (std::uint32_t l = 0; l < n_labels; ++l) {
    auto it = label_index.find(labels[l]);
    if (it == label_index.end() || it->second != l) {
      throw DataError("label_index is not the inverse of the label list");
    }
  }
  if (w1.size() != std::size_t(input_dim) * hidden_dim ||
      b1.size() != hidden_dim ||
      w2.size() != std::size_t(n_labels) * hidden_dim ||
      b2.size() != n_labels) {
    throw DataError("weight array sizes do not match model dimensions");
  }
  for (const auto* v : {&w1, &b1, &w2, &b2}) {
    for (double x : *v) {
      if (!std::isfinite(x)) throw DataError("non-finite model weight");
    }
  }
  if (hidden_activation != "relu") {
    throw DataError("unsupported hidden activation \"" + hidden_activation +
                    "\"");
  }
}

void TrainConfig::validate() const {
  if (hidden_grid.empty()) {
    throw std::invalid_argument("hidden_grid must be nonempty");
  }
  for (std::uint32_t h : hidden_grid) {
    if (h == 0) throw std::invalid_argument("hidden sizes must be positive");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  if (max_epochs == 0) throw std::invalid_argument("max_epochs must be >= 1");
  if (patience == 0) throw std::invalid_argument("patience must be >= 1");
  if (!(decision_threshold > 0.0 && decision_threshold < 1.0)) {
    throw std::invalid_argument("decision_threshold must be in (0,1)");
  }
}

MlpModel init_mlp(std::uint32_t input_dim, std::uint32_t hidden_dim,
                  const std::vector<std::string>& labels, std::uint64_t seed) {
  if (input_dim == 0 || hidden_dim == 0 || labels.empty()) {
    throw std::invalid_argument("init_mlp: dimensions must be positive");
  }
  MlpModel m;
  m.input_dim = input_dim;
  m.hidden_dim = hidden_dim;
  m.n_labels = static_cast<std::uint32_t>(labels.size());
  m.labels = labels;
  for (std::uint32_t l = 0; l < m.n_labels; ++l) {
    if (!m.label_index.emplace(labels[l], l).second) {
      throw std::invalid_argument("init_mlp: duplicate label \"" + labels[l] +
                                  "\"");
    }
  }
  m.w1.resize(std::size_t(input_dim) * hidden_dim);
  m.b1.assign(hidden_dim, 0.0);
  m.w2.resize(std::size_t(m.n_labels) * hidden_dim);
  m.b2.assign(m.n_labels, 0.0);

  Rng rng(seed);
  auto fill_glorot = [&rng](std::vector<double>& w, std::uint32_t fan_in,
                            std::uint32_t fan_out) {
    const double bound = std::sqrt(6.0 / (double(fan_in) + double(fan_out)));
    for (double& x : w) x = (2.0 * rng.uniform() - 1.0) * bound;
  };
  fill_glorot(m.w1, input_dim, hidden_dim);
  fill_glorot(m.w2, hidden_dim, m.n_labels);
  return m;
}

std::vector<double> forward(const MlpModel& model, const FeatureVector& x) {
  check_input(model, x);
  Workspace ws(model);
  forward_into(model, x, ws);
  return ws.p;
}

double loss(const MlpModel& model, const FeatureVector& x,
            const std::vector<std::uint8_t>& y) {
  check_input(model, x);
  if (y.size() != model.n_labels) {
    throw std::invalid_argument("label vector length mismatch");
  }
  Workspace ws(model);
  forward_into(model, x, ws);
  return bce_loss(ws.p, y);
}

Gradients gradients(const MlpModel& model,
                    const std::vector<LabeledExample>& batch) {
  if (batch.empty()) throw std::invalid_argument("gradients: empty batch");
  check_examples(batch, model.input_dim, model.n_labels, "batch");
  Gradients g;
  zero_like(model, g);
  Workspace ws(model);
  for (const LabeledExample& e : batch) {
    accumulate_example(model, e.x, e.targets, g, ws);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  kernels::scal(inv, g.w1.data(), g.w1.size());
  kernels::scal(inv, g.b1.data(), g.b1.size());
  kernels::scal(inv, g.w2.data(), g.w2.size());
  kernels::scal(inv, g.b2.data(), g.b2.size());
  return g;
}

ClassifierTrainResult train(const std::vector<LabeledExample>& train_set,
                            const std::vector<LabeledExample>& val_set,
                            const std::vector<std::string>& labels,
                            const TrainConfig& cfg) {
  cfg.validate();
  if (train_set.empty() || val_set.empty()) {
    throw DataError("training and validation sets must be nonempty");
  }
  if (labels.empty()) throw DataError("label list must be nonempty");
  const std::uint32_t input_dim = train_set.front().x.dim();
  check_examples(train_set, input_dim, labels.size(), "train set");
  check_examples(val_set, input_dim, labels.size(), "validation set");

  ClassifierTrainResult result;
  bool have_best = false;
  double best_f1 = -1.0;
  MlpModel best_model;

  for (std::size_t gi = 0; gi < cfg.hidden_grid.size(); ++gi) {
    const std::uint32_t hidden = cfg.hidden_grid[gi];
    MlpModel model = init_mlp(input_dim, hidden, labels,
                              mix_seed(cfg.rng_seed, 2 * gi));
    Rng shuffle_rng(mix_seed(cfg.rng_seed, 2 * gi + 1));
    Workspace ws(model);
    Gradients g;
    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    ClassifierGridEntry entry;
    entry.hidden_dim = hidden;
    Snapshot best;
    double grid_best_f1 = -1.0;
    std::uint32_t stale = 0;
    bool diverged = false;

    for (std::uint32_t epoch = 0; epoch < cfg.max_epochs && !diverged;
         ++epoch) {
      shuffle_rng.shuffle(order);
      for (std::size_t start = 0; start < order.size();
           start += cfg.batch_size) {
        const std::size_t stop =
            std::min(order.size(), start + cfg.batch_size);
        zero_like(model, g);
        double batch_loss = 0.0;
        for (std::size_t k = start; k < stop; ++k) {
          const LabeledExample& e = train_set[order[k]];
          batch_loss += accumulate_example(model, e.x, e.targets, g, ws);
        }
        if (!std::isfinite(batch_loss)) {
          diverged = true;
          break;
        }
        const double step =
            -cfg.learning_rate / static_cast<double>(stop - start);
        kernels::axpy(step, g.w1.data(), model.w1.data(), model.w1.size());
        kernels::axpy(step, g.b1.data(), model.b1.data(), model.b1.size());
        kernels::axpy(step, g.w2.data(), model.w2.data(), model.w2.size());
        kernels::axpy(step, g.b2.data(), model.b2.data(), model.b2.size());
      }
      if (!diverged && !finite_params(model)) diverged = true;
      if (diverged) break;
      entry.epochs_run = epoch + 1;
      ValScore score =
          validation_score(model, val_set, cfg.decision_threshold, ws);
      if (score.f1 > grid_best_f1) {
        grid_best_f1 = score.f1;
        best = {model.w1, model.b1, model.w2, model.b2};
        entry.val_precision = score.precision;
        entry.val_recall = score.recall;
        entry.val_f1 = score.f1;
        stale = 0;
      } else {
        ++stale;
      }
      if (stale >= cfg.patience) break;
    }

    if (diverged) {
      entry.status = "diverged";
      entry.val_precision = entry.val_recall = entry.val_f1 = 0.0;
      result.grid.push_back(entry);
      continue;
    }
    model.w1 = std::move(best.w1);
    model.b1 = std::move(best.b1);
    model.w2 = std::move(best.w2);
    model.b2 = std::move(best.b2);
    result.grid.push_back(entry);
    if (entry.val_f1 > best_f1) {
      best_f1 = entry.val_f1;
      best_model = std::move(model);
      result.selected_index = result.grid.size() - 1;
      have_best = true;
    }
  }

  if (!have_best) {
    throw NumericError("training diverged for every hidden size in the grid");
  }
  result.model = std::move(best_model);
  return result;
}

std::set<std::string> predict_labels(const MlpModel& model,
                                     const FeatureVector& x,
                                     double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("threshold must be in (0,1)");
  }
  check_input(model, x);
  Workspace ws(model);
  forward_into(model, x, ws);
  std::set<std::string> out;
  for (std::uint32_t l = 0; l < model.n_labels; ++l) {
    if (ws.p[l] >= threshold) out.insert(model.labels[l]);
  }
  return out;
}

void save_mlp(const MlpModel& model,
              const std::map<std::string, std::string>& meta,
              const std::string& path) {
  model.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path);
  detail::write_magic(os, kMlpMagic, 1);
  detail::write_kv(os, "meta", std::to_string(meta.size()));
  for (const auto& [key, value] : meta) {
    if (key.empty() || key.find_first_of(" \t\n") != std::string::npos ||
        value.find('\n') != std::string::npos) {
      throw DataError("invalid metadata entry \"" + key + "\"");
    }
    detail::write_kv(os, key, value);
  }
  detail::write_kv(os, "input_dim", std::to_string(model.input_dim));
  detail::write_kv(os, "hidden_dim", std::to_string(model.hidden_dim));
  detail::write_kv(os, "n_labels", std::to_string(model.n_labels));
  detail::write_kv(os, "activation", model.hidden_activation);
  os << "labels\n";
  for (const std::string& label : model.labels) {
    if (label.empty() || label.find('\n') != std::string::npos) {
      throw DataError("label cannot be empty or contain newlines");
    }
    os << label << '\n';
  }
  // w1 is written in the conventional hidden x input layout.
  os << "w1\n";
  std::vector<double> row(model.input_dim);
  for (std::uint32_t j = 0; j < model.hidden_dim; ++j) {
    for (std::uint32_t i = 0; i < model.input_dim; ++i) {
      row[i] = model.w1[std::size_t(i) * model.hidden_dim + j];
    }
    detail::write_double_row(os, row.data(), row.size());
  }
  os << "b1\n";
  detail::write_double_row(os, model.b1.data(), model.b1.size());
  os << "w2\n";
  for (std::uint32_t l = 0; l < model.n_labels; ++l) {
    detail::write_double_row(os, model.w2_row(l), model.hidden_dim);
  }
  os << "b2\n";
  detail::write_double_row(os, model.b2.data(), model.b2.size());
  if (!os) throw DataError("write failed: " + path);
}

LoadedMlp load_mlp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot read " + path);
  const int version = detail::read_magic(is, kMlpMagic, path);
  if (version != 1) {
    throw DataError(path + ": unsupported model version " +
                    std::to_string(version));
  }
  LoadedMlp out;
  const std::uint64_t n_meta = detail::expect_kv_u64(is, "meta", path);
  for (std::uint64_t i = 0; i < n_meta; ++i) {
    std::string line;
    if (!std::getline(is, line)) {
      throw DataError(path + ": truncated metadata");
    }
    auto space = line.find(' ');
    if (space == std::string::npos || space == 0) {
      throw DataError(path + ": malformed metadata line \"" + line + "\"");
    }
    out.meta[line.substr(0, space)] = line.substr(space + 1);
  }
  MlpModel& m = out.model;
  m.input_dim =
      static_cast<std::uint32_t>(detail::expect_kv_u64(is, "input_dim", path));
  m.hidden_dim =
      static_cast<std::uint32_t>(detail::expect_kv_u64(is, "hidden_dim", path));
  m.n_labels =
      static_cast<std::uint32_t>(detail::expect_kv_u64(is, "n_labels", path));
  m.hidden_activation = detail::expect_kv(is, "activation", path);
  std::string line;
  if (!std::getline(is, line) || line != "labels") {
    throw DataError(path + ": expected \"labels\" section");
  }
  m.labels.reserve(m.n_labels);
  for (std::uint32_t l = 0; l < m.n_labels; ++l) {
    if (!std::getline(is, line) || line.empty()) {
      throw DataError(path + ": truncated label list");
    }
    if (!m.label_index.emplace(line, l).second) {
      throw DataError(path + ": duplicate label \"" + line + "\"");
    }
    m.labels.push_back(line);
  }
  auto expect_section = [&](const char* name) {
    if (!std::getline(is, line) || line != name) {
      throw DataError(path + ": expected \"" + name + "\" section");
    }
  };
  expect_section("w1");
  m.w1.resize(std::size_t(m.input_dim) * m.hidden_dim);
  for (std::uint32_t j = 0; j < m.hidden_dim; ++j) {
    std::vector<double> row = detail::read_double_row(is, m.input_dim, path);
    for (std::uint32_t i = 0; i < m.input_dim; ++i) {
      m.w1[std::size_t(i) * m.hidden_dim + j] = row[i];
    }
  }
  expect_section("b1");
  m.b1 = detail::read_double_row(is, m.hidden_dim, path);
  expect_section("w2");
  m.w2.resize(std::size_t(m.n_labels) * m.hidden_dim);
  for (std::uint32_t l = 0; l < m.n_labels; ++l) {
    std::vector<double> row = detail::read_double_row(is, m.hidden_dim, path);
    std::copy(row.begin(), row.end(), m.w2.begin() + std::size_t(l) * m.hidden_dim);
  }
  expect_section("b2");
  m.b2 = detail::read_double_row(is, m.n_labels, path);
  try {
    m.validate();
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
  return out;
}

}  // namespace ortho
