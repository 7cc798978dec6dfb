// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite for the two-step planning pipeline. Each criterion
// prints exactly one PASS/FAIL line; the process exits 0 only if all nine
// pass. Run with the orthoplan binary path as the only argument.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ortho/classifier.hpp"
#include "ortho/corpus.hpp"
#include "ortho/errors.hpp"
#include "ortho/features.hpp"
#include "ortho/metrics.hpp"
#include "ortho/ranker.hpp"
#include "ortho/rng.hpp"
#include "ortho/synth.hpp"
#include "cli_runner.hpp"
#include "temp_dir.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

// ---------------------------------------------------------------------- A1

// Analytic gradients against central finite differences on 20 seeded
// random 10-8-5 models. Tolerance: relative error < 1e-4 with the
// denominator floored at 1e-4 (an absolute bound of 1e-8 for tiny
// components). Runtime bound 5 s.
Outcome a1_gradients() {
  const Clock::time_point t0 = Clock::now();
  const std::vector<std::string> labels = {"l0", "l1", "l2", "l3", "l4"};
  const double eps = 1e-5;
  double max_rel = 0.0;

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ortho::MlpModel model = ortho::init_mlp(10, 8, labels, seed);
    ortho::Rng rng(seed + 1000);
    for (double& b : model.b1) b = 0.3 * rng.normal();
    for (double& b : model.b2) b = 0.3 * rng.normal();

    std::vector<ortho::LabeledExample> batch;
    for (int e = 0; e < 2; ++e) {
      std::vector<double> x(10);
      for (double& v : x) v = rng.normal();
      std::vector<std::uint8_t> y(5);
      for (auto& t : y) t = static_cast<std::uint8_t>(rng.below(2));
      batch.push_back({ortho::FeatureVector::dense(x), y});
    }

    const ortho::Gradients grads = ortho::gradients(model, batch);
    auto batch_loss = [&](const ortho::MlpModel& m) {
      double total = 0.0;
      for (const auto& ex : batch) total += ortho::loss(m, ex.x, ex.targets);
      return total / static_cast<double>(batch.size());
    };
    auto probe = [&](std::vector<double> ortho::MlpModel::* field,
                     const std::vector<double>& grad) {
      for (std::size_t i = 0; i < grad.size(); ++i) {
        ortho::MlpModel plus = model;
        (plus.*field)[i] += eps;
        ortho::MlpModel minus = model;
        (minus.*field)[i] -= eps;
        const double fd = (batch_loss(plus) - batch_loss(minus)) / (2 * eps);
        const double denom =
            std::max({std::abs(fd), std::abs(grad[i]), 1e-4});
        max_rel = std::max(max_rel, std::abs(fd - grad[i]) / denom);
      }
    };
    probe(&ortho::MlpModel::w1, grads.w1);
    probe(&ortho::MlpModel::b1, grads.b1);
    probe(&ortho::MlpModel::w2, grads.w2);
    probe(&ortho::MlpModel::b2, grads.b2);
  }

  const double elapsed = seconds_since(t0);
  Outcome out;
  out.pass = max_rel < 1e-4 && elapsed < 5.0;
  out.detail = "max relative error " + fmt("%.2e", max_rel) +
               " over 20 models (bound 1e-4), " + fmt("%.2f", elapsed) +
               " s (bound 5 s)";
  return out;
}

// ---------------------------------------------------------------------- A2

// End-to-end classification oracle through the CLI: zero-noise keyword
// corpus must reach held-out example-based F1 >= 0.95, and label noise 0.3
// must strictly lower it. Runtime bound 2 min.
Outcome a2_end_to_end(const std::string& cli) {
  const Clock::time_point t0 = Clock::now();
  TempDir dir;
  auto run_chain = [&](const std::string& tag, const std::string& noise,
                       double* f1) -> std::string {
    const std::string corpus = dir.path(tag + ".jsonl");
    const std::string catalog = dir.path(tag + "_catalog.jsonl");
    CmdResult gen = run_cli(cli,
                            "gen-synth --out " + corpus + " --catalog-out " +
                                catalog +
                                " --n 990 --labels 20 --keywords 2 --mean 8 "
                                "--noise " + noise + " --seed 7",
                            dir);
    if (gen.exit_code != 0) return "gen-synth failed: " + first_line(gen.err);

    const std::string model = dir.path(tag + ".model");
    const std::string vocab = dir.path(tag + ".vocab");
    const std::string report = dir.path(tag + "_train.json");
    CmdResult train = run_cli(cli,
                              "train-classifier --corpus " + corpus +
                                  " --model-out " + model + " --vocab-out " +
                                  vocab + " --report-out " + report +
                                  " --hidden-grid 32,64",
                              dir);
    if (train.exit_code != 0) {
      return "train-classifier failed: " + first_line(train.err);
    }
    json train_rep = json::parse(read_file(report));
    if (train_rep["split"]["train"] != 810 ||
        train_rep["split"]["validation"] != 90 ||
        train_rep["split"]["test"] != 90) {
      return "split is not 810/90/90";
    }

    const std::string eval_report = dir.path(tag + "_eval.json");
    CmdResult eval = run_cli(cli,
                             "evaluate --corpus " + corpus + " --classifier " +
                                 model + " --vocab " + vocab +
                                 " --on test --report-out " + eval_report,
                             dir);
    if (eval.exit_code != 0) return "evaluate failed: " + first_line(eval.err);
    *f1 = json::parse(read_file(eval_report))["classification"]["f1"]
              .get<double>();
    return "";
  };

  Outcome out;
  double f1_clean = 0.0, f1_noisy = 0.0;
  std::string err = run_chain("clean", "0", &f1_clean);
  if (err.empty()) err = run_chain("noisy", "0.3", &f1_noisy);
  const double elapsed = seconds_since(t0);
  if (!err.empty()) {
    out.detail = err;
    return out;
  }
  out.pass = f1_clean >= 0.95 && f1_noisy < f1_clean && elapsed < 120.0;
  out.detail = "clean test F1 " + fmt("%.4f", f1_clean) +
               " (bound 0.95), noisy " + fmt("%.4f", f1_noisy) +
               " (must be lower), " + fmt("%.1f", elapsed) + " s (bound 120)";
  return out;
}

// ---------------------------------------------------------------------- A3

// Vocabulary threshold, checked exhaustively: token i of 10 occurs exactly
// i times; for every min_count the vocabulary holds exactly the tokens at
// or above it.
Outcome a3_vocabulary_threshold() {
  auto token = [](int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "tok%02d", i);
    return std::string(buf);
  };
  // Document j (1-based) holds one occurrence of every token with i >= j,
  // so token i occurs i times corpus-wide.
  std::vector<std::vector<std::string>> docs;
  for (int j = 1; j <= 10; ++j) {
    std::vector<std::string> doc;
    for (int i = j; i <= 10; ++i) doc.push_back(token(i));
    docs.push_back(doc);
  }

  for (std::uint32_t mc = 1; mc <= 11; ++mc) {
    ortho::Vocabulary vocab = ortho::build_vocabulary(docs, mc);
    for (int i = 1; i <= 10; ++i) {
      const bool want = static_cast<std::uint32_t>(i) >= mc;
      if (vocab.token_to_index.count(token(i)) != (want ? 1u : 0u)) {
        return {false, "min_count " + std::to_string(mc) + " mishandles " +
                           token(i)};
      }
    }
  }
  ortho::Vocabulary at5 = ortho::build_vocabulary(docs, 5);
  if (at5.size() != 6) {
    return {false, "min_count 5 kept " + std::to_string(at5.size()) +
                       " tokens, want 6"};
  }
  return {true,
          "all 11 thresholds keep exactly the tokens at or above min_count"};
}

// ---------------------------------------------------------------------- A4

// Ranking oracle: preferences from a fixed 6-dimensional w* with item
// scores spaced exactly one margin unit apart. The model selected over the
// full default C grid must report zero training hinge violations and reach
// mean Spearman rho >= 0.9 on held-out groups. Runtime bound 1 min.
Outcome a4_ranking_oracle() {
  const Clock::time_point t0 = Clock::now();
  const std::vector<double> wstar = {2.0, -1.0, 0.5, 1.5, -0.5, 1.0};
  const double wstar_sq =
      std::inner_product(wstar.begin(), wstar.end(), wstar.begin(), 0.0);
  ortho::Rng rng(909);

  // Five items per group, shifted along w* so the gold scores are
  // 0, -1, -2, -3, -4: every adjacent pair has margin exactly 1 under w*.
  auto make_items = [&]() {
    std::vector<ortho::FeatureVector> items;
    for (int k = 0; k < 5; ++k) {
      std::vector<double> x(6);
      for (double& v : x) v = rng.normal();
      const double s =
          std::inner_product(wstar.begin(), wstar.end(), x.begin(), 0.0);
      const double shift = (-static_cast<double>(k) - s) / wstar_sq;
      for (std::size_t d = 0; d < 6; ++d) x[d] += shift * wstar[d];
      items.push_back(ortho::FeatureVector::dense(x));
    }
    return items;
  };

  std::vector<std::vector<ortho::PreferencePair>> train_groups;
  for (int g = 0; g < 40; ++g) {
    std::vector<ortho::FeatureVector> items = make_items();
    std::vector<ortho::PreferencePair> pairs;
    const std::string gid = "train" + std::to_string(g);
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        pairs.push_back({gid, "p" + std::to_string(i), "p" + std::to_string(j),
                         items[i], items[j]});
      }
    }
    train_groups.push_back(std::move(pairs));
  }
  auto make_groups = [&](const char* prefix) {
    std::vector<ortho::RankValidationGroup> groups;
    for (int g = 0; g < 10; ++g) {
      groups.push_back({prefix + std::to_string(g), make_items(),
                        {1, 2, 3, 4, 5}});
    }
    return groups;
  };
  std::vector<ortho::RankValidationGroup> val_groups = make_groups("val");
  std::vector<ortho::RankValidationGroup> test_groups = make_groups("test");

  ortho::RankTrainConfig cfg;  // full default C grid of 8 values
  cfg.max_epochs = 300;
  cfg.tolerance = 1e-10;
  ortho::RankTrainResult result =
      ortho::train_rank(train_groups, val_groups, cfg);
  const ortho::RankGridEntry& sel = result.grid[result.selected_index];

  std::map<std::string, std::vector<double>> pred, gold;
  for (const ortho::RankValidationGroup& group : test_groups) {
    std::vector<std::uint32_t> ranks =
        ortho::rank_problems(result.model, group.items);
    pred[group.group_id] = std::vector<double>(ranks.begin(), ranks.end());
    gold[group.group_id] = group.gold_ranks;
  }
  const ortho::RankingReport report = ortho::mean_rank_correlation(pred, gold);

  const double elapsed = seconds_since(t0);
  Outcome out;
  out.pass = result.grid.size() == 8 && sel.status == "ok" &&
             sel.train_violations == 0 && report.mean_rho >= 0.9 &&
             elapsed < 60.0;
  out.detail = "selected C=" + fmt("%g", sel.c) + ", " +
               std::to_string(sel.train_violations) +
               " training violations (bound 0), held-out mean rho " +
               fmt("%.4f", report.mean_rho) + " (bound 0.9), " +
               fmt("%.1f", elapsed) + " s (bound 60)";
  return out;
}

// ---------------------------------------------------------------------- A5

// Spearman correctness: closed form on every permutation for n <= 6, and
// an independent counting-method oracle on 100 seeded tied inputs, both at
// tolerance 1e-12.
std::optional<double> spearman_oracle(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  const std::size_t n = a.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<long double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t less = 0, equal = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (v[j] < v[i]) ++less;
        if (v[j] == v[i]) ++equal;
      }
      r[i] = static_cast<long double>(less) + (equal + 1.0L) / 2.0L;
    }
    return r;
  };
  const std::vector<long double> ra = ranks(a), rb = ranks(b);
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  long double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0 || vb == 0) return std::nullopt;
  return static_cast<double>(cov / std::sqrt(va * vb));
}

Outcome a5_spearman() {
  std::size_t checked = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<double> base(n);
    std::iota(base.begin(), base.end(), 1.0);
    std::vector<double> perm = base;
    do {
      double d2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d2 += (base[i] - perm[i]) * (base[i] - perm[i]);
      }
      const double nd = static_cast<double>(n);
      const double closed = 1.0 - 6.0 * d2 / (nd * (nd * nd - 1.0));
      const double got = ortho::spearman_rho(base, perm).value();
      if (std::abs(got - closed) >= 1e-12) {
        return {false, "closed-form mismatch at n=" + std::to_string(n)};
      }
      ++checked;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  ortho::Rng rng(777);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.below(4));  // ties are frequent
      b[i] = static_cast<double>(rng.below(4));
    }
    const std::optional<double> got = ortho::spearman_rho(a, b);
    const std::optional<double> want = spearman_oracle(a, b);
    if (got.has_value() != want.has_value()) {
      return {false, "tie trial " + std::to_string(trial) +
                         ": definedness disagrees with the oracle"};
    }
    if (got && std::abs(*got - *want) >= 1e-12) {
      return {false, "tie trial " + std::to_string(trial) +
                         ": oracle mismatch " + fmt("%.3e", *got - *want)};
    }
  }
  return {true, std::to_string(checked) +
                    " permutations match the closed form and 100 tied inputs "
                    "match the counting oracle (tol 1e-12)"};
}

// ---------------------------------------------------------------------- A6

// Micro-F1 arithmetic: the reported F1 equals 2PR/(P+R) exactly, and the
// hand example gives exactly one half across the board.
Outcome a6_f1_arithmetic() {
  const ortho::DocumentPrf hand = ortho::prf1_sets({"a", "b"}, {"b", "c"});
  if (hand.precision != 0.5 || hand.recall != 0.5 || hand.f1 != 0.5) {
    return {false, "hand example is not exactly (0.5, 0.5, 0.5)"};
  }

  const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f"};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ortho::Rng rng(seed);
    std::map<std::string, ortho::LabelSet> pred, gold;
    const std::size_t docs = 1 + rng.below(5);
    for (std::size_t d = 0; d < docs; ++d) {
      const std::string id = "d" + std::to_string(d);
      for (const std::string& label : pool) {
        if (rng.below(2)) pred[id].insert(label);
        if (rng.below(2)) gold[id].insert(label);
      }
      pred[id];
      gold[id];
    }
    const ortho::ClassificationReport r =
        ortho::prf1(pred, gold, ortho::PrfMode::micro);
    const double pr = r.precision + r.recall;
    const double want = pr > 0.0 ? 2.0 * r.precision * r.recall / pr : 0.0;
    if (r.f1 != want) {
      return {false, "seed " + std::to_string(seed) +
                         ": f1 deviates from 2PR/(P+R) by " +
                         fmt("%.3e", r.f1 - want)};
    }
  }
  return {true,
          "100 random collections satisfy f1 = 2PR/(P+R) bit-for-bit; hand "
          "example is exactly 0.5"};
}

// ---------------------------------------------------------------------- A7

// Determinism: rerunning every subcommand with identical flags reproduces
// every output file and stdout byte for byte.
Outcome a7_determinism(const std::string& cli) {
  TempDir dir;
  const std::string corpus = dir.path("corpus.jsonl");
  const std::string catalog = dir.path("catalog.jsonl");
  const std::string vocab = dir.path("bow.vocab");
  const std::string cls_model = dir.path("cls.model");
  const std::string cls_vocab = dir.path("cls.vocab");
  const std::string cls_report = dir.path("cls.json");
  const std::string rank_model = dir.path("rank.model");
  const std::string classes = dir.path("classes.tsv");
  const std::string rank_report = dir.path("rank.json");
  const std::string pairs = dir.path("pairs.tsv");
  const std::string eval_report = dir.path("eval.json");

  struct Step {
    std::string name, args;
    std::vector<std::string> files;
  };
  const std::vector<Step> steps = {
      {"gen-synth",
       "gen-synth --out " + corpus + " --catalog-out " + catalog +
           " --n 120 --labels 6 --mean 2.5 --seed 3",
       {corpus, catalog}},
      {"stats", "stats --corpus " + corpus, {}},
      {"build-features",
       "build-features --corpus " + corpus + " --feature bow --min-count 1 "
           "--out " + vocab,
       {vocab}},
      {"train-classifier",
       "train-classifier --corpus " + corpus + " --model-out " + cls_model +
           " --vocab-out " + cls_vocab + " --report-out " + cls_report +
           " --min-count 1 --hidden-grid 16 --lr 0.5 --batch 16 --epochs 60 "
           "--patience 8",
       {cls_model, cls_vocab, cls_report}},
      {"train-ranker",
       "train-ranker --corpus " + corpus + " --feature ook --model-out " +
           rank_model + " --classes-out " + classes + " --report-out " +
           rank_report + " --pairs-out " + pairs + " --c-grid 1000 "
           "--epochs 120",
       {rank_model, classes, rank_report, pairs}},
      {"evaluate",
       "evaluate --corpus " + corpus + " --classifier " + cls_model +
           " --vocab " + cls_vocab + " --ranker " + rank_model +
           " --classes " + classes + " --on test --report-out " + eval_report,
       {eval_report}},
      {"predict",
       "predict --findings \"kw_g1_0 kw_g1_1 kw_g5_0 kw_g5_1\" --classifier " +
           cls_model + " --vocab " + cls_vocab + " --ranker " + rank_model +
           " --classes " + classes + " --catalog " + catalog,
       {}},
  };

  std::size_t files_checked = 0;
  for (const Step& step : steps) {
    const CmdResult first = run_cli(cli, step.args, dir);
    if (first.exit_code != 0) {
      return {false, step.name + " failed: " + first_line(first.err)};
    }
    std::vector<std::string> snapshots;
    for (const std::string& f : step.files) snapshots.push_back(read_file(f));
    const CmdResult second = run_cli(cli, step.args, dir);
    if (second.exit_code != 0) {
      return {false, step.name + " rerun failed: " + first_line(second.err)};
    }
    if (second.out != first.out) {
      return {false, step.name + ": stdout differs between runs"};
    }
    for (std::size_t i = 0; i < step.files.size(); ++i) {
      if (read_file(step.files[i]) != snapshots[i]) {
        return {false, step.name + ": " + step.files[i] + " differs on rerun"};
      }
      ++files_checked;
    }
  }
  return {true, "7 subcommands byte-identical on rerun (" +
                    std::to_string(files_checked) + " files and all stdout)"};
}

// ---------------------------------------------------------------------- A8

// Corpus shape at the reference scale: 990 documents with mean 15.4
// problems over 151 labels split exactly 810/90/90, sampled mean within
// +-0.5 of the target.
Outcome a8_reference_scale() {
  ortho::SynthSpec spec;  // defaults: 990 certificates, 151 labels, mean 15.4
  ortho::SynthResult result = ortho::generate_synthetic(spec);
  ortho::Split split = ortho::split_corpus(
      result.corpus, {81.0 / 99.0, 9.0 / 99.0, 9.0 / 99.0}, 1);
  const ortho::CorpusStats stats = ortho::corpus_stats(result.corpus);

  Outcome out;
  const bool sizes = split.train.size() == 810 &&
                     split.validation.size() == 90 && split.test.size() == 90;
  const double mean = stats.mean_problems_per_certificate;
  out.pass = sizes && std::abs(mean - 15.4) <= 0.5;
  out.detail = "split " + std::to_string(split.train.size()) + "/" +
               std::to_string(split.validation.size()) + "/" +
               std::to_string(split.test.size()) +
               " (want 810/90/90), mean problems per certificate " +
               fmt("%.3f", mean) + " (want 15.4 +- 0.5), " +
               std::to_string(stats.n_distinct_labels) + " labels seen";
  return out;
}

// ---------------------------------------------------------------------- A9

// The positive-correlation flag follows the strict > 0.4 rule: set for a
// perfect ranking, clear at exactly 0.4 and for a negative mean.
Outcome a9_threshold_flag() {
  std::map<std::string, std::vector<double>> perfect = {{"d1", {1, 2, 3}},
                                                        {"d2", {2, 1, 4, 3}}};
  const ortho::RankingReport above = ortho::mean_rank_correlation(perfect,
                                                                  perfect);
  if (!above.positive_correlation || above.mean_rho != 1.0) {
    return {false, "perfect agreement did not set the flag"};
  }

  // gold (1,2,3,4) vs pred (2,3,1,4): rank covariance 2, variances 5, so
  // rho is 2/sqrt(25), the exact double 0.4.
  std::map<std::string, std::vector<double>> pred = {{"d1", {2, 3, 1, 4}}};
  std::map<std::string, std::vector<double>> gold = {{"d1", {1, 2, 3, 4}}};
  const ortho::RankingReport at = ortho::mean_rank_correlation(pred, gold);
  if (at.mean_rho != 0.4) {
    return {false, "boundary case mean rho is " + fmt("%.17g", at.mean_rho) +
                       ", expected exactly 0.4"};
  }
  if (at.positive_correlation) {
    return {false, "flag set at exactly 0.4; the rule is strictly greater"};
  }

  std::map<std::string, std::vector<double>> reversed = {{"d1", {3, 2, 1}}};
  std::map<std::string, std::vector<double>> forward = {{"d1", {1, 2, 3}}};
  const ortho::RankingReport below = ortho::mean_rank_correlation(reversed,
                                                                  forward);
  if (below.positive_correlation || below.mean_rho != -1.0) {
    return {false, "negative case did not clear the flag"};
  }
  return {true,
          "flag set at mean rho 1.0, clear at exactly 0.4 and at -1.0 "
          "(strict > 0.4)"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <path-to-orthoplan>\n";
    return 2;
  }
  const std::string cli = argv[1];

  struct Criterion {
    const char* id;
    Outcome outcome;
  };
  std::vector<Criterion> results;
  auto run = [&](const char* id, Outcome (*fn)()) {
    try {
      results.push_back({id, fn()});
    } catch (const std::exception& e) {
      results.push_back({id, {false, std::string("exception: ") + e.what()}});
    }
  };
  auto run_cli_criterion = [&](const char* id,
                               Outcome (*fn)(const std::string&)) {
    try {
      results.push_back({id, fn(cli)});
    } catch (const std::exception& e) {
      results.push_back({id, {false, std::string("exception: ") + e.what()}});
    }
  };

  run("A1", a1_gradients);
  run_cli_criterion("A2", a2_end_to_end);
  run("A3", a3_vocabulary_threshold);
  run("A4", a4_ranking_oracle);
  run("A5", a5_spearman);
  run("A6", a6_f1_arithmetic);
  run_cli_criterion("A7", a7_determinism);
  run("A8", a8_reference_scale);
  run("A9", a9_threshold_flag);

  bool all_pass = true;
  for (const Criterion& c : results) {
    std::cout << c.id << (c.outcome.pass ? " PASS: " : " FAIL: ")
              << c.outcome.detail << '\n';
    all_pass = all_pass && c.outcome.pass;
  }
  return all_pass ? 0 : 1;
}
