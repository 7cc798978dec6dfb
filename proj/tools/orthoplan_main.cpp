// SPDX-License-Identifier: Apache-2.0
//
// orthoplan: two-step treatment planning over findings text. Step 1
// extracts problem labels with a multi-label MLP classifier; Step 2 orders
// them with a pairwise ranking SVM.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ortho/classifier.hpp"
#include "ortho/corpus.hpp"
#include "ortho/errors.hpp"
#include "ortho/features.hpp"
#include "ortho/metrics.hpp"
#include "ortho/pipeline.hpp"
#include "ortho/ranker.hpp"
#include "ortho/synth.hpp"

namespace {

using nlohmann::json;

// Option combinations CLI11 cannot express declaratively.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kDefaultRatios[3] = {81.0 / 99.0, 9.0 / 99.0, 9.0 / 99.0};

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ortho::DataError("cannot write " + path);
  os << j.dump(2) << '\n';
  if (!os) throw ortho::DataError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ortho::DataError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::array<double, 3> to_ratios(const std::vector<double>& r) {
  if (r.size() != 3) throw UsageError("--ratios needs three values");
  return {r[0], r[1], r[2]};
}

// Loads the corpus and applies the catalog grouping when one is given.
ortho::Corpus load_input_corpus(const std::string& corpus_path,
                                const std::string& catalog_path) {
  ortho::Corpus corpus = ortho::load_corpus(corpus_path);
  if (!catalog_path.empty()) {
    ortho::LabelCatalog catalog = ortho::load_catalog(catalog_path);
    corpus = ortho::apply_grouping(corpus, catalog);
  }
  return corpus;
}

json split_json(const ortho::Split& split) {
  return {{"test", split.test.size()},
          {"train", split.train.size()},
          {"validation", split.validation.size()}};
}

// ---------------------------------------------------------------- gen-synth

struct GenSynthOpts {
  std::string out, catalog_out, severity_file;
  ortho::SynthSpec spec;
};

int run_gen_synth(const GenSynthOpts& opts) {
  ortho::SynthSpec spec = opts.spec;
  if (!opts.severity_file.empty()) {
    json j = json::parse(read_text_file(opts.severity_file), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ortho::DataError(opts.severity_file +
                             ": expected a JSON object of class_id to number");
    }
    for (const auto& [key, value] : j.items()) {
      if (!value.is_number()) {
        throw ortho::DataError(opts.severity_file + ": severity of \"" + key +
                               "\" must be a number");
      }
      spec.severity[key] = value.get<double>();
    }
  }
  ortho::SynthResult result = ortho::generate_synthetic(spec);
  ortho::save_corpus(result.corpus, opts.out);
  ortho::save_catalog(result.catalog, opts.catalog_out);
  std::cout << "wrote " << result.corpus.size() << " certificates to "
            << opts.out << " and " << result.catalog.classes.size()
            << " catalog entries to " << opts.catalog_out << '\n';
  return 0;
}

// -------------------------------------------------------------------- stats

struct StatsOpts {
  std::string corpus, catalog;
  std::size_t top = 10;
};

int run_stats(const StatsOpts& opts) {
  ortho::Corpus corpus = load_input_corpus(opts.corpus, opts.catalog);
  if (corpus.empty()) throw ortho::DataError("corpus is empty");
  ortho::CorpusStats stats = ortho::corpus_stats(corpus);
  std::cout << "certificates: " << stats.n_certificates << '\n'
            << "problems: " << stats.n_problems << '\n'
            << "mean problems per certificate: "
            << fmt(stats.mean_problems_per_certificate, "%.2f") << '\n'
            << "distinct labels: " << stats.n_distinct_labels << '\n';
  std::vector<std::pair<std::string, std::size_t>> counts(
      stats.label_counts.begin(), stats.label_counts.end());
  std::sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::size_t top =
      opts.top == 0 ? counts.size() : std::min(opts.top, counts.size());
  std::cout << "top labels:\n";
  for (std::size_t i = 0; i < top; ++i) {
    std::cout << "  " << counts[i].first << '\t' << counts[i].second << '\n';
  }
  return 0;
}

// ----------------------------------------------------------- build-features

struct BuildFeaturesOpts {
  std::string corpus, feature = "bow", tokenizer = "whitespace";
  std::string source = "findings";  // findings | problems
  std::string out;
  std::uint32_t min_count = 5;
};

int run_build_features(const BuildFeaturesOpts& opts) {
  ortho::Corpus corpus = ortho::load_corpus(opts.corpus);
  const ortho::FeatureKind kind = ortho::parse_feature_kind(opts.feature);
  if (kind == ortho::FeatureKind::embedding) {
    throw UsageError("embeddings are produced externally; nothing to build");
  }
  if (kind == ortho::FeatureKind::bow) {
    const ortho::TokenizerScheme scheme =
        ortho::parse_tokenizer_scheme(opts.tokenizer);
    auto docs = opts.source == "problems"
                    ? ortho::tokenized_problem_texts(corpus, scheme)
                    : ortho::tokenized_findings(corpus, scheme);
    ortho::Vocabulary vocab = ortho::build_vocabulary(docs, opts.min_count);
    ortho::save_vocabulary(vocab, opts.out);
    std::cout << "wrote vocabulary of " << vocab.size() << " tokens to "
              << opts.out << '\n';
  } else {
    ortho::ClassIndex index =
        ortho::build_class_index(ortho::collect_label_ids(corpus));
    ortho::save_class_index(index, opts.out);
    std::cout << "wrote class index of " << index.size() << " classes to "
              << opts.out << '\n';
  }
  return 0;
}

// --------------------------------------------------------- train-classifier

struct TrainClassifierOpts {
  std::string corpus, catalog, embeddings;
  std::string feature = "bow", tokenizer = "whitespace";
  std::string model_out, vocab_out, report_out;
  std::uint32_t min_count = 5;
  std::vector<double> ratios{kDefaultRatios[0], kDefaultRatios[1],
                             kDefaultRatios[2]};
  std::uint64_t split_seed = 1;
  ortho::TrainConfig train;
};

int run_train_classifier(const TrainClassifierOpts& opts) {
  const ortho::FeatureKind kind = ortho::parse_feature_kind(opts.feature);
  if (kind == ortho::FeatureKind::ook) {
    throw UsageError("ook features encode single problems; the classifier "
                     "needs bow or embedding");
  }
  if (kind == ortho::FeatureKind::embedding && opts.embeddings.empty()) {
    throw UsageError("--embeddings is required for embedding features");
  }
  if (kind == ortho::FeatureKind::bow && opts.vocab_out.empty()) {
    throw UsageError("--vocab-out is required for bow features");
  }

  ortho::Corpus corpus = load_input_corpus(opts.corpus, opts.catalog);
  ortho::Split split =
      ortho::split_corpus(corpus, to_ratios(opts.ratios), opts.split_seed);
  ortho::Corpus train_corpus = ortho::subset_by_ids(corpus, split.train);
  ortho::Corpus val_corpus = ortho::subset_by_ids(corpus, split.validation);

  ortho::EncoderContext ctx;
  ctx.scheme = ortho::parse_tokenizer_scheme(opts.tokenizer);
  ortho::Vocabulary vocab;
  ortho::EmbeddingTable table;
  if (kind == ortho::FeatureKind::bow) {
    vocab = ortho::build_vocabulary(
        ortho::tokenized_findings(train_corpus, ctx.scheme), opts.min_count);
    if (vocab.size() == 0) {
      throw ortho::DataError("empty vocabulary: no token reaches min_count " +
                             std::to_string(opts.min_count));
    }
    ctx.vocab = &vocab;
  } else {
    table = ortho::load_embeddings(opts.embeddings);
    ctx.table = &table;
  }

  const std::vector<std::string> labels =
      ortho::collect_label_ids(train_corpus);
  auto train_set =
      ortho::make_classifier_examples(train_corpus, labels, kind, ctx);
  auto val_set = ortho::make_classifier_examples(val_corpus, labels, kind, ctx);

  ortho::ClassifierTrainResult result =
      ortho::train(train_set, val_set, labels, opts.train);

  std::cout << "hidden\tepochs\tval_P\tval_R\tval_F1\tstatus\n";
  for (const auto& e : result.grid) {
    std::cout << e.hidden_dim << '\t' << e.epochs_run << '\t'
              << fmt(e.val_precision, "%.4f") << '\t'
              << fmt(e.val_recall, "%.4f") << '\t' << fmt(e.val_f1, "%.4f")
              << '\t' << e.status << '\n';
  }
  const auto& sel = result.grid[result.selected_index];
  std::cout << "selected hidden=" << sel.hidden_dim
            << " val_F1=" << fmt(sel.val_f1, "%.4f") << '\n';

  std::map<std::string, std::string> meta = {
      {"feature", ortho::feature_kind_name(kind)},
      {"tokenizer", opts.tokenizer}};
  if (kind == ortho::FeatureKind::bow) {
    meta["min_count"] = std::to_string(opts.min_count);
    ortho::save_vocabulary(vocab, opts.vocab_out);
  }
  ortho::save_mlp(result.model, meta, opts.model_out);

  if (!opts.report_out.empty()) {
    json grid = json::array();
    for (const auto& e : result.grid) {
      grid.push_back({{"epochs", e.epochs_run},
                      {"hidden", e.hidden_dim},
                      {"status", e.status},
                      {"val_f1", e.val_f1},
                      {"val_precision", e.val_precision},
                      {"val_recall", e.val_recall}});
    }
    write_json_file({{"grid", grid},
                     {"selected", {{"hidden", sel.hidden_dim},
                                   {"val_f1", sel.val_f1}}},
                     {"split", split_json(split)},
                     {"task", "classifier"}},
                    opts.report_out);
  }
  return 0;
}

// ------------------------------------------------------------- train-ranker

struct TrainRankerOpts {
  std::string corpus, catalog, embeddings;
  std::string feature = "ook", tokenizer = "whitespace";
  std::string model_out, vocab_out, classes_out, report_out, pairs_out;
  std::uint32_t min_count = 1;
  std::vector<double> ratios{kDefaultRatios[0], kDefaultRatios[1],
                             kDefaultRatios[2]};
  std::uint64_t split_seed = 1;
  ortho::RankTrainConfig train;
};

int run_train_ranker(const TrainRankerOpts& opts) {
  const ortho::FeatureKind kind = ortho::parse_feature_kind(opts.feature);
  if (kind == ortho::FeatureKind::embedding && opts.embeddings.empty()) {
    throw UsageError("--embeddings is required for embedding features");
  }
  if (kind == ortho::FeatureKind::bow && opts.vocab_out.empty()) {
    throw UsageError("--vocab-out is required for bow features");
  }
  if (kind == ortho::FeatureKind::ook && opts.classes_out.empty()) {
    throw UsageError("--classes-out is required for ook features");
  }

  ortho::Corpus corpus = load_input_corpus(opts.corpus, opts.catalog);
  ortho::Split split =
      ortho::split_corpus(corpus, to_ratios(opts.ratios), opts.split_seed);
  ortho::Corpus train_corpus = ortho::subset_by_ids(corpus, split.train);
  ortho::Corpus val_corpus = ortho::subset_by_ids(corpus, split.validation);

  ortho::EncoderContext ctx;
  ctx.scheme = ortho::parse_tokenizer_scheme(opts.tokenizer);
  ortho::Vocabulary vocab;
  ortho::ClassIndex classes;
  ortho::EmbeddingTable table;
  if (kind == ortho::FeatureKind::bow) {
    vocab = ortho::build_vocabulary(
        ortho::tokenized_problem_texts(train_corpus, ctx.scheme),
        opts.min_count);
    if (vocab.size() == 0) {
      throw ortho::DataError("empty vocabulary: no token reaches min_count " +
                             std::to_string(opts.min_count));
    }
    ctx.vocab = &vocab;
  } else if (kind == ortho::FeatureKind::ook) {
    classes = ortho::build_class_index(ortho::collect_label_ids(train_corpus));
    ctx.classes = &classes;
  } else {
    table = ortho::load_embeddings(opts.embeddings);
    ctx.table = &table;
  }

  auto groups = ortho::make_pair_groups(train_corpus, kind, ctx);
  auto validation = ortho::make_validation_groups(val_corpus, kind, ctx);
  ortho::RankTrainResult result =
      ortho::train_rank(groups, validation, opts.train);

  std::cout << "C\tepochs\tobjective\tviolations\tval_rho\tstatus\n";
  for (const auto& e : result.grid) {
    std::cout << fmt(e.c, "%g") << '\t' << e.epochs_run << '\t'
              << fmt(e.final_objective, "%.6g") << '\t' << e.train_violations
              << '\t' << fmt(e.val_rho, "%.4f") << '\t' << e.status << '\n';
  }
  const auto& sel = result.grid[result.selected_index];
  std::cout << "selected C=" << fmt(sel.c, "%g")
            << " val_rho=" << fmt(sel.val_rho, "%.4f") << '\n';

  std::map<std::string, std::string> meta = {
      {"feature", ortho::feature_kind_name(kind)},
      {"tokenizer", opts.tokenizer}};
  if (kind == ortho::FeatureKind::bow) {
    meta["min_count"] = std::to_string(opts.min_count);
    ortho::save_vocabulary(vocab, opts.vocab_out);
  } else if (kind == ortho::FeatureKind::ook) {
    ortho::save_class_index(classes, opts.classes_out);
  }
  ortho::save_rank(result.model, meta, opts.model_out);

  if (!opts.pairs_out.empty()) {
    std::ofstream os(opts.pairs_out, std::ios::binary);
    if (!os) throw ortho::DataError("cannot write " + opts.pairs_out);
    ortho::dump_pairs(os, groups);
  }
  if (!opts.report_out.empty()) {
    json grid = json::array();
    for (const auto& e : result.grid) {
      grid.push_back({{"c", e.c},
                      {"epochs", e.epochs_run},
                      {"objective", e.final_objective},
                      {"status", e.status},
                      {"val_excluded", e.val_excluded},
                      {"val_rho", e.val_rho},
                      {"violations", e.train_violations}});
    }
    write_json_file({{"grid", grid},
                     {"selected", {{"c", sel.c}, {"val_rho", sel.val_rho}}},
                     {"split", split_json(split)},
                     {"task", "ranker"}},
                    opts.report_out);
  }
  return 0;
}

// ----------------------------------------------------------------- evaluate

struct EvaluateOpts {
  std::string corpus, catalog;
  std::string classifier_model, ranker_model;
  std::string vocab, rank_vocab, classes, embeddings;
  std::string mode = "example", rank_input = "gold", on = "test";
  std::string report_out;
  double threshold = 0.5;
  std::vector<double> ratios{kDefaultRatios[0], kDefaultRatios[1],
                             kDefaultRatios[2]};
  std::uint64_t split_seed = 1;
};

// Builds the encoder context a saved model asks for via its metadata.
struct LoadedArtifacts {
  ortho::Vocabulary vocab;
  ortho::ClassIndex classes;
  ortho::EmbeddingTable table;
  ortho::FeatureKind kind = ortho::FeatureKind::bow;
  ortho::EncoderContext ctx;
};

void prepare_context(const std::map<std::string, std::string>& meta,
                     const std::string& vocab_path,
                     const std::string& classes_path,
                     const std::string& embeddings_path, const char* which,
                     LoadedArtifacts& out) {
  auto it = meta.find("feature");
  if (it == meta.end()) {
    throw ortho::DataError(std::string(which) +
                           " model file lacks feature metadata");
  }
  out.kind = ortho::parse_feature_kind(it->second);
  auto tok = meta.find("tokenizer");
  out.ctx.scheme = ortho::parse_tokenizer_scheme(
      tok == meta.end() ? "whitespace" : tok->second);
  switch (out.kind) {
    case ortho::FeatureKind::bow:
      if (vocab_path.empty()) {
        throw UsageError(std::string("the ") + which +
                         " uses bow features; pass its vocabulary file");
      }
      out.vocab = ortho::load_vocabulary(vocab_path);
      out.ctx.vocab = &out.vocab;
      break;
    case ortho::FeatureKind::ook:
      if (classes_path.empty()) {
        throw UsageError(std::string("the ") + which +
                         " uses ook features; pass its class index file");
      }
      out.classes = ortho::load_class_index(classes_path);
      out.ctx.classes = &out.classes;
      break;
    case ortho::FeatureKind::embedding:
      if (embeddings_path.empty()) {
        throw UsageError(std::string("the ") + which +
                         " uses embedding features; pass --embeddings");
      }
      out.table = ortho::load_embeddings(embeddings_path);
      out.ctx.table = &out.table;
      break;
  }
}

int run_evaluate(const EvaluateOpts& opts) {
  if (opts.classifier_model.empty() && opts.ranker_model.empty()) {
    throw UsageError("pass --classifier and/or --ranker");
  }
  const bool predicted_input = opts.rank_input == "predicted";
  if (opts.rank_input != "gold" && !predicted_input) {
    throw UsageError("--rank-input must be gold or predicted");
  }
  if (predicted_input && opts.classifier_model.empty()) {
    throw UsageError("--rank-input predicted needs --classifier");
  }

  ortho::Corpus corpus = load_input_corpus(opts.corpus, opts.catalog);
  ortho::Split split =
      ortho::split_corpus(corpus, to_ratios(opts.ratios), opts.split_seed);
  const std::vector<std::string>* ids = &split.test;
  if (opts.on == "validation") ids = &split.validation;
  else if (opts.on == "train") ids = &split.train;
  else if (opts.on != "test") throw UsageError("--on must be train, validation or test");
  ortho::Corpus eval_corpus = ortho::subset_by_ids(corpus, *ids);

  json report;
  std::map<std::string, ortho::LabelSet> predictions;

  if (!opts.classifier_model.empty()) {
    ortho::LoadedMlp loaded = ortho::load_mlp(opts.classifier_model);
    LoadedArtifacts art;
    prepare_context(loaded.meta, opts.vocab, "", opts.embeddings, "classifier",
                    art);
    std::map<std::string, ortho::LabelSet> gold;
    for (const ortho::Certificate& cert : eval_corpus) {
      ortho::FeatureVector x =
          ortho::encode_findings(cert, art.kind, art.ctx);
      predictions[cert.id] =
          ortho::predict_labels(loaded.model, x, opts.threshold);
      ortho::LabelSet& g = gold[cert.id];
      for (const ortho::Problem& p : cert.problems) g.insert(p.class_id);
    }
    const ortho::PrfMode mode = opts.mode == "micro"
                                    ? ortho::PrfMode::micro
                                    : ortho::PrfMode::example_based;
    if (opts.mode != "micro" && opts.mode != "example") {
      throw UsageError("--mode must be example or micro");
    }
    ortho::ClassificationReport cls = ortho::prf1(predictions, gold, mode);
    std::cout << "classification (" << opts.mode << ", "
              << cls.n_documents << " documents): P="
              << fmt(cls.precision, "%.4f") << " R=" << fmt(cls.recall, "%.4f")
              << " F1=" << fmt(cls.f1, "%.4f") << '\n';
    report["classification"] = {
        {"f1", cls.f1},
        {"mode", opts.mode == "micro" ? "micro" : "example_based"},
        {"n_documents", cls.n_documents},
        {"precision", cls.precision},
        {"recall", cls.recall}};
  }

  if (!opts.ranker_model.empty()) {
    ortho::LoadedRank loaded = ortho::load_rank(opts.ranker_model);
    LoadedArtifacts art;
    prepare_context(loaded.meta, opts.rank_vocab, opts.classes,
                    opts.embeddings, "ranker", art);
    std::map<std::string, std::vector<double>> pred_ranks, gold_ranks;
    for (const ortho::Certificate& cert : eval_corpus) {
      std::vector<const ortho::Problem*> problems;
      for (const ortho::Problem& p : cert.problems) {
        if (predicted_input && !predictions[cert.id].count(p.class_id)) {
          continue;  // rank only the classes Step 1 actually predicted
        }
        problems.push_back(&p);
      }
      std::vector<ortho::FeatureVector> items;
      std::vector<double> gold;
      for (const ortho::Problem* p : problems) {
        items.push_back(ortho::encode_problem(*p, art.kind, art.ctx));
        gold.push_back(static_cast<double>(p->priority));
      }
      if (items.empty()) {
        // mean_rank_correlation rejects length mismatches, not empties;
        // represent the empty document so it counts as excluded.
        pred_ranks[cert.id] = {};
        gold_ranks[cert.id] = {};
        continue;
      }
      std::vector<std::uint32_t> ranks =
          ortho::rank_problems(loaded.model, items);
      pred_ranks[cert.id] = std::vector<double>(ranks.begin(), ranks.end());
      gold_ranks[cert.id] = std::move(gold);
    }
    ortho::RankingReport rank = ortho::mean_rank_correlation(pred_ranks,
                                                             gold_ranks);
    std::cout << "ranking (" << opts.rank_input << " input, "
              << rank.per_document.size() << " documents, "
              << rank.n_excluded << " excluded): mean_rho="
              << fmt(rank.mean_rho, "%.4f")
              << (rank.positive_correlation ? " (positive correlation)" : "")
              << '\n';
    report["ranking"] = {{"input", opts.rank_input},
                        {"mean_rho", rank.mean_rho},
                        {"n_documents", rank.per_document.size()},
                        {"n_excluded", rank.n_excluded},
                        {"positive_correlation", rank.positive_correlation}};
  }

  if (!opts.report_out.empty()) write_json_file(report, opts.report_out);
  return 0;
}

// ------------------------------------------------------------------ predict

struct PredictOpts {
  std::string findings, findings_file;
  std::string classifier_model, ranker_model;
  std::string vocab, rank_vocab, classes, embeddings, catalog;
  std::string embedding_key;
  double threshold = 0.5;
};

int run_predict(const PredictOpts& opts) {
  std::string text = opts.findings;
  if (!opts.findings_file.empty()) {
    if (!text.empty()) {
      throw UsageError("pass --findings or --findings-file, not both");
    }
    text = read_text_file(opts.findings_file);
  }
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    std::cerr << "warning: empty findings text, nothing to plan\n";
    return 0;
  }

  ortho::LoadedMlp cls = ortho::load_mlp(opts.classifier_model);
  LoadedArtifacts cls_art;
  prepare_context(cls.meta, opts.vocab, "", opts.embeddings, "classifier",
                  cls_art);
  ortho::Certificate cert;
  cert.id = opts.embedding_key;
  cert.findings_text = text;
  if (cls_art.kind == ortho::FeatureKind::embedding &&
      opts.embedding_key.empty()) {
    throw UsageError(
        "the classifier uses embedding features; pass --embedding-key");
  }
  std::set<std::string> predicted = ortho::predict_labels(
      cls.model, ortho::encode_findings(cert, cls_art.kind, cls_art.ctx),
      opts.threshold);
  if (predicted.empty()) {
    std::cerr << "warning: no problems predicted\n";
    return 0;
  }

  ortho::LoadedRank ranker = ortho::load_rank(opts.ranker_model);
  LoadedArtifacts rank_art;
  prepare_context(ranker.meta, opts.rank_vocab, opts.classes, opts.embeddings,
                  "ranker", rank_art);
  ortho::LabelCatalog catalog;
  if (!opts.catalog.empty()) catalog = ortho::load_catalog(opts.catalog);

  std::vector<ortho::Problem> problems;
  std::vector<ortho::FeatureVector> items;
  for (const std::string& class_id : predicted) {
    ortho::Problem p;
    p.class_id = class_id;
    p.surface_text =
        catalog.has_class(class_id) ? catalog.name_of(class_id) : class_id;
    p.priority = 1;  // unknown yet; ranking assigns the real order
    if (rank_art.kind == ortho::FeatureKind::ook &&
        !rank_art.classes.class_to_index.count(class_id)) {
      std::cerr << "warning: class \"" << class_id
                << "\" not in the training class index; using a zero vector\n";
    }
    items.push_back(ortho::encode_problem(p, rank_art.kind, rank_art.ctx));
    problems.push_back(std::move(p));
  }
  std::vector<std::uint32_t> ranks = ortho::rank_problems(ranker.model, items);

  std::vector<std::size_t> order(problems.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ranks[a] < ranks[b];
  });
  for (std::size_t i : order) {
    std::cout << ranks[i] << '\t' << problems[i].class_id << '\t'
              << problems[i].surface_text << '\t'
              << fmt(ortho::score(ranker.model, items[i])) << '\n';
  }
  return 0;
}

// --------------------------------------------------------------------- main

void add_ratio_options(CLI::App* cmd, std::vector<double>& ratios,
                       std::uint64_t& seed) {
  cmd->add_option("--ratios", ratios,
                  "train,validation,test split ratios (default 81:9:9)")
      ->delimiter(',')
      ->expected(3);
  cmd->add_option("--split-seed", seed, "seed for the split shuffle");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "orthoplan: extracts orthodontic problems from findings text and "
      "ranks them by treatment priority"};
  app.require_subcommand(1);

  GenSynthOpts gen;
  CLI::App* gen_cmd =
      app.add_subcommand("gen-synth", "generate a synthetic corpus + catalog");
  gen_cmd->add_option("--out", gen.out, "corpus output path")->required();
  gen_cmd->add_option("--catalog-out", gen.catalog_out, "catalog output path")
      ->required();
  gen_cmd->add_option("--n", gen.spec.n_certificates, "number of certificates")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--labels", gen.spec.n_labels, "number of labels")
      ->check(CLI::Range(2u, 1000000u));
  gen_cmd->add_option("--keywords", gen.spec.keywords_per_label,
                      "keywords per label")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--mean", gen.spec.problems_per_cert_mean,
                      "mean problems per certificate")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--noise", gen.spec.label_noise_rate,
                      "chance a gold label is missing from the text")
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--priority-noise", gen.spec.priority_noise,
                      "stddev of per-certificate severity jitter")
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.spec.rng_seed, "generator seed");
  gen_cmd->add_option("--severity-file", gen.severity_file,
                      "JSON object of class_id to severity");
  gen_cmd->set_config("--config");

  StatsOpts stats;
  CLI::App* stats_cmd = app.add_subcommand("stats", "corpus statistics");
  stats_cmd->add_option("--corpus", stats.corpus, "corpus path")->required();
  stats_cmd->add_option("--catalog", stats.catalog,
                        "catalog path (applies grouping)");
  stats_cmd->add_option("--top", stats.top, "label count rows to print (0 = all)");

  BuildFeaturesOpts bf;
  CLI::App* bf_cmd = app.add_subcommand(
      "build-features", "build a vocabulary or class index file");
  bf_cmd->add_option("--corpus", bf.corpus, "corpus path")->required();
  bf_cmd->add_option("--feature", bf.feature, "bow or ook")
      ->check(CLI::IsMember({"bow", "ook", "embedding"}));
  bf_cmd->add_option("--tokenizer", bf.tokenizer, "tokenizer scheme")
      ->check(CLI::IsMember({"whitespace", "unicode-words"}));
  bf_cmd->add_option("--source", bf.source,
                     "text source for bow: findings or problems")
      ->check(CLI::IsMember({"findings", "problems"}));
  bf_cmd->add_option("--min-count", bf.min_count,
                     "minimum token frequency for bow")
      ->check(CLI::PositiveNumber);
  bf_cmd->add_option("--out", bf.out, "output path")->required();

  TrainClassifierOpts tc;
  CLI::App* tc_cmd =
      app.add_subcommand("train-classifier", "train the multi-label MLP");
  tc_cmd->add_option("--corpus", tc.corpus, "corpus path")->required();
  tc_cmd->add_option("--catalog", tc.catalog, "catalog path (applies grouping)");
  tc_cmd->add_option("--feature", tc.feature, "bow or embedding")
      ->check(CLI::IsMember({"bow", "ook", "embedding"}));
  tc_cmd->add_option("--tokenizer", tc.tokenizer, "tokenizer scheme")
      ->check(CLI::IsMember({"whitespace", "unicode-words"}));
  tc_cmd->add_option("--min-count", tc.min_count, "vocabulary threshold")
      ->check(CLI::PositiveNumber);
  tc_cmd->add_option("--embeddings", tc.embeddings, "embedding table path");
  add_ratio_options(tc_cmd, tc.ratios, tc.split_seed);
  tc_cmd->add_option("--hidden-grid", tc.train.hidden_grid,
                     "hidden sizes to try")
      ->delimiter(',');
  tc_cmd->add_option("--lr", tc.train.learning_rate, "learning rate")
      ->check(CLI::PositiveNumber);
  tc_cmd->add_option("--batch", tc.train.batch_size, "mini-batch size")
      ->check(CLI::PositiveNumber);
  tc_cmd->add_option("--epochs", tc.train.max_epochs, "max training epochs")
      ->check(CLI::PositiveNumber);
  tc_cmd->add_option("--patience", tc.train.patience,
                     "epochs without improvement before stopping")
      ->check(CLI::PositiveNumber);
  tc_cmd->add_option("--threshold", tc.train.decision_threshold,
                     "decision threshold")
      ->check(CLI::Range(0.0, 1.0));
  tc_cmd->add_option("--train-seed", tc.train.rng_seed, "training seed");
  tc_cmd->add_option("--model-out", tc.model_out, "model output path")
      ->required();
  tc_cmd->add_option("--vocab-out", tc.vocab_out, "vocabulary output path");
  tc_cmd->add_option("--report-out", tc.report_out, "grid report output path");
  tc_cmd->set_config("--config");

  TrainRankerOpts tr;
  CLI::App* tr_cmd =
      app.add_subcommand("train-ranker", "train the pairwise ranking SVM");
  tr_cmd->add_option("--corpus", tr.corpus, "corpus path")->required();
  tr_cmd->add_option("--catalog", tr.catalog, "catalog path (applies grouping)");
  tr_cmd->add_option("--feature", tr.feature, "bow, ook or embedding")
      ->check(CLI::IsMember({"bow", "ook", "embedding"}));
  tr_cmd->add_option("--tokenizer", tr.tokenizer, "tokenizer scheme")
      ->check(CLI::IsMember({"whitespace", "unicode-words"}));
  tr_cmd->add_option("--min-count", tr.min_count, "vocabulary threshold")
      ->check(CLI::PositiveNumber);
  tr_cmd->add_option("--embeddings", tr.embeddings, "embedding table path");
  add_ratio_options(tr_cmd, tr.ratios, tr.split_seed);
  tr_cmd->add_option("--c-grid", tr.train.c_grid, "C values to try")
      ->delimiter(',');
  tr_cmd->add_option("--epochs", tr.train.max_epochs, "max training epochs")
      ->check(CLI::PositiveNumber);
  tr_cmd->add_option("--tolerance", tr.train.tolerance,
                     "relative objective-change stop")
      ->check(CLI::NonNegativeNumber);
  tr_cmd->add_option("--train-seed", tr.train.rng_seed, "training seed");
  tr_cmd->add_option("--model-out", tr.model_out, "model output path")
      ->required();
  tr_cmd->add_option("--vocab-out", tr.vocab_out, "vocabulary output path");
  tr_cmd->add_option("--classes-out", tr.classes_out,
                     "class index output path");
  tr_cmd->add_option("--report-out", tr.report_out, "grid report output path");
  tr_cmd->add_option("--pairs-out", tr.pairs_out,
                     "preference pair dump output path");
  tr_cmd->set_config("--config");

  EvaluateOpts ev;
  CLI::App* ev_cmd =
      app.add_subcommand("evaluate", "score models on a held-out split");
  ev_cmd->add_option("--corpus", ev.corpus, "corpus path")->required();
  ev_cmd->add_option("--catalog", ev.catalog, "catalog path (applies grouping)");
  ev_cmd->add_option("--classifier", ev.classifier_model,
                     "classifier model path");
  ev_cmd->add_option("--ranker", ev.ranker_model, "ranker model path");
  ev_cmd->add_option("--vocab", ev.vocab, "classifier vocabulary path");
  ev_cmd->add_option("--rank-vocab", ev.rank_vocab, "ranker vocabulary path");
  ev_cmd->add_option("--classes", ev.classes, "ranker class index path");
  ev_cmd->add_option("--embeddings", ev.embeddings, "embedding table path");
  ev_cmd->add_option("--threshold", ev.threshold, "decision threshold")
      ->check(CLI::Range(0.0, 1.0));
  ev_cmd->add_option("--mode", ev.mode, "classification averaging: example or micro")
      ->check(CLI::IsMember({"example", "micro"}));
  ev_cmd->add_option("--rank-input", ev.rank_input,
                     "rank gold problem lists or Step-1 predictions")
      ->check(CLI::IsMember({"gold", "predicted"}));
  ev_cmd->add_option("--on", ev.on, "split to evaluate")
      ->check(CLI::IsMember({"train", "validation", "test"}));
  add_ratio_options(ev_cmd, ev.ratios, ev.split_seed);
  ev_cmd->add_option("--report-out", ev.report_out, "report output path");

  PredictOpts pr;
  CLI::App* pr_cmd = app.add_subcommand(
      "predict", "one-shot prioritized plan from findings text");
  pr_cmd->add_option("--findings", pr.findings, "findings text");
  pr_cmd->add_option("--findings-file", pr.findings_file,
                     "file with findings text");
  pr_cmd->add_option("--classifier", pr.classifier_model,
                     "classifier model path")
      ->required();
  pr_cmd->add_option("--ranker", pr.ranker_model, "ranker model path")
      ->required();
  pr_cmd->add_option("--vocab", pr.vocab, "classifier vocabulary path");
  pr_cmd->add_option("--rank-vocab", pr.rank_vocab, "ranker vocabulary path");
  pr_cmd->add_option("--classes", pr.classes, "ranker class index path");
  pr_cmd->add_option("--embeddings", pr.embeddings, "embedding table path");
  pr_cmd->add_option("--embedding-key", pr.embedding_key,
                     "embedding table key for the findings text");
  pr_cmd->add_option("--catalog", pr.catalog, "catalog path (for names)");
  pr_cmd->add_option("--threshold", pr.threshold, "decision threshold")
      ->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen_cmd->parsed()) return run_gen_synth(gen);
    if (stats_cmd->parsed()) return run_stats(stats);
    if (bf_cmd->parsed()) return run_build_features(bf);
    if (tc_cmd->parsed()) return run_train_classifier(tc);
    if (tr_cmd->parsed()) return run_train_ranker(tr);
    if (ev_cmd->parsed()) return run_evaluate(ev);
    if (pr_cmd->parsed()) return run_predict(pr);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const ortho::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const ortho::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
