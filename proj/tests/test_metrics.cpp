// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ortho/errors.hpp"
#include "ortho/metrics.hpp"

using namespace ortho;

namespace {

// Independent Spearman oracle using the counting definition of fractional
// ranks and long-double accumulation.
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
  std::vector<long double> ra = ranks(a), rb = ranks(b);
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

// Closed form for distinct ranks: 1 - 6*sum(d^2)/(n*(n^2-1)).
double spearman_closed_form(const std::vector<double>& a,
                            const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d2 += (a[i] - b[i]) * (a[i] - b[i]);
  }
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

}  // namespace

TEST_CASE("prf1_sets hand-checked document") {
  DocumentPrf r = prf1_sets({"a", "b"}, {"b", "c"});
  // One true positive out of two predictions and two gold labels.
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 0.5);
  CHECK(r.f1 == 0.5);
}

TEST_CASE("prf1_sets empty-set conventions") {
  DocumentPrf both = prf1_sets({}, {});
  CHECK(both.precision == 1.0);
  CHECK(both.recall == 1.0);
  CHECK(both.f1 == 1.0);

  PrfOptions zero;
  zero.both_empty_value = 0.0;
  CHECK(prf1_sets({}, {}, zero).f1 == 0.0);

  DocumentPrf miss = prf1_sets({}, {"a"});
  CHECK(miss.precision == 0.0);
  CHECK(miss.recall == 0.0);
  CHECK(miss.f1 == 0.0);

  DocumentPrf spurious = prf1_sets({"a"}, {});
  CHECK(spurious.precision == 0.0);
  CHECK(spurious.recall == 0.0);
  CHECK(spurious.f1 == 0.0);
}

TEST_CASE("prf1 example-based averaging") {
  std::map<std::string, LabelSet> pred = {
      {"d1", {"a", "b"}}, {"d2", {"a"}}, {"d3", {}}};
  std::map<std::string, LabelSet> gold = {
      {"d1", {"b", "c"}}, {"d2", {"a"}}, {"d3", {}}};
  ClassificationReport r = prf1(pred, gold, PrfMode::example_based);
  CHECK(r.n_documents == 3);
  REQUIRE(r.per_document.size() == 3);
  // d1: 0.5 each; d2: 1.0; d3: 1.0 by the both-empty convention.
  CHECK(r.precision == doctest::Approx((0.5 + 1.0 + 1.0) / 3.0));
  CHECK(r.recall == doctest::Approx((0.5 + 1.0 + 1.0) / 3.0));
  CHECK(r.f1 == doctest::Approx((0.5 + 1.0 + 1.0) / 3.0));
  // Per-document entries carry ids in key order.
  CHECK(r.per_document[0].id == "d1");
  CHECK(r.per_document[0].f1 == 0.5);
}

TEST_CASE("prf1 micro pooling") {
  std::map<std::string, LabelSet> pred = {{"d1", {"a", "b"}},
                                          {"d2", {"c", "d", "e"}}};
  std::map<std::string, LabelSet> gold = {{"d1", {"b"}}, {"d2", {"c", "f"}}};
  ClassificationReport r = prf1(pred, gold, PrfMode::micro);
  // tp = 2 (b, c), predicted = 5, gold = 3.
  CHECK(r.precision == doctest::Approx(2.0 / 5.0));
  CHECK(r.recall == doctest::Approx(2.0 / 3.0));
  CHECK(r.f1 == doctest::Approx(2.0 * 0.4 * (2.0 / 3.0) / (0.4 + 2.0 / 3.0)));
  CHECK(r.per_document.empty());
}

TEST_CASE("micro equals example-based for single-document input") {
  std::map<std::string, LabelSet> pred = {{"only", {"a", "b", "c"}}};
  std::map<std::string, LabelSet> gold = {{"only", {"b", "c", "d"}}};
  ClassificationReport ex = prf1(pred, gold, PrfMode::example_based);
  ClassificationReport mi = prf1(pred, gold, PrfMode::micro);
  CHECK(ex.precision == doctest::Approx(mi.precision));
  CHECK(ex.recall == doctest::Approx(mi.recall));
  CHECK(ex.f1 == doctest::Approx(mi.f1));
}

TEST_CASE("prf1 requires identical key sets") {
  std::map<std::string, LabelSet> pred = {{"d1", {"a"}}};
  std::map<std::string, LabelSet> gold = {{"d2", {"a"}}};
  CHECK_THROWS_AS(prf1(pred, gold, PrfMode::micro), DataError);
  std::map<std::string, LabelSet> extra = {{"d1", {"a"}}, {"d2", {"a"}}};
  CHECK_THROWS_AS(prf1(pred, extra, PrfMode::example_based), DataError);
}

TEST_CASE("spearman_rho basic values") {
  CHECK(spearman_rho({1, 2, 3, 4}, {1, 2, 3, 4}).value() ==
        doctest::Approx(1.0));
  CHECK(spearman_rho({1, 2, 3, 4}, {4, 3, 2, 1}).value() ==
        doctest::Approx(-1.0));
  // d = (1,1,1,1), n = 4: rho = 1 - 6*4/(4*15) = 0.6.
  CHECK(spearman_rho({1, 2, 3, 4}, {2, 1, 4, 3}).value() ==
        doctest::Approx(0.6));
}

TEST_CASE("spearman_rho matches the closed form on all permutations") {
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<double> base(n);
    std::iota(base.begin(), base.end(), 1.0);
    std::vector<double> perm = base;
    do {
      double got = spearman_rho(base, perm).value();
      CHECK(std::abs(got - spearman_closed_form(base, perm)) < 1e-12);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("spearman_rho handles ties with fractional ranks") {
  // a = (1, 2, 2, 4) has ranks (1, 2.5, 2.5, 4).
  std::vector<double> a = {1, 2, 2, 4};
  std::vector<double> b = {1, 2, 3, 4};
  double got = spearman_rho(a, b).value();
  CHECK(got == doctest::Approx(spearman_oracle(a, b).value()).epsilon(1e-12));
  // Pair ties consistently ranked: rho must be short of 1.
  CHECK(got < 1.0);
  CHECK(got > 0.9);
}

TEST_CASE("spearman_rho against the oracle on random tied data") {
  std::mt19937 gen(99);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + gen() % 9;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Small integer values force frequent ties.
      a[i] = static_cast<double>(gen() % 4);
      b[i] = static_cast<double>(gen() % 4);
    }
    std::optional<double> got = spearman_rho(a, b);
    std::optional<double> want = spearman_oracle(a, b);
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(std::abs(*got - *want) < 1e-12);
  }
}

TEST_CASE("spearman_rho degenerate input") {
  CHECK(!spearman_rho({1, 1, 1}, {1, 2, 3}).has_value());
  CHECK(!spearman_rho({1, 2, 3}, {5, 5, 5}).has_value());
  CHECK_THROWS_AS(spearman_rho({1, 2}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(spearman_rho({1}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(spearman_rho({}, {}), std::invalid_argument);
}

TEST_CASE("spearman_rho symmetry and monotone invariance") {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 3 + gen() % 6;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(gen() % 100);
      b[i] = static_cast<double>(gen() % 100);
    }
    std::optional<double> ab = spearman_rho(a, b);
    std::optional<double> ba = spearman_rho(b, a);
    REQUIRE(ab.has_value() == ba.has_value());
    if (!ab) continue;
    CHECK(*ab == doctest::Approx(*ba).epsilon(1e-12));
    // Strictly increasing transforms preserve ranks exactly.
    std::vector<double> a2(n);
    for (std::size_t i = 0; i < n; ++i) a2[i] = 3.0 * a[i] + 17.0;
    CHECK(spearman_rho(a2, b).value() == doctest::Approx(*ab).epsilon(1e-12));
  }
}

TEST_CASE("mean_rank_correlation aggregates per document") {
  std::map<std::string, std::vector<double>> pred = {
      {"d1", {1, 2, 3}},       // perfect
      {"d2", {3, 2, 1}},       // inverted
      {"d3", {1}},             // too short, excluded
      {"d4", {2, 2}},          // zero variance, excluded
  };
  std::map<std::string, std::vector<double>> gold = {
      {"d1", {1, 2, 3}}, {"d2", {1, 2, 3}}, {"d3", {1}}, {"d4", {1, 2}}};
  RankingReport r = mean_rank_correlation(pred, gold);
  CHECK(r.n_excluded == 2);
  REQUIRE(r.per_document.size() == 2);
  CHECK(r.mean_rho == doctest::Approx((1.0 + -1.0) / 2.0));
  CHECK(!r.positive_correlation);
}

TEST_CASE("perfect agreement sets the positive-correlation flag") {
  std::map<std::string, std::vector<double>> pred = {{"d1", {1, 2, 3, 4}},
                                                     {"d2", {2, 1, 3}}};
  RankingReport r = mean_rank_correlation(pred, pred);
  CHECK(r.mean_rho == doctest::Approx(1.0));
  CHECK(r.positive_correlation);
}

TEST_CASE("mean rho exactly at the threshold does not count as positive") {
  // gold (1,2,3,4) vs pred (2,3,1,4): rank covariance 2.0, variances 5,
  // so rho = 2/sqrt(25) which is exactly 0.4 in double precision.
  std::map<std::string, std::vector<double>> pred = {{"d1", {2, 3, 1, 4}}};
  std::map<std::string, std::vector<double>> gold = {{"d1", {1, 2, 3, 4}}};
  RankingReport r = mean_rank_correlation(pred, gold);
  CHECK(r.mean_rho == 0.4);
  CHECK(!r.positive_correlation);
}

TEST_CASE("mean_rank_correlation input validation") {
  std::map<std::string, std::vector<double>> pred = {{"d1", {1, 2}}};
  std::map<std::string, std::vector<double>> gold = {{"d2", {1, 2}}};
  CHECK_THROWS_AS(mean_rank_correlation(pred, gold), DataError);
  std::map<std::string, std::vector<double>> short_gold = {{"d1", {1}}};
  CHECK_THROWS_AS(mean_rank_correlation(pred, short_gold), DataError);
}
