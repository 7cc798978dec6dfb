// SPDX-License-Identifier: Apache-2.0
#include "ortho/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "ortho/errors.hpp"
#include "ortho/rng.hpp"

namespace ortho {
namespace {

using nlohmann::json;

[[noreturn]] void fail_line(const std::string& path, std::size_t line,
                            const std::string& msg) {
  throw DataError(path + ":" + std::to_string(line) + ": " + msg);
}

json parse_line(const std::string& path, std::size_t line,
                const std::string& text) {
  if (text.empty()) fail_line(path, line, "empty line");
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail_line(path, line, "invalid JSON");
  if (!j.is_object()) fail_line(path, line, "expected a JSON object");
  return j;
}

std::string get_string(const json& j, const char* key, const std::string& path,
                       std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) {
    fail_line(path, line, std::string("missing field \"") + key + "\"");
  }
  if (!it->is_string()) {
    fail_line(path, line, std::string("field \"") + key + "\" must be a string");
  }
  return it->get<std::string>();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& path, std::size_t line) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail_line(path, line, "unknown field \"" + it.key() + "\"");
  }
}

Certificate certificate_from_json(const json& j, const std::string& path,
                                  std::size_t line) {
  check_keys(j, {"findings_text", "id", "problems"}, path, line);
  Certificate cert;
  cert.id = get_string(j, "id", path, line);
  cert.findings_text = get_string(j, "findings_text", path, line);
  auto it = j.find("problems");
  if (it == j.end() || !it->is_array()) {
    fail_line(path, line, "field \"problems\" must be an array");
  }
  for (const json& pj : *it) {
    if (!pj.is_object()) {
      fail_line(path, line, "each problem must be a JSON object");
    }
    check_keys(pj, {"class_id", "priority", "surface_text"}, path, line);
    Problem p;
    p.surface_text = get_string(pj, "surface_text", path, line);
    p.class_id = get_string(pj, "class_id", path, line);
    auto prio = pj.find("priority");
    if (prio == pj.end() || !prio->is_number_integer() ||
        prio->get<std::int64_t>() < 1) {
      fail_line(path, line, "field \"priority\" must be a positive integer");
    }
    p.priority = static_cast<std::uint32_t>(prio->get<std::int64_t>());
    cert.problems.push_back(std::move(p));
  }
  return cert;
}

json certificate_to_json(const Certificate& cert) {
  json problems = json::array();
  for (const Problem& p : cert.problems) {
    problems.push_back({{"class_id", p.class_id},
                        {"priority", p.priority},
                        {"surface_text", p.surface_text}});
  }
  return {{"findings_text", cert.findings_text},
          {"id", cert.id},
          {"problems", std::move(problems)}};
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot read " + path);
  return is;
}

}  // namespace

void validate_certificate(const Certificate& cert) {
  if (cert.id.empty()) throw DataError("certificate with empty id");
  std::set<std::uint32_t> seen;
  for (const Problem& p : cert.problems) {
    if (p.class_id.empty()) {
      throw DataError("certificate " + cert.id + ": empty class_id");
    }
    if (p.priority < 1) {
      throw DataError("certificate " + cert.id + ": priority must be >= 1");
    }
    if (!seen.insert(p.priority).second) {
      throw DataError("certificate " + cert.id + ": duplicate priority " +
                      std::to_string(p.priority));
    }
  }
}

Corpus load_corpus(const std::string& path) {
  std::ifstream is = open_in(path);
  Corpus corpus;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    json j = parse_line(path, lineno, line);
    Certificate cert = certificate_from_json(j, path, lineno);
    try {
      validate_certificate(cert);
    } catch (const DataError& e) {
      fail_line(path, lineno, e.what());
    }
    if (!ids.insert(cert.id).second) {
      fail_line(path, lineno, "duplicate certificate id \"" + cert.id + "\"");
    }
    corpus.push_back(std::move(cert));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream os = open_out(path);
  for (const Certificate& cert : corpus) {
    os << certificate_to_json(cert).dump() << '\n';
  }
  if (!os) throw DataError("write failed: " + path);
}

const std::string& LabelCatalog::name_of(const std::string& class_id) const {
  auto it = classes.find(class_id);
  if (it == classes.end()) {
    throw DataError("unknown class_id \"" + class_id + "\"");
  }
  return it->second;
}

const std::string& LabelCatalog::group_of(const std::string& class_id) const {
  auto it = grouping.find(class_id);
  return it == grouping.end() ? class_id : it->second;
}

bool LabelCatalog::has_class(const std::string& class_id) const {
  return classes.count(class_id) != 0;
}

void LabelCatalog::validate() const {
  for (const auto& [from, to] : grouping) {
    if (!has_class(from)) {
      throw DataError("grouping source \"" + from + "\" is not in the catalog");
    }
    if (!has_class(to)) {
      throw DataError("grouping target \"" + to + "\" is not in the catalog");
    }
    auto next = grouping.find(to);
    if (next != grouping.end() && next->second != to) {
      throw DataError("grouping is not idempotent: \"" + from + "\" -> \"" +
                      to + "\" -> \"" + next->second + "\"");
    }
  }
}

LabelCatalog load_catalog(const std::string& path) {
  std::ifstream is = open_in(path);
  LabelCatalog catalog;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    json j = parse_line(path, lineno, line);
    check_keys(j, {"class_id", "grouped_id", "name"}, path, lineno);
    std::string class_id = get_string(j, "class_id", path, lineno);
    std::string name = get_string(j, "name", path, lineno);
    if (class_id.empty()) fail_line(path, lineno, "empty class_id");
    if (!catalog.classes.emplace(class_id, name).second) {
      fail_line(path, lineno, "duplicate class_id \"" + class_id + "\"");
    }
    if (j.contains("grouped_id")) {
      catalog.grouping[class_id] = get_string(j, "grouped_id", path, lineno);
    }
  }
  try {
    catalog.validate();
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
  return catalog;
}

void save_catalog(const LabelCatalog& catalog, const std::string& path) {
  std::ofstream os = open_out(path);
  for (const auto& [class_id, name] : catalog.classes) {
    json j{{"class_id", class_id}, {"name", name}};
    auto g = catalog.grouping.find(class_id);
    if (g != catalog.grouping.end()) j["grouped_id"] = g->second;
    os << j.dump() << '\n';
  }
  if (!os) throw DataError("write failed: " + path);
}

Corpus apply_grouping(const Corpus& corpus, const LabelCatalog& catalog) {
  catalog.validate();
  Corpus out = corpus;
  for (Certificate& cert : out) {
    for (Problem& p : cert.problems) {
      if (!catalog.has_class(p.class_id)) {
        throw DataError("certificate " + cert.id + ": class_id \"" +
                        p.class_id + "\" is not in the catalog");
      }
      p.class_id = catalog.group_of(p.class_id);
    }
  }
  return out;
}

Split split_corpus(const Corpus& corpus, const std::array<double, 3>& ratios,
                   std::uint64_t seed) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) {
      throw std::invalid_argument("split ratios must be positive");
    }
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split ratios must sum to 1");
  }
  const std::size_t n = corpus.size();
  if (n < 3) throw DataError("corpus too small to split (need >= 3 records)");

  // Largest-remainder apportionment: floor the exact shares, then hand the
  // leftover records to the parts with the largest fractional shares.
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double share = ratios[i] * static_cast<double>(n);
    sizes[i] = static_cast<std::size_t>(std::floor(share));
    frac[i] = share - std::floor(share);
    assigned += sizes[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; assigned + k < n; ++k) {
    sizes[order[k % 3]] += 1;
  }

  std::vector<std::string> ids;
  ids.reserve(n);
  for (const Certificate& cert : corpus) ids.push_back(cert.id);
  Rng rng(seed);
  rng.shuffle(ids);

  Split split;
  auto it = ids.begin();
  split.train.assign(it, it + sizes[0]);
  it += sizes[0];
  split.validation.assign(it, it + sizes[1]);
  it += sizes[1];
  split.test.assign(it, it + sizes[2]);
  return split;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.n_certificates = corpus.size();
  for (const Certificate& cert : corpus) {
    stats.n_problems += cert.problems.size();
    for (const Problem& p : cert.problems) {
      stats.label_counts[p.class_id] += 1;
    }
  }
  stats.n_distinct_labels = stats.label_counts.size();
  if (!corpus.empty()) {
    stats.mean_problems_per_certificate =
        static_cast<double>(stats.n_problems) /
        static_cast<double>(stats.n_certificates);
  }
  return stats;
}

}  // namespace ortho
