// SPDX-License-Identifier: Apache-2.0
#pragma once

// Clinical data model: certificates (one per patient visit) hold free-form
// findings text plus the gold treatment plan, a priority-ordered list of
// problems. Corpora and label catalogs are stored as JSON Lines, one object
// per line, with keys in a fixed (alphabetical) order so that files
// round-trip byte for byte.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ortho {

struct Problem {
  std::string surface_text;  // verbatim wording from the certificate
  std::string class_id;      // canonical treatment class
  std::uint32_t priority = 0;  // 1 is most urgent; unique within a plan
};

struct Certificate {
  std::string id;
  std::string findings_text;
  std::vector<Problem> problems;
};

using Corpus = std::vector<Certificate>;

// Maps class ids to display names and, optionally, to coarser grouped
// classes. A grouping must be idempotent: the target of any mapping is
// mapped to itself (or not mapped at all, which means the same thing).
class LabelCatalog {
 public:
  std::map<std::string, std::string> classes;   // class_id -> display name
  std::map<std::string, std::string> grouping;  // class_id -> grouped id

  const std::string& name_of(const std::string& class_id) const;
  // Returns the grouped id, or class_id itself when no mapping exists.
  const std::string& group_of(const std::string& class_id) const;
  bool has_class(const std::string& class_id) const;

  // Checks that every grouping target is a known class and that applying
  // the grouping twice equals applying it once. Throws DataError.
  void validate() const;
};

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

struct CorpusStats {
  std::size_t n_certificates = 0;
  std::size_t n_problems = 0;
  double mean_problems_per_certificate = 0.0;
  std::size_t n_distinct_labels = 0;
  std::map<std::string, std::size_t> label_counts;
};

// Structural checks on one record: nonempty id and class ids, priorities
// positive and unique within the plan. Throws DataError.
void validate_certificate(const Certificate& cert);

// JSONL round trip. Loaders report the 1-based line number on error and
// reject duplicate ids, unknown keys, and missing or mistyped fields.
Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

LabelCatalog load_catalog(const std::string& path);
void save_catalog(const LabelCatalog& catalog, const std::string& path);

// Rewrites every problem's class_id through catalog.group_of. Any class id
// absent from the catalog is an error.
Corpus apply_grouping(const Corpus& corpus, const LabelCatalog& catalog);

// Deterministic shuffled split by certificate id. Ratios must be positive
// and sum to 1; part sizes follow the largest-remainder rule so they add
// up to the corpus size exactly.
Split split_corpus(const Corpus& corpus, const std::array<double, 3>& ratios,
                   std::uint64_t seed);

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace ortho
