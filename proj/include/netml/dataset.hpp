#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "netml/corpus.hpp"
#include "netml/features.hpp"
#include "netml/graphs.hpp"
#include "netml/spectra.hpp"

namespace netml {

using GroundTruth = std::map<std::string, std::set<std::string>>;

// Newline-delimited JSON readers. Blank lines are skipped; a malformed line
// raises MalformedInput naming `source` and the 1-based line number.

/// {"id", "kind", "fields": {name: text}}; "kind" may be omitted, in which
/// case `expected` is used, otherwise it must equal `expected`.
std::vector<RawDocument> read_documents(std::istream& in, DocumentKind expected,
                                        const std::string& source = "<stream>");

/// {"bug_id", "test_id", "outcome": "pass"|"fail", "executed": [ids]}, one trace per line.
std::map<std::string, ProgramSpectra> read_spectra(std::istream& in, const std::string& source = "<stream>");

/// {"bug_id", "faulty_methods": [ids]}
GroundTruth read_ground_truth(std::istream& in, const std::string& source = "<stream>");

struct DatasetPaths {
  std::filesystem::path bugs;
  std::filesystem::path methods;
  std::filesystem::path spectra;
  std::filesystem::path ground_truth;  // optional; empty path means no labels
};

struct ProjectOptions {
  PreprocessConfig preprocess = PreprocessConfig::defaults();
  SparsifyRule sparsify;
};

/// One software project: preprocessed corpus, spectra, labels, the full
/// feature tensor and both similarity graphs. Bugs and methods are held in
/// ascending id order regardless of input order.
struct Project {
  std::string name;
  ProjectOptions options;
  CorpusBuild corpus;
  std::map<std::string, ProgramSpectra> spectra;
  GroundTruth ground_truth;
  FeatureTensor tensor;  // rows follow corpus.bugs, columns corpus.methods
  std::shared_ptr<const SimilarityGraph> bug_graph;
  std::shared_ptr<const SimilarityGraph> method_graph;

  /// Validates ids and cross references: duplicate ids (MalformedInput),
  /// bugs without spectra (MissingSpectra), traces naming unknown methods
  /// (MalformedSpectra), ground truth naming unknown bugs (UnknownId) or
  /// unknown methods (MissingFaulty). Bugs without ground truth stay unlabeled.
  static Project build(std::string name, std::vector<RawDocument> methods, std::vector<RawDocument> bugs,
                       std::map<std::string, ProgramSpectra> spectra, GroundTruth ground_truth,
                       const ProjectOptions& options = {});

  static Project load(std::string name, const DatasetPaths& paths, const ProjectOptions& options = {});

  const std::vector<std::string>& bug_ids() const { return tensor.bugs; }
  const std::vector<std::string>& method_ids() const { return tensor.methods; }
  bool is_labeled(const std::string& bug_id) const { return ground_truth.contains(bug_id); }
  /// Throws MissingLabels when the bug has no ground truth.
  const std::set<std::string>& faulty(const std::string& bug_id) const;
  /// Throws UnknownId.
  const Document& bug(const std::string& bug_id) const;
};

}  // namespace netml
