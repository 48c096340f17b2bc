#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netml/evaluation.hpp"
#include "netml/pipeline.hpp"

namespace netml {

/// Seeded shuffle, then round-robin: returns the fold of each of n items.
/// Fold sizes differ by at most one. Throws Config unless 1 <= folds <= n.
std::vector<std::size_t> assign_folds(std::size_t n, std::size_t folds, std::uint64_t seed);

struct TuningOptions {
  bool enabled = false;
  std::vector<double> alpha_grid{1e-3, 1e-2, 1e-1, 1.0, 10.0};
  std::vector<double> beta_grid{1e-3, 1e-2, 1e-1, 1.0, 10.0};
  std::size_t inner_folds = 10;  // clamped to the training-set size (leave-one-out)
};

struct CvOptions {
  std::size_t folds = 10;
  TuningOptions tuning;
};

struct BugEvaluation {
  std::string bug_id;
  std::size_t fold = 0;
  double average_precision = 0.0;
  std::size_t best_rank = 0;
  double alpha = 0.0;  // hyperparameters used for this query (netml)
  double beta = 0.0;
};

struct EvalReport {
  std::string model;
  std::string mode;  // "cross-validation" or "cross-project"
  std::uint64_t seed = 0;
  std::size_t folds = 0;
  std::vector<BugEvaluation> bugs;  // ascending bug id

  std::size_t top_n(std::size_t n) const;
  double top_n_proportion(std::size_t n) const;
  double map() const;
  /// MAP per fold, indexed by fold.
  std::vector<double> fold_map() const;
  std::vector<BugResult> bug_results() const;
};

/// Evaluates every labeled bug as a query; in each fold the other folds'
/// bugs are the history. With tuning enabled, (alpha, beta) for a fold is
/// the grid point with the best inner cross-validation MAP on its training
/// bugs (first grid point wins ties).
EvalReport cross_validate(const Project& project, const ModelConfig& config, const CvOptions& options);

/// Every labeled source bug is history; every labeled target bug is a query.
EvalReport cross_project(const Project& source, const Project& target, const ModelConfig& config);

enum class Pairing { kPerBug, kPerFold };
std::string_view to_string(Pairing pairing);
Pairing parse_pairing(std::string_view text);

struct Comparison {
  std::string model;     // the reference model (first report)
  std::string baseline;
  Pairing pairing = Pairing::kPerBug;
  std::optional<WilcoxonResult> wilcoxon;  // empty when too few pairs
  double p_adjusted = 1.0;
  DeltaAnalysis delta;
};

/// Tests reports[0] against each later report (H1: reports[0] has higher
/// AP), with Benjamini-Hochberg adjustment across the comparisons.
std::vector<Comparison> compare(const std::vector<EvalReport>& reports, Pairing pairing);

/// JSON document with per-model summaries, per-bug rows and comparisons.
void write_report_json(std::ostream& out, const std::vector<EvalReport>& reports,
                       const std::vector<Comparison>& comparisons);
/// "model,bugs,top1,top1_pct,top5,top5_pct,top10,top10_pct,map"
void write_summary_csv(std::ostream& out, const std::vector<EvalReport>& reports);
/// "model,bug_id,fold,average_precision,best_rank,alpha,beta"
void write_per_bug_csv(std::ostream& out, const std::vector<EvalReport>& reports);
/// "model,baseline,pairing,n,statistic,p_value,p_adjusted,improved,deteriorated,unchanged,..."
void write_comparisons_csv(std::ostream& out, const std::vector<Comparison>& comparisons);

}  // namespace netml
