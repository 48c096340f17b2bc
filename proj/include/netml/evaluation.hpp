#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "netml/ranking.hpp"

namespace netml {

/// True iff some faulty method has rank <= n.
bool top_n_hit(const RankedList& ranked, const std::set<std::string>& faulty, std::size_t n);

/// Rank of the highest-ranked faulty method. Throws MissingFaulty if a
/// faulty method is absent from the list.
std::size_t best_faulty_rank(const RankedList& ranked, const std::set<std::string>& faulty);

/// sum_k P(k) pos(k) / sum_k pos(k). Throws MissingFaulty as above.
double average_precision(const RankedList& ranked, const std::set<std::string>& faulty);

double mean_average_precision(std::span<const double> aps);

/// Per-bug outcome of one model.
struct BugResult {
  std::string bug_id;
  double average_precision = 0.0;
  std::size_t best_rank = 0;
  std::size_t fold = 0;
};

struct DeltaClass {
  std::size_t count = 0;
  double expected_delta_ap = 0.0;    // mean(AP_A - AP_B), 0 when empty
  double expected_delta_rank = 0.0;  // mean(Rank_B - Rank_A), 0 when empty
  bool empty() const { return count == 0; }
};

struct DeltaAnalysis {
  DeltaClass improved;      // A's best faulty rank is better (lower)
  DeltaClass deteriorated;  // A's best faulty rank is worse
  DeltaClass unchanged;
};

/// Compares model A against model B bug by bug (matched on bug id).
/// Throws MalformedInput when the bug sets differ.
DeltaAnalysis delta_analysis(std::span<const BugResult> a, std::span<const BugResult> b);

struct WilcoxonResult {
  double statistic = 0.0;   // W+ (sum of ranks of positive differences)
  double p_value = 1.0;     // one-sided, H1: xs > ys
  std::size_t n = 0;        // pairs after dropping zero differences
  bool exact = false;
  bool all_zero = false;    // every difference was zero; p reported as 1
};

/// Number of nonzero pairs needed by wilcoxon_signed_rank.
inline constexpr std::size_t kWilcoxonMinPairs = 5;
/// Largest n evaluated exactly; above it the tie-corrected normal
/// approximation with continuity correction is used.
inline constexpr std::size_t kWilcoxonExactLimit = 25;

/// One-sided signed-rank test that xs tends to exceed ys. Zero differences
/// are dropped; ties get mid-ranks. Throws TooFewPairs when fewer than
/// kWilcoxonMinPairs nonzero differences remain (unless all are zero).
WilcoxonResult wilcoxon_signed_rank(std::span<const double> xs, std::span<const double> ys);

/// Benjamini-Hochberg step-up adjusted p-values, in input order.
std::vector<double> benjamini_hochberg(std::span<const double> p_values);

/// Standard normal upper tail.
double normal_upper_tail(double z);

}  // namespace netml
