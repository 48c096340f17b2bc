#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace netml {

struct RankedEntry {
  std::size_t rank = 0;  // 1-based
  std::string method_id;
  double score = 0.0;
};

/// Methods for one bug, ranks contiguous from 1, scores non-increasing.
struct RankedList {
  std::string bug_id;
  std::vector<RankedEntry> entries;
};

/// Sorts by descending score, ascending method id among equal scores.
/// Scores must be finite (NaN rejected with NonFiniteState).
RankedList rank_methods(std::string bug_id, const std::vector<std::string>& method_ids,
                        const std::vector<double>& scores);

/// CSV "bug_id,rank,method_id,score" rows (header written when requested).
void write_ranked_csv(std::ostream& out, const RankedList& list, bool header = true);

}  // namespace netml
