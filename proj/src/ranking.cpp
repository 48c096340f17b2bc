#include "netml/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "netml/csv.hpp"
#include "netml/error.hpp"

namespace netml {

RankedList rank_methods(std::string bug_id, const std::vector<std::string>& method_ids,
                        const std::vector<double>& scores) {
  if (method_ids.size() != scores.size())
    throw Error(ErrorCode::kMalformedInput, "ranking needs one score per method");
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (std::isnan(scores[i]))
      throw Error(ErrorCode::kNonFiniteState, "NaN score for method '" + method_ids[i] + "' of bug '" + bug_id + "'");

  std::vector<std::size_t> order(method_ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return method_ids[a] < method_ids[b];
  });

  RankedList list{std::move(bug_id), {}};
  list.entries.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r)
    list.entries.push_back({r + 1, method_ids[order[r]], scores[order[r]]});
  return list;
}

void write_ranked_csv(std::ostream& out, const RankedList& list, bool header) {
  if (header) csv::write_row(out, {"bug_id", "rank", "method_id", "score"});
  for (const auto& e : list.entries)
    csv::write_row(out, {list.bug_id, std::to_string(e.rank), e.method_id, csv::format_double(e.score)});
}

}  // namespace netml
