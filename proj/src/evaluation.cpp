#include "netml/evaluation.hpp"

#include <algorithm>
#include <map>

#include "netml/error.hpp"

namespace netml {

namespace {

void require_faulty(const std::set<std::string>& faulty) {
  if (faulty.empty()) throw Error(ErrorCode::kMissingFaulty, "bug has no faulty methods");
}

}  // namespace

bool top_n_hit(const RankedList& ranked, const std::set<std::string>& faulty, std::size_t n) {
  require_faulty(faulty);
  for (const auto& e : ranked.entries) {
    if (e.rank > n) break;
    if (faulty.contains(e.method_id)) return true;
  }
  return false;
}

std::size_t best_faulty_rank(const RankedList& ranked, const std::set<std::string>& faulty) {
  require_faulty(faulty);
  std::size_t best = 0;
  std::size_t found = 0;
  for (const auto& e : ranked.entries) {
    if (!faulty.contains(e.method_id)) continue;
    if (found++ == 0) best = e.rank;
  }
  if (found != faulty.size())
    throw Error(ErrorCode::kMissingFaulty, "faulty method missing from ranking of bug '" + ranked.bug_id + "'");
  return best;
}

double average_precision(const RankedList& ranked, const std::set<std::string>& faulty) {
  require_faulty(faulty);
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t k = 0; k < ranked.entries.size(); ++k) {
    if (!faulty.contains(ranked.entries[k].method_id)) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  if (hits != faulty.size())
    throw Error(ErrorCode::kMissingFaulty, "faulty method missing from ranking of bug '" + ranked.bug_id + "'");
  return sum / static_cast<double>(hits);
}

double mean_average_precision(std::span<const double> aps) {
  if (aps.empty()) throw Error(ErrorCode::kMalformedInput, "MAP of an empty collection");
  double sum = 0.0;
  for (double ap : aps) sum += ap;
  return sum / static_cast<double>(aps.size());
}

DeltaAnalysis delta_analysis(std::span<const BugResult> a, std::span<const BugResult> b) {
  std::map<std::string, const BugResult*> by_id;
  for (const auto& r : b) by_id.emplace(r.bug_id, &r);
  if (by_id.size() != a.size() || b.size() != a.size())
    throw Error(ErrorCode::kMalformedInput, "delta analysis needs the same bugs in both results");

  struct Acc {
    std::size_t n = 0;
    double ap = 0.0;
    double rank = 0.0;
  };
  Acc improved, deteriorated, unchanged;
  // Sum in bug-id order so the result does not depend on input order.
  std::map<std::string, const BugResult*> a_sorted;
  for (const auto& r : a) a_sorted.emplace(r.bug_id, &r);
  for (const auto& [id, ra] : a_sorted) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error(ErrorCode::kMalformedInput, "bug '" + id + "' missing from second result");
    const BugResult& rb = *it->second;
    Acc& acc = ra->best_rank < rb.best_rank ? improved : ra->best_rank > rb.best_rank ? deteriorated : unchanged;
    ++acc.n;
    acc.ap += ra->average_precision - rb.average_precision;
    acc.rank += static_cast<double>(rb.best_rank) - static_cast<double>(ra->best_rank);
  }
  auto finish = [](const Acc& acc) {
    DeltaClass c;
    c.count = acc.n;
    if (acc.n > 0) {
      c.expected_delta_ap = acc.ap / static_cast<double>(acc.n);
      c.expected_delta_rank = acc.rank / static_cast<double>(acc.n);
    }
    return c;
  };
  return DeltaAnalysis{finish(improved), finish(deteriorated), finish(unchanged)};
}

}  // namespace netml
