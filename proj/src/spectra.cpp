#include "netml/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "netml/error.hpp"

namespace netml {

bool ExecutionTrace::executes(std::string_view method) const {
  return std::binary_search(executed.begin(), executed.end(), method,
                            [](std::string_view a, std::string_view b) { return a < b; });
}

void ProgramSpectra::add_trace(ExecutionTrace trace) {
  std::sort(trace.executed.begin(), trace.executed.end());
  trace.executed.erase(std::unique(trace.executed.begin(), trace.executed.end()), trace.executed.end());
  if (trace.outcome == Outcome::kFail) {
    ++n_fail_;
  } else {
    ++n_pass_;
  }
  traces_.push_back(std::move(trace));
}

void ProgramSpectra::validate(const std::vector<std::string>& known_methods) const {
  if (n_fail_ == 0)
    throw Error(ErrorCode::kMalformedSpectra, "bug '" + bug_id_ + "' has no failing trace");
  if (known_methods.empty()) return;
  std::vector<std::string> known = known_methods;
  std::sort(known.begin(), known.end());
  for (const auto& trace : traces_) {
    for (const auto& method : trace.executed) {
      if (!std::binary_search(known.begin(), known.end(), method))
        throw Error(ErrorCode::kMalformedSpectra, "bug '" + bug_id_ + "' trace '" + trace.test_id +
                                                      "' executes unknown method '" + method + "'");
    }
  }
}

RawStats raw_stats(std::string_view method, const ProgramSpectra& spectra) {
  RawStats stats;
  for (const auto& trace : spectra.traces()) {
    const bool hit = trace.executes(method);
    if (trace.outcome == Outcome::kFail) {
      ++(hit ? stats.failed_executed : stats.failed_not_executed);
    } else {
      ++(hit ? stats.passed_executed : stats.passed_not_executed);
    }
  }
  return stats;
}

std::map<std::string, RawStats> raw_stats_all(const std::vector<std::string>& methods,
                                              const ProgramSpectra& spectra) {
  std::unordered_map<std::string_view, std::pair<std::size_t, std::size_t>> hits;
  for (const auto& trace : spectra.traces()) {
    for (const auto& method : trace.executed) {
      auto& [failed, passed] = hits[method];
      ++(trace.outcome == Outcome::kFail ? failed : passed);
    }
  }
  std::map<std::string, RawStats> out;
  for (const auto& method : methods) {
    RawStats stats;
    if (auto it = hits.find(method); it != hits.end()) {
      stats.failed_executed = it->second.first;
      stats.passed_executed = it->second.second;
    }
    stats.failed_not_executed = spectra.n_fail() - stats.failed_executed;
    stats.passed_not_executed = spectra.n_pass() - stats.passed_executed;
    out.emplace(method, stats);
  }
  return out;
}

namespace {

void require_failing(const RawStats& stats) {
  if (stats.total_failed() == 0)
    throw Error(ErrorCode::kMalformedSpectra, "spectra without failing traces");
}

}  // namespace

double tarantula(const RawStats& stats) {
  require_failing(stats);
  const double fail_ratio =
      static_cast<double>(stats.failed_executed) / static_cast<double>(stats.total_failed());
  const double pass_ratio =
      stats.total_passed() == 0
          ? 0.0
          : static_cast<double>(stats.passed_executed) / static_cast<double>(stats.total_passed());
  const double denom = fail_ratio + pass_ratio;
  return denom == 0.0 ? 0.0 : fail_ratio / denom;
}

double tarantula(std::string_view method, const ProgramSpectra& spectra) {
  return tarantula(raw_stats(method, spectra));
}

double ochiai(const RawStats& stats) {
  require_failing(stats);
  if (stats.failed_executed == 0) return 0.0;
  const double denom = std::sqrt(static_cast<double>(stats.total_failed()) *
                                 static_cast<double>(stats.failed_executed + stats.passed_executed));
  return static_cast<double>(stats.failed_executed) / denom;
}

double dstar(const RawStats& stats, int star) {
  require_failing(stats);
  if (star < 1) throw Error(ErrorCode::kConfig, "D* exponent must be a positive integer");
  const double numer = std::pow(static_cast<double>(stats.failed_executed), star);
  const double denom = static_cast<double>(stats.passed_executed + stats.failed_not_executed);
  if (denom == 0.0) return numer > 0.0 ? kRankFirstScore : 0.0;
  return numer / denom;
}

double suspiciousness(SpectrumFormula formula, const RawStats& stats, int star) {
  switch (formula) {
    case SpectrumFormula::kTarantula: return tarantula(stats);
    case SpectrumFormula::kOchiai: return ochiai(stats);
    case SpectrumFormula::kDStar: return dstar(stats, star);
  }
  return 0.0;
}

}  // namespace netml
