#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace netml {

enum class Outcome { kPass, kFail };

struct ExecutionTrace {
  std::string test_id;
  Outcome outcome = Outcome::kPass;
  std::vector<std::string> executed;  // sorted, unique method ids

  bool executes(std::string_view method) const;
};

/// Pass/fail execution traces recorded for one bug.
class ProgramSpectra {
 public:
  ProgramSpectra() = default;
  explicit ProgramSpectra(std::string bug_id) : bug_id_(std::move(bug_id)) {}

  /// Sorts and deduplicates the executed set.
  void add_trace(ExecutionTrace trace);

  const std::string& bug_id() const noexcept { return bug_id_; }
  const std::vector<ExecutionTrace>& traces() const noexcept { return traces_; }
  std::size_t n_fail() const noexcept { return n_fail_; }
  std::size_t n_pass() const noexcept { return n_pass_; }

  /// Throws MalformedSpectra when there is no failing trace or a trace
  /// executes a method outside known_methods (skipped when empty).
  void validate(const std::vector<std::string>& known_methods = {}) const;

 private:
  std::string bug_id_;
  std::vector<ExecutionTrace> traces_;
  std::size_t n_fail_ = 0;
  std::size_t n_pass_ = 0;
};

/// Contingency counts for one element (Table-1 layout).
struct RawStats {
  std::size_t failed_executed = 0;       // n_f(e)
  std::size_t passed_executed = 0;       // n_s(e)
  std::size_t failed_not_executed = 0;   // n_f(~e)
  std::size_t passed_not_executed = 0;   // n_s(~e)

  std::size_t total_failed() const { return failed_executed + failed_not_executed; }
  std::size_t total_passed() const { return passed_executed + passed_not_executed; }

  friend bool operator==(const RawStats&, const RawStats&) = default;
};

RawStats raw_stats(std::string_view method, const ProgramSpectra& spectra);

/// raw_stats for every listed method in one pass over the traces.
std::map<std::string, RawStats> raw_stats_all(const std::vector<std::string>& methods,
                                              const ProgramSpectra& spectra);

/// Tarantula suspiciousness in [0, 1]. With no passing traces the pass ratio
/// is taken as 0; an element executed by no trace scores 0.
double tarantula(const RawStats& stats);
double tarantula(std::string_view method, const ProgramSpectra& spectra);

/// Ochiai: n_f(e) / sqrt(n_f(p) * (n_f(e) + n_s(e))).
double ochiai(const RawStats& stats);

/// D*: n_f(e)^star / (n_s(e) + n_f(~e)). A zero denominator with a positive
/// numerator yields kRankFirstScore.
double dstar(const RawStats& stats, int star = 2);

/// Finite surrogate for an infinite suspiciousness score.
inline constexpr double kRankFirstScore = 1.7976931348623157e308;

enum class SpectrumFormula { kTarantula, kOchiai, kDStar };

double suspiciousness(SpectrumFormula formula, const RawStats& stats, int star = 2);

}  // namespace netml
