#include <catch_amalgamated.hpp>

#include "netml/error.hpp"
#include "netml/rng.hpp"
#include "netml/spectra.hpp"
#include "oracles.hpp"

using namespace netml;
using Catch::Matchers::WithinAbs;

namespace {

ProgramSpectra spectra_of(std::initializer_list<std::pair<Outcome, std::vector<std::string>>> traces) {
  ProgramSpectra sp("bug");
  int i = 0;
  for (const auto& [outcome, executed] : traces) sp.add_trace({"t" + std::to_string(i++), outcome, executed});
  return sp;
}

constexpr Outcome F = Outcome::kFail;
constexpr Outcome P = Outcome::kPass;

}  // namespace

TEST_CASE("raw statistics") {
  auto sp = spectra_of({{F, {"e"}}, {F, {"e"}}, {P, {}}, {P, {}}, {P, {}}});
  CHECK(raw_stats("e", sp) == RawStats{2, 0, 0, 3});
  CHECK(raw_stats("other", sp) == RawStats{0, 0, 2, 3});
  auto mixed = spectra_of({{F, {"e"}}, {F, {}}, {P, {"e"}}, {P, {}}});
  CHECK(raw_stats("e", mixed) == RawStats{1, 1, 1, 1});
}

TEST_CASE("raw statistics reconcile with the trace margins") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    ProgramSpectra sp("b");
    const std::size_t n = 1 + rng.below(12);
    for (std::size_t t = 0; t < n; ++t) {
      std::vector<std::string> ex;
      for (const char* m : {"a", "b", "c"})
        if (rng.uniform() < 0.5) ex.push_back(m);
      sp.add_trace({"t" + std::to_string(t), t == 0 || rng.uniform() < 0.4 ? F : P, ex});
    }
    for (const char* m : {"a", "b", "c"}) {
      const RawStats s = raw_stats(m, sp);
      CHECK(s.total_failed() == sp.n_fail());
      CHECK(s.total_passed() == sp.n_pass());
    }
  }
}

TEST_CASE("tarantula examples") {
  CHECK(tarantula(RawStats{2, 0, 0, 3}) == 1.0);
  CHECK(tarantula(RawStats{0, 2, 2, 0}) == 0.0);
  CHECK_THAT(tarantula(RawStats{1, 1, 1, 1}), WithinAbs(0.5, 1e-15));
  // No passing traces at all: the pass ratio counts as 0.
  CHECK(tarantula(RawStats{1, 0, 1, 0}) == 1.0);
  // Executed by nothing.
  CHECK(tarantula(RawStats{0, 0, 2, 2}) == 0.0);
  CHECK_THROWS_AS(tarantula(RawStats{0, 1, 0, 1}), Error);
}

TEST_CASE("tarantula is invariant to duplicating every trace") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const RawStats s{1 + rng.below(4), rng.below(4), rng.below(4), rng.below(4)};
    const RawStats d{2 * s.failed_executed, 2 * s.passed_executed, 2 * s.failed_not_executed,
                     2 * s.passed_not_executed};
    CHECK_THAT(tarantula(d), WithinAbs(tarantula(s), 1e-15));
  }
}

TEST_CASE("tarantula is monotone in failing and passing coverage") {
  for (std::size_t f = 0; f < 4; ++f)
    for (std::size_t p = 0; p < 4; ++p) {
      const RawStats s{f, p, 4 - f, 4 - p};
      if (f < 4) CHECK(tarantula(RawStats{f + 1, p, 3 - f, 4 - p}) >= tarantula(s));
      if (p < 4) CHECK(tarantula(RawStats{f, p + 1, 4 - f, 3 - p}) <= tarantula(s));
    }
}

TEST_CASE("ochiai and dstar examples") {
  CHECK_THAT(ochiai(RawStats{2, 0, 0, 3}), WithinAbs(1.0, 1e-15));
  CHECK_THAT(ochiai(RawStats{1, 1, 1, 1}), WithinAbs(0.5, 1e-15));
  CHECK_THAT(dstar(RawStats{2, 1, 0, 0}), WithinAbs(4.0, 1e-15));
  CHECK(dstar(RawStats{2, 0, 0, 3}) == kRankFirstScore);
  CHECK(dstar(RawStats{0, 0, 2, 0}) == 0.0);
  CHECK_THAT(dstar(RawStats{2, 1, 0, 0}, 3), WithinAbs(8.0, 1e-15));
}

TEST_CASE("spectra validation") {
  auto sp = spectra_of({{P, {"a"}}});
  CHECK_THROWS_AS(sp.validate(), Error);
  auto ok = spectra_of({{F, {"a"}}, {P, {"zz"}}});
  CHECK_NOTHROW(ok.validate());
  try {
    ok.validate({"a", "b"});
    FAIL("unknown method accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMalformedSpectra);
  }
}

TEST_CASE("spectrum rankings match a brute-force reimplementation") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> methods;
    const std::size_t nm = 2 + rng.below(10);
    for (std::size_t m = 0; m < nm; ++m) methods.push_back("m" + std::to_string(m));
    ProgramSpectra sp("b");
    const std::size_t nt = 1 + rng.below(10);
    for (std::size_t t = 0; t < nt; ++t) {
      std::vector<std::string> ex;
      for (const auto& m : methods)
        if (rng.uniform() < 0.4) ex.push_back(m);
      std::sort(ex.begin(), ex.end());
      sp.add_trace({"t" + std::to_string(t), t == 0 || rng.uniform() < 0.3 ? F : P, ex});
    }
    for (bool use_ochiai : {false, true}) {
      const auto expected = oracle::spectra_ranking(sp, methods, use_ochiai);
      const auto stats = raw_stats_all(methods, sp);
      std::vector<double> scores;
      for (const auto& m : methods) scores.push_back(use_ochiai ? ochiai(stats.at(m)) : tarantula(stats.at(m)));
      std::vector<std::pair<double, std::string>> got;
      for (std::size_t i = 0; i < methods.size(); ++i) got.emplace_back(scores[i], methods[i]);
      std::sort(got.begin(), got.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].second == expected[i]);
    }
  }
}
