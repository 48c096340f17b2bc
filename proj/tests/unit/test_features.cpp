#include <catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "netml/error.hpp"
#include "netml/features.hpp"

using namespace netml;
using Catch::Matchers::WithinAbs;

namespace {

constexpr Outcome F = Outcome::kFail;
constexpr Outcome P = Outcome::kPass;

}  // namespace

TEST_CASE("text feature equals the cosine of hand-computed tf-idf vectors") {
  // Three method documents; the bug is compared with the first.
  Corpus corpus;
  const TokenCounts m1{{"junit", 1}, {"runner", 1}};
  const TokenCounts m2{{"output", 1}, {"stream", 1}};
  const TokenCounts m3{{"junit", 1}, {"task", 1}};
  corpus.add(m1);
  corpus.add(m2);
  corpus.add(m3);
  const TokenCounts b{{"junit", 1}, {"output", 1}};
  const Document bug{"b", DocumentKind::kBugReport, b, corpus.vectorize(b)};
  const Document method{"m1", DocumentKind::kMethod, m1, corpus.vectorize(m1)};

  const double l2 = std::log(2.0);
  const double junit = l2 * std::log(3.0 / 2.0);
  const double output = l2 * std::log(3.0);
  const double runner = l2 * std::log(3.0);
  const double expected = junit * junit / (std::sqrt(junit * junit + output * output) * std::sqrt(junit * junit + runner * runner));
  CHECK_THAT(feat_text(bug, method), WithinAbs(expected, 1e-12));
  CHECK_THAT(feat_text(method, method), WithinAbs(1.0, 1e-12));
  const Document unrelated{"m2", DocumentKind::kMethod, m2, corpus.vectorize(m2)};
  CHECK(feat_text(Document{"x", DocumentKind::kBugReport, {{"task", 1}}, corpus.vectorize({{"task", 1}})}, unrelated) == 0.0);
}

TEST_CASE("word suspiciousness") {
  ProgramSpectra sp("b");
  sp.add_trace({"f1", F, {"m1"}});
  sp.add_trace({"f2", F, {"m2"}});
  sp.add_trace({"p1", P, {"m1"}});
  sp.add_trace({"p2", P, {}});
  const std::map<std::string, std::set<std::string>> words{
      {"m1", {"alpha", "shared"}}, {"m2", {"beta", "shared"}}, {"m3", {"gamma"}}};
  // |EF|=1 of 2, |ES|=1 of 2.
  CHECK_THAT(ss_word("alpha", sp, words), WithinAbs(0.5, 1e-15));
  CHECK(ss_word("beta", sp, words) == 1.0);
  CHECK(ss_word("gamma", sp, words) == 0.0);
  CHECK(ss_word("nowhere", sp, words) == 0.0);
  // Word in exactly one method collapses to the method's score.
  CHECK_THAT(ss_word("alpha", sp, words), WithinAbs(tarantula("m1", sp), 1e-15));
}

TEST_CASE("SSTFIDF") {
  Corpus corpus;
  corpus.add({{"w", 1}});
  for (int i = 0; i < 9; ++i) corpus.add({{"z", 1}});
  const Document d{"d", DocumentKind::kMethod, {{"w", 1}}, {}};
  CHECK_THAT(sstfidf(0.5, "w", d, corpus), WithinAbs(0.5 * std::log(2.0) * std::log(10.0), 1e-12));
  CHECK_THAT(sstfidf(0.5, "w", d, corpus), WithinAbs(0.7981, 1e-4));
  CHECK(sstfidf(0.0, "w", d, corpus) == 0.0);
  CHECK(sstfidf(0.7, "q", d, corpus) == 0.0);
}

TEST_CASE("suspicious-word feature on a two-method fixture") {
  // Methods share "common"; m1 alone holds "alpha". One failing trace runs m1, one passing trace runs m2.
  const std::vector<RawDocument> raw_methods{{"m1", DocumentKind::kMethod, {{"body", "alpha common"}}},
                                             {"m2", DocumentKind::kMethod, {{"body", "beta common"}}}};
  const std::vector<RawDocument> raw_bugs{{"b", DocumentKind::kBugReport, {{"summary", "alpha common"}}}};
  const auto build = build_corpus(raw_methods, raw_bugs, PreprocessConfig::defaults());
  std::map<std::string, ProgramSpectra> spectra;
  ProgramSpectra sp("b");
  sp.add_trace({"f", F, {"m1"}});
  sp.add_trace({"p", P, {"m2"}});
  spectra.emplace("b", sp);
  const auto t = build_feature_tensor(build.bugs, build.methods, spectra, build.corpus, {{"b", {"m1"}}});

  // Straight-line evaluation: |C|=2, alpha df=1, common df=2 (idf 0).
  // SS(alpha)=1, SS(common)=0.5, SS(beta)=0; common carries no tf-idf weight.
  // Bug SSTFIDF = {alpha: ln2*ln2}, m1 SSTFIDF = {alpha: ln2*ln2}: cosine 1.
  CHECK(t.at(0, 0)[kSpectraFeature] == 1.0);
  CHECK_THAT(t.at(0, 0)[kSuspWordFeature], WithinAbs(1.0, 1e-12));
  CHECK(t.at(0, 1)[kSpectraFeature] == 0.0);
  CHECK(t.at(0, 1)[kSuspWordFeature] == 0.0);
  CHECK_THAT(t.at(0, 0)[kTextFeature], WithinAbs(1.0, 1e-12));
  CHECK(t.y[0] == Label::kPositive);
  CHECK(t.y[1] == Label::kNegative);
  CHECK(t.w[0] == 1.0);
  CHECK(t.w[1] == 1.0);
}

TEST_CASE("suspword never exceeds the spectra feature") {
  const std::vector<RawDocument> raw_methods{{"m1", DocumentKind::kMethod, {{"body", "alpha gamma"}}},
                                             {"m2", DocumentKind::kMethod, {{"body", "beta gamma delta"}}},
                                             {"m3", DocumentKind::kMethod, {{"body", "alpha delta"}}}};
  const std::vector<RawDocument> raw_bugs{{"b", DocumentKind::kBugReport, {{"summary", "alpha beta delta"}}}};
  const auto build = build_corpus(raw_methods, raw_bugs, PreprocessConfig::defaults());
  ProgramSpectra sp("b");
  sp.add_trace({"f1", F, {"m1", "m2"}});
  sp.add_trace({"f2", F, {"m2", "m3"}});
  sp.add_trace({"p1", P, {"m1"}});
  const auto t = build_feature_tensor(build.bugs, build.methods, {{"b", sp}}, build.corpus, {}, {"b"});
  for (std::size_t m = 0; m < 3; ++m) {
    CHECK(t.at(0, m)[kSuspWordFeature] <= t.at(0, m)[kSpectraFeature] + 1e-15);
    CHECK(t.y[m] == Label::kAbsent);
    CHECK(t.w[m] == 0.0);
  }
}

TEST_CASE("tensor errors") {
  const std::vector<Document> bugs{{"b", DocumentKind::kBugReport, {}, {}}};
  const std::vector<Document> methods{{"m", DocumentKind::kMethod, {}, {}}};
  Corpus corpus;
  try {
    build_feature_tensor(bugs, methods, {}, corpus, {{"b", {"m"}}});
    FAIL();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingSpectra);
  }
  ProgramSpectra sp("b");
  sp.add_trace({"f", F, {"m"}});
  try {
    build_feature_tensor(bugs, methods, {{"b", sp}}, corpus, {});
    FAIL();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingLabels);
  }
}

TEST_CASE("feature tensor csv round trip") {
  FeatureTensor t;
  t.bugs = {"b,1", "b2"};
  t.methods = {"m\"1", "m2"};
  t.x = {{0.1, 0.2, 0.3}, {1.0 / 3.0, 0, 1}, {0, 0, 0}, {0.5, 0.25, 0.125}};
  t.y = {Label::kPositive, Label::kNegative, Label::kAbsent, Label::kAbsent};
  t.w = {1.0, 1.0, 0.0, 0.0};
  std::stringstream ss;
  t.write_csv(ss);
  const auto back = FeatureTensor::read_csv(ss);
  CHECK(back.bugs == t.bugs);
  CHECK(back.methods == t.methods);
  CHECK(back.x == t.x);
  CHECK(back.y == t.y);
  CHECK(back.w == t.w);

  FeatureTensor z = t;
  z.zero_column(kTextFeature);
  for (const auto& x : z.x) CHECK(x[kTextFeature] == 0.0);
}
