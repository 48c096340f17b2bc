#include "netml/features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "netml/csv.hpp"
#include "netml/error.hpp"
#include "netml/integrator.hpp"

namespace netml {

namespace {

double tarantula_shaped(std::size_t failed_hit, std::size_t failed_total, std::size_t passed_hit,
                        std::size_t passed_total) {
  RawStats stats{failed_hit, passed_hit, failed_total - failed_hit, passed_total - passed_hit};
  return tarantula(stats);
}

}  // namespace

std::string_view feature_name(std::size_t index) {
  switch (index) {
    case kTextFeature: return "text";
    case kSpectraFeature: return "spectra";
    case kSuspWordFeature: return "suspword";
    default: return "unknown";
  }
}

double feat_text(const Document& bug, const Document& method) {
  return cosine_similarity(bug.tfidf, method.tfidf);
}

double feat_spectra(std::string_view method, const ProgramSpectra& spectra) {
  return tarantula(method, spectra);
}

double ss_word(std::string_view word, const ProgramSpectra& spectra,
               const std::map<std::string, std::set<std::string>>& method_words) {
  if (spectra.n_fail() == 0)
    throw Error(ErrorCode::kMalformedSpectra, "spectra without failing traces");
  const std::string key(word);
  std::size_t failed_hit = 0;
  std::size_t passed_hit = 0;
  for (const auto& trace : spectra.traces()) {
    const bool hit = std::any_of(trace.executed.begin(), trace.executed.end(), [&](const std::string& m) {
      auto it = method_words.find(m);
      return it != method_words.end() && it->second.count(key) != 0;
    });
    if (hit) ++(trace.outcome == Outcome::kFail ? failed_hit : passed_hit);
  }
  return tarantula_shaped(failed_hit, spectra.n_fail(), passed_hit, spectra.n_pass());
}

double sstfidf(double ss_word_value, std::string_view word, const Document& doc, const Corpus& corpus) {
  return ss_word_value * tfidf_weight(word, doc, corpus);
}

WordSuspiciousness::WordSuspiciousness(const ProgramSpectra& spectra, const Corpus& corpus,
                                       const std::vector<std::string>& method_ids,
                                       const std::vector<std::vector<std::uint32_t>>& method_terms)
    : scores_(corpus.vocabulary_size(), 0.0) {
  if (spectra.n_fail() == 0)
    throw Error(ErrorCode::kMalformedSpectra, "spectra without failing traces");
  std::unordered_map<std::string_view, std::size_t> method_index;
  for (std::size_t i = 0; i < method_ids.size(); ++i) method_index.emplace(method_ids[i], i);

  const std::size_t vocab = corpus.vocabulary_size();
  std::vector<std::size_t> failed_hit(vocab, 0);
  std::vector<std::size_t> passed_hit(vocab, 0);
  std::vector<std::size_t> last_seen(vocab, static_cast<std::size_t>(-1));
  const auto& traces = spectra.traces();
  for (std::size_t t = 0; t < traces.size(); ++t) {
    auto& counter = traces[t].outcome == Outcome::kFail ? failed_hit : passed_hit;
    for (const auto& method : traces[t].executed) {
      auto it = method_index.find(method);
      if (it == method_index.end()) continue;
      for (std::uint32_t term : method_terms[it->second]) {
        if (last_seen[term] == t) continue;
        last_seen[term] = t;
        ++counter[term];
      }
    }
  }
  for (std::size_t term = 0; term < vocab; ++term) {
    if (failed_hit[term] == 0) continue;  // score 0 without failing evidence
    scores_[term] = tarantula_shaped(failed_hit[term], spectra.n_fail(), passed_hit[term], spectra.n_pass());
  }
}

SparseVector WordSuspiciousness::reweight(const SparseVector& tfidf) const {
  SparseVector out;
  out.reserve(tfidf.size());
  for (const auto& e : tfidf) {
    const double weight = scores_[e.term] * e.weight;
    if (weight > 0.0) out.push_back({e.term, weight});
  }
  return out;
}

double feat_suspword(double method_spectra_score, const SparseVector& bug_sstfidf,
                     const SparseVector& method_sstfidf) {
  if (method_spectra_score == 0.0) return 0.0;
  return method_spectra_score * cosine_similarity(bug_sstfidf, method_sstfidf);
}

std::size_t FeatureTensor::bug_row(std::string_view bug_id) const {
  auto it = std::find(bugs.begin(), bugs.end(), bug_id);
  if (it == bugs.end()) throw Error(ErrorCode::kUnknownId, "bug '" + std::string(bug_id) + "' not in tensor");
  return static_cast<std::size_t>(it - bugs.begin());
}

void FeatureTensor::zero_column(std::size_t feature) {
  for (auto& cell : x) cell[feature] = 0.0;
}

void FeatureTensor::write_csv(std::ostream& out) const {
  csv::write_row(out, {"bug_id", "method_id", "f_text", "f_spectra", "f_suspword", "label", "weight"});
  for (std::size_t b = 0; b < bugs.size(); ++b) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const std::size_t i = index(b, m);
      const char* label = y[i] == Label::kAbsent ? "NA" : (y[i] == Label::kPositive ? "1" : "0");
      csv::write_row(out, {bugs[b], methods[m], csv::format_double(x[i][0]), csv::format_double(x[i][1]),
                           csv::format_double(x[i][2]), label, csv::format_double(w[i])});
    }
  }
}

FeatureTensor FeatureTensor::read_csv(std::istream& in) {
  const auto rows = csv::parse(in);
  if (rows.empty() || rows.front().size() != 7 || rows.front()[0] != "bug_id")
    throw Error(ErrorCode::kMalformedInput, "feature csv: missing header");
  FeatureTensor t;
  std::unordered_map<std::string, std::size_t> bug_index, method_index;
  struct Cell {
    std::size_t b, m;
    FeatureVector x;
    Label y;
    double w;
  };
  std::vector<Cell> cells;
  auto number = [](const std::string& s, std::size_t line) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::kMalformedInput, "feature csv line " + std::to_string(line) + ": bad number '" + s + "'");
    }
  };
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 7)
      throw Error(ErrorCode::kMalformedInput, "feature csv line " + std::to_string(r + 1) + ": expected 7 fields");
    auto [bi, new_bug] = bug_index.try_emplace(row[0], t.bugs.size());
    if (new_bug) t.bugs.push_back(row[0]);
    auto [mi, new_method] = method_index.try_emplace(row[1], t.methods.size());
    if (new_method) t.methods.push_back(row[1]);
    Label label;
    if (row[5] == "1") {
      label = Label::kPositive;
    } else if (row[5] == "0") {
      label = Label::kNegative;
    } else if (row[5] == "NA") {
      label = Label::kAbsent;
    } else {
      throw Error(ErrorCode::kMalformedInput, "feature csv line " + std::to_string(r + 1) + ": bad label");
    }
    cells.push_back({bi->second, mi->second,
                     {number(row[2], r + 1), number(row[3], r + 1), number(row[4], r + 1)},
                     label, number(row[6], r + 1)});
  }
  const std::size_t n = t.bugs.size() * t.methods.size();
  if (cells.size() != n) throw Error(ErrorCode::kMalformedInput, "feature csv: incomplete bug x method grid");
  t.x.assign(n, FeatureVector{});
  t.y.assign(n, Label::kAbsent);
  t.w.assign(n, 0.0);
  std::vector<bool> seen(n, false);
  for (const auto& c : cells) {
    const std::size_t i = t.index(c.b, c.m);
    if (seen[i]) throw Error(ErrorCode::kMalformedInput, "feature csv: duplicate cell");
    seen[i] = true;
    t.x[i] = c.x;
    t.y[i] = c.y;
    t.w[i] = c.w;
  }
  return t;
}

FeatureTensor build_feature_tensor(const std::vector<Document>& bugs,
                                   const std::vector<Document>& methods,
                                   const std::map<std::string, ProgramSpectra>& spectra_by_bug,
                                   const Corpus& corpus,
                                   const std::map<std::string, std::set<std::string>>& ground_truth,
                                   const std::set<std::string>& unlabeled) {
  FeatureTensor t;
  for (const auto& b : bugs) t.bugs.push_back(b.id);
  for (const auto& m : methods) t.methods.push_back(m.id);
  const std::size_t n_methods = methods.size();
  t.x.assign(bugs.size() * n_methods, FeatureVector{});
  t.y.assign(bugs.size() * n_methods, Label::kAbsent);

  std::vector<std::vector<std::uint32_t>> method_terms(n_methods);
  for (std::size_t m = 0; m < n_methods; ++m) {
    for (const auto& [word, count] : methods[m].token_counts) {
      std::uint32_t term;
      if (count > 0 && corpus.find(word, term)) method_terms[m].push_back(term);
    }
  }

  for (std::size_t b = 0; b < bugs.size(); ++b) {
    const Document& bug = bugs[b];
    auto sp = spectra_by_bug.find(bug.id);
    if (sp == spectra_by_bug.end())
      throw Error(ErrorCode::kMissingSpectra, "bug '" + bug.id + "' has no program spectra");
    const ProgramSpectra& spectra = sp->second;
    spectra.validate();

    const std::set<std::string>* faulty = nullptr;
    if (auto gt = ground_truth.find(bug.id); gt != ground_truth.end()) {
      faulty = &gt->second;
    } else if (unlabeled.count(bug.id) == 0) {
      throw Error(ErrorCode::kMissingLabels, "bug '" + bug.id + "' has no ground truth");
    }
    if (unlabeled.count(bug.id) != 0) faulty = nullptr;

    const auto stats = raw_stats_all(t.methods, spectra);
    const WordSuspiciousness words(spectra, corpus, t.methods, method_terms);
    const SparseVector bug_weighted = words.reweight(bug.tfidf);
    for (std::size_t m = 0; m < n_methods; ++m) {
      const double spectra_score = tarantula(stats.at(t.methods[m]));
      double susp = 0.0;
      if (spectra_score > 0.0) susp = feat_suspword(spectra_score, bug_weighted, words.reweight(methods[m].tfidf));
      const std::size_t i = t.index(b, m);
      t.x[i] = {feat_text(bug, methods[m]), spectra_score, susp};
      if (faulty) t.y[i] = faulty->count(t.methods[m]) ? Label::kPositive : Label::kNegative;
    }
  }

  const bool has_pos = std::find(t.y.begin(), t.y.end(), Label::kPositive) != t.y.end();
  const bool has_neg = std::find(t.y.begin(), t.y.end(), Label::kNegative) != t.y.end();
  t.w = has_pos && has_neg ? instance_weights(t.y) : std::vector<double>(t.y.size(), 0.0);
  return t;
}

}  // namespace netml
