#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "netml/corpus.hpp"
#include "netml/spectra.hpp"

namespace netml {

inline constexpr std::size_t kNumFeatures = 3;

/// [text, spectra, suspword] for one bug-method pair.
using FeatureVector = std::array<double, kNumFeatures>;

enum FeatureIndex : std::size_t { kTextFeature = 0, kSpectraFeature = 1, kSuspWordFeature = 2 };

std::string_view feature_name(std::size_t index);

enum class Label : std::int8_t { kNegative = 0, kPositive = 1, kAbsent = -1 };

/// Cosine of the bug and method TF-IDF vectors (same corpus).
double feat_text(const Document& bug, const Document& method);

/// Tarantula of the method under the bug's spectra.
double feat_spectra(std::string_view method, const ProgramSpectra& spectra);

/// Word-level suspiciousness from the traces that touch a method containing
/// the word; Tarantula-shaped with the same 0-conventions.
double ss_word(std::string_view word, const ProgramSpectra& spectra,
               const std::map<std::string, std::set<std::string>>& method_words);

/// SS_word(w) * log(f(w,d)+1) * log(|C|/df(w)).
double sstfidf(double ss_word_value, std::string_view word, const Document& doc,
               const Corpus& corpus);

/// Per-term SS_word for one spectra, indexed by corpus term id.
class WordSuspiciousness {
 public:
  /// method_terms[i] holds the corpus term ids of method_ids[i].
  WordSuspiciousness(const ProgramSpectra& spectra, const Corpus& corpus,
                     const std::vector<std::string>& method_ids,
                     const std::vector<std::vector<std::uint32_t>>& method_terms);

  double score(std::uint32_t term) const { return scores_[term]; }

  /// TF-IDF vector reweighted by SS_word per term.
  SparseVector reweight(const SparseVector& tfidf) const;

 private:
  std::vector<double> scores_;
};

/// Tarantula(m) times the cosine of the SSTFIDF vectors of bug and method.
double feat_suspword(double method_spectra_score, const SparseVector& bug_sstfidf,
                     const SparseVector& method_sstfidf);

/// Dense bug x method grid of features, labels and instance weights.
struct FeatureTensor {
  std::vector<std::string> bugs;
  std::vector<std::string> methods;
  std::vector<FeatureVector> x;  // row-major, bugs.size() * methods.size()
  std::vector<Label> y;
  std::vector<double> w;

  std::size_t index(std::size_t bug, std::size_t method) const {
    return bug * methods.size() + method;
  }
  const FeatureVector& at(std::size_t bug, std::size_t method) const { return x[index(bug, method)]; }

  std::size_t bug_row(std::string_view bug_id) const;  // throws UnknownId

  /// Sets one feature column to zero everywhere.
  void zero_column(std::size_t feature);

  void write_csv(std::ostream& out) const;
  static FeatureTensor read_csv(std::istream& in);
};

/// Assembles features for every bug row. Bugs in `unlabeled` may lack ground
/// truth (query rows, labels kAbsent); every other bug must have it.
/// Instance weights are computed over the labeled cells when both classes
/// are present, otherwise left at 0.
FeatureTensor build_feature_tensor(const std::vector<Document>& bugs,
                                   const std::vector<Document>& methods,
                                   const std::map<std::string, ProgramSpectra>& spectra_by_bug,
                                   const Corpus& corpus,
                                   const std::map<std::string, std::set<std::string>>& ground_truth,
                                   const std::set<std::string>& unlabeled = {});

}  // namespace netml
