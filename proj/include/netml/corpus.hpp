#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace netml {

enum class DocumentKind { kBugReport, kMethod };

std::string_view to_string(DocumentKind kind);
DocumentKind parse_document_kind(std::string_view text);

/// Unprocessed document as ingested: named text segments (summary,
/// description for bug reports; name, identifiers, comments for methods).
struct RawDocument {
  std::string id;
  DocumentKind kind = DocumentKind::kMethod;
  std::vector<std::pair<std::string, std::string>> fields;

  /// All segments joined by newlines, in field order.
  std::string joined_text() const;
};

enum class Stemmer { kPorter, kNone };

struct PreprocessConfig {
  std::set<std::string> stopwords;
  std::set<std::string> keywords;
  bool keep_original_identifiers = true;
  Stemmer stemmer = Stemmer::kPorter;

  /// Built-in English stopwords and Java keywords.
  static PreprocessConfig defaults();

  /// Reads one token per line; blank lines ignored, tokens lowercased.
  static std::set<std::string> load_word_list(const std::filesystem::path& path);
};

/// Term-frequency multiset f(w, d).
using TokenCounts = std::map<std::string, int>;

/// Splits one identifier (a run of [A-Za-z0-9_]) into lowercase alphabetic
/// words. Digit runs are dropped.
std::vector<std::string> split_identifier(std::string_view identifier);

/// Normalizes, removes stopwords/keywords and stems. Compound identifiers
/// contribute their parts and, when enabled, the unstemmed original.
TokenCounts preprocess_text(std::string_view raw, const PreprocessConfig& config);

/// Porter (1980) stemmer on an ASCII-lowercase word.
std::string porter_stem(std::string_view word);

struct SparseEntry {
  std::uint32_t term = 0;
  double weight = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sparse vector sorted by ascending term id, no duplicate terms.
using SparseVector = std::vector<SparseEntry>;

double squared_norm(const SparseVector& v);

/// Cosine of two non-negative sparse vectors; 0 when either norm is 0.
double cosine_similarity(const SparseVector& a, const SparseVector& b);

/// Document-frequency index over a collection of documents.
///
/// Term ids are assigned in first-seen order. After the last add() the
/// corpus is read-only and safe to share between threads.
class Corpus {
 public:
  void add(const TokenCounts& counts);

  std::size_t size() const noexcept { return size_; }
  std::size_t vocabulary_size() const noexcept { return terms_.size(); }

  /// Documents containing the word; 0 when the word is not indexed.
  std::size_t doc_freq(std::string_view word) const;
  std::size_t doc_freq(std::uint32_t term) const { return doc_freq_[term]; }

  /// log(|C| / df(w)); 0 for words outside the index.
  double idf(std::string_view word) const;
  double idf(std::uint32_t term) const;

  bool find(std::string_view word, std::uint32_t& term) const;
  const std::string& term(std::uint32_t id) const { return terms_[id]; }

  /// TF-IDF vector of a token multiset: log(f+1) * idf per indexed word,
  /// zero weights omitted.
  SparseVector vectorize(const TokenCounts& counts) const;

 private:
  std::size_t size_ = 0;
  std::vector<std::string> terms_;
  std::vector<std::size_t> doc_freq_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Preprocessed document with its TF-IDF vector against some corpus.
struct Document {
  std::string id;
  DocumentKind kind = DocumentKind::kMethod;
  TokenCounts token_counts;
  SparseVector tfidf;

  /// tfidf keyed by word, for inspection.
  std::map<std::string, double> tfidf_by_word(const Corpus& corpus) const;
};

/// log(f(w,d)+1) * log(|C|/df(w)); 0 when w is absent from d or from C.
double tfidf_weight(std::string_view word, const Document& doc, const Corpus& corpus);

/// Builds documents and a method corpus: methods define the corpus, every
/// document (bug reports included) is vectorized against it.
struct CorpusBuild {
  Corpus corpus;
  std::vector<Document> methods;
  std::vector<Document> bugs;
};

CorpusBuild build_corpus(const std::vector<RawDocument>& methods,
                         const std::vector<RawDocument>& bugs,
                         const PreprocessConfig& config);

}  // namespace netml
