#include "netml/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "netml/default_lists.hpp"
#include "netml/error.hpp"

namespace netml {

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return is_upper(c) || is_lower(c); }
bool is_identifier_char(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }

char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

std::set<std::string> parse_word_list(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string word;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) word.push_back(to_lower(c));
    if (!word.empty()) words.insert(std::move(word));
  }
  return words;
}

bool removed(const std::string& token, const PreprocessConfig& config) {
  return config.stopwords.count(token) != 0 || config.keywords.count(token) != 0;
}

}  // namespace

std::string_view to_string(DocumentKind kind) {
  return kind == DocumentKind::kBugReport ? "bug_report" : "method";
}

DocumentKind parse_document_kind(std::string_view text) {
  if (text == "bug_report" || text == "bug") return DocumentKind::kBugReport;
  if (text == "method") return DocumentKind::kMethod;
  throw Error(ErrorCode::kMalformedInput, "unknown document kind '" + std::string(text) + "'");
}

std::string RawDocument::joined_text() const {
  std::string text;
  for (const auto& [name, segment] : fields) {
    if (!text.empty()) text.push_back('\n');
    text += segment;
  }
  return text;
}

PreprocessConfig PreprocessConfig::defaults() {
  PreprocessConfig config;
  std::istringstream stop(detail::kDefaultStopwords);
  std::istringstream keys(detail::kDefaultKeywords);
  config.stopwords = parse_word_list(stop);
  config.keywords = parse_word_list(keys);
  return config;
}

std::set<std::string> PreprocessConfig::load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open word list " + path.string());
  return parse_word_list(in);
}

std::vector<std::string> split_identifier(std::string_view identifier) {
  std::vector<std::string> parts;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) parts.push_back(std::move(current));
    current.clear();
  };
  const std::size_t n = identifier.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = identifier[i];
    if (!is_alpha(c)) {  // '_' and digit runs separate words and are dropped
      flush();
      continue;
    }
    if (!current.empty() && is_upper(c)) {
      const char prev = identifier[i - 1];
      if (is_lower(prev)) {
        flush();  // fooBar
      } else if (is_upper(prev) && i + 1 < n && is_lower(identifier[i + 1])) {
        // HTMLParser -> HTML | Parser, but JUnit stays whole.
        std::size_t run = 0;
        for (std::size_t p = i; p > 0 && is_upper(identifier[p - 1]); --p) ++run;
        if (run >= 2 && current.size() >= 2) flush();
      }
    }
    current.push_back(to_lower(c));
  }
  flush();
  return parts;
}

TokenCounts preprocess_text(std::string_view raw, const PreprocessConfig& config) {
  TokenCounts counts;
  auto emit = [&](const std::string& token, bool stem) {
    if (token.empty() || removed(token, config)) return;
    if (stem && config.stemmer == Stemmer::kPorter) {
      std::string stemmed = porter_stem(token);
      if (!stemmed.empty()) ++counts[stemmed];
    } else {
      ++counts[token];
    }
  };

  std::size_t i = 0;
  while (i < raw.size()) {
    if (!is_identifier_char(raw[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < raw.size() && is_identifier_char(raw[i])) ++i;
    if (is_digit(raw[start])) continue;  // number literal such as 42, 0x1F, 3L
    const std::vector<std::string> parts = split_identifier(raw.substr(start, i - start));
    for (const auto& part : parts) emit(part, true);
    if (config.keep_original_identifiers && parts.size() > 1) {
      std::string original;
      for (const auto& part : parts) original += part;
      emit(original, false);
    }
  }
  return counts;
}

double squared_norm(const SparseVector& v) {
  double sum = 0.0;
  for (const auto& e : v) sum += e.weight * e.weight;
  return sum;
}

double cosine_similarity(const SparseVector& a, const SparseVector& b) {
  const double na = squared_norm(a);
  const double nb = squared_norm(b);
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  double dot = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->term < ib->term) {
      ++ia;
    } else if (ib->term < ia->term) {
      ++ib;
    } else {
      dot += ia->weight * ib->weight;
      ++ia;
      ++ib;
    }
  }
  const double cosine = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(cosine, 0.0, 1.0);
}

void Corpus::add(const TokenCounts& counts) {
  ++size_;
  for (const auto& [word, count] : counts) {
    if (count <= 0) continue;
    auto [it, inserted] = index_.try_emplace(word, static_cast<std::uint32_t>(terms_.size()));
    if (inserted) {
      terms_.push_back(word);
      doc_freq_.push_back(0);
    }
    ++doc_freq_[it->second];
  }
}

bool Corpus::find(std::string_view word, std::uint32_t& term) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return false;
  term = it->second;
  return true;
}

std::size_t Corpus::doc_freq(std::string_view word) const {
  std::uint32_t term;
  return find(word, term) ? doc_freq_[term] : 0;
}

double Corpus::idf(std::uint32_t term) const {
  return std::log(static_cast<double>(size_) / static_cast<double>(doc_freq_[term]));
}

double Corpus::idf(std::string_view word) const {
  std::uint32_t term;
  return find(word, term) ? idf(term) : 0.0;
}

SparseVector Corpus::vectorize(const TokenCounts& counts) const {
  SparseVector v;
  for (const auto& [word, count] : counts) {
    std::uint32_t term;
    if (count <= 0 || !find(word, term)) continue;
    const double weight = std::log(static_cast<double>(count) + 1.0) * idf(term);
    if (weight > 0.0) v.push_back({term, weight});
  }
  std::sort(v.begin(), v.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.term < b.term; });
  return v;
}

std::map<std::string, double> Document::tfidf_by_word(const Corpus& corpus) const {
  std::map<std::string, double> out;
  for (const auto& e : tfidf) out.emplace(corpus.term(e.term), e.weight);
  return out;
}

double tfidf_weight(std::string_view word, const Document& doc, const Corpus& corpus) {
  auto it = doc.token_counts.find(std::string(word));
  if (it == doc.token_counts.end() || it->second <= 0) return 0.0;
  return std::log(static_cast<double>(it->second) + 1.0) * corpus.idf(word);
}

CorpusBuild build_corpus(const std::vector<RawDocument>& methods,
                         const std::vector<RawDocument>& bugs,
                         const PreprocessConfig& config) {
  CorpusBuild out;
  out.methods.reserve(methods.size());
  for (const auto& raw : methods) {
    Document doc{raw.id, DocumentKind::kMethod, preprocess_text(raw.joined_text(), config), {}};
    out.corpus.add(doc.token_counts);
    out.methods.push_back(std::move(doc));
  }
  for (auto& doc : out.methods) doc.tfidf = out.corpus.vectorize(doc.token_counts);
  out.bugs.reserve(bugs.size());
  for (const auto& raw : bugs) {
    Document doc{raw.id, DocumentKind::kBugReport, preprocess_text(raw.joined_text(), config), {}};
    doc.tfidf = out.corpus.vectorize(doc.token_counts);
    out.bugs.push_back(std::move(doc));
  }
  return out;
}

}  // namespace netml
