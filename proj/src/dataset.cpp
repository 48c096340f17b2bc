#include "netml/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>

#include "netml/error.hpp"

namespace netml {

namespace {

using nlohmann::json;

template <typename Fn>
void for_each_line(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedInput, source + ":" + std::to_string(number) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), source + ":" + std::to_string(number) + ": " + e.message());
    }
  }
}

const json& member(const json& obj, const char* key) {
  if (!obj.is_object()) throw Error(ErrorCode::kMalformedInput, "expected a JSON object");
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::kMalformedInput, std::string("missing \"") + key + "\"");
  return *it;
}

std::string string_member(const json& obj, const char* key) {
  const json& v = member(obj, key);
  if (!v.is_string()) throw Error(ErrorCode::kMalformedInput, std::string("\"") + key + "\" must be a string");
  std::string s = v.get<std::string>();
  if (s.empty()) throw Error(ErrorCode::kMalformedInput, std::string("\"") + key + "\" must not be empty");
  return s;
}

std::vector<std::string> string_list(const json& obj, const char* key) {
  const json& v = member(obj, key);
  if (!v.is_array()) throw Error(ErrorCode::kMalformedInput, std::string("\"") + key + "\" must be an array");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) throw Error(ErrorCode::kMalformedInput, std::string("\"") + key + "\" must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::vector<RawDocument> read_documents(std::istream& in, DocumentKind expected, const std::string& source) {
  std::vector<RawDocument> docs;
  for_each_line(in, source, [&](const json& obj) {
    RawDocument doc;
    doc.id = string_member(obj, "id");
    doc.kind = expected;
    if (obj.contains("kind")) {
      const DocumentKind kind = parse_document_kind(string_member(obj, "kind"));
      if (kind != expected)
        throw Error(ErrorCode::kMalformedInput, "document '" + doc.id + "' has kind " +
                                                    std::string(to_string(kind)) + ", expected " +
                                                    std::string(to_string(expected)));
    }
    const json& fields = member(obj, "fields");
    if (!fields.is_object()) throw Error(ErrorCode::kMalformedInput, "\"fields\" must be an object");
    for (const auto& [name, text] : fields.items()) {
      if (!text.is_string()) throw Error(ErrorCode::kMalformedInput, "field '" + name + "' must be a string");
      doc.fields.emplace_back(name, text.get<std::string>());
    }
    docs.push_back(std::move(doc));
  });
  return docs;
}

std::map<std::string, ProgramSpectra> read_spectra(std::istream& in, const std::string& source) {
  std::map<std::string, ProgramSpectra> out;
  for_each_line(in, source, [&](const json& obj) {
    const std::string bug_id = string_member(obj, "bug_id");
    ExecutionTrace trace;
    trace.test_id = string_member(obj, "test_id");
    const std::string outcome = string_member(obj, "outcome");
    if (outcome == "pass") {
      trace.outcome = Outcome::kPass;
    } else if (outcome == "fail") {
      trace.outcome = Outcome::kFail;
    } else {
      throw Error(ErrorCode::kMalformedInput, "outcome must be \"pass\" or \"fail\", got \"" + outcome + "\"");
    }
    trace.executed = string_list(obj, "executed");
    std::sort(trace.executed.begin(), trace.executed.end());
    trace.executed.erase(std::unique(trace.executed.begin(), trace.executed.end()), trace.executed.end());
    auto [it, inserted] = out.try_emplace(bug_id, bug_id);
    it->second.add_trace(std::move(trace));
  });
  return out;
}

GroundTruth read_ground_truth(std::istream& in, const std::string& source) {
  GroundTruth gt;
  for_each_line(in, source, [&](const json& obj) {
    const std::string bug_id = string_member(obj, "bug_id");
    const auto methods = string_list(obj, "faulty_methods");
    if (methods.empty()) throw Error(ErrorCode::kMissingFaulty, "bug '" + bug_id + "' lists no faulty methods");
    if (gt.contains(bug_id)) throw Error(ErrorCode::kMalformedInput, "duplicate ground truth for bug '" + bug_id + "'");
    gt.emplace(bug_id, std::set<std::string>(methods.begin(), methods.end()));
  });
  return gt;
}

Project Project::build(std::string name, std::vector<RawDocument> methods, std::vector<RawDocument> bugs,
                       std::map<std::string, ProgramSpectra> spectra, GroundTruth ground_truth,
                       const ProjectOptions& options) {
  auto by_id = [](const RawDocument& a, const RawDocument& b) { return a.id < b.id; };
  auto same_id = [](const RawDocument& a, const RawDocument& b) { return a.id == b.id; };
  std::sort(methods.begin(), methods.end(), by_id);
  std::sort(bugs.begin(), bugs.end(), by_id);
  if (auto it = std::adjacent_find(methods.begin(), methods.end(), same_id); it != methods.end())
    throw Error(ErrorCode::kMalformedInput, "duplicate method id '" + it->id + "'");
  if (auto it = std::adjacent_find(bugs.begin(), bugs.end(), same_id); it != bugs.end())
    throw Error(ErrorCode::kMalformedInput, "duplicate bug id '" + it->id + "'");

  std::vector<std::string> method_ids;
  for (const auto& m : methods) method_ids.push_back(m.id);
  std::set<std::string> bug_set;
  for (const auto& b : bugs) bug_set.insert(b.id);

  for (const auto& [bug_id, sp] : spectra) {
    if (!bug_set.contains(bug_id)) throw Error(ErrorCode::kUnknownId, "spectra for unknown bug '" + bug_id + "'");
    sp.validate(method_ids);
  }
  for (const auto& [bug_id, faulty] : ground_truth) {
    if (!bug_set.contains(bug_id)) throw Error(ErrorCode::kUnknownId, "ground truth for unknown bug '" + bug_id + "'");
    for (const auto& m : faulty)
      if (!std::binary_search(method_ids.begin(), method_ids.end(), m))
        throw Error(ErrorCode::kMissingFaulty, "faulty method '" + m + "' of bug '" + bug_id + "' is not in the corpus");
  }

  Project p;
  p.name = std::move(name);
  p.options = options;
  p.corpus = build_corpus(methods, bugs, options.preprocess);
  std::set<std::string> unlabeled;
  for (const auto& b : bugs)
    if (!ground_truth.contains(b.id)) unlabeled.insert(b.id);
  p.tensor = build_feature_tensor(p.corpus.bugs, p.corpus.methods, spectra, p.corpus.corpus, ground_truth, unlabeled);
  p.bug_graph = std::make_shared<const SimilarityGraph>(build_similarity_graph(p.corpus.bugs, options.sparsify));
  p.method_graph = std::make_shared<const SimilarityGraph>(build_similarity_graph(p.corpus.methods, options.sparsify));
  p.spectra = std::move(spectra);
  p.ground_truth = std::move(ground_truth);
  return p;
}

Project Project::load(std::string name, const DatasetPaths& paths, const ProjectOptions& options) {
  auto bugs_in = open(paths.bugs);
  auto methods_in = open(paths.methods);
  auto spectra_in = open(paths.spectra);
  auto bugs = read_documents(bugs_in, DocumentKind::kBugReport, paths.bugs.string());
  auto methods = read_documents(methods_in, DocumentKind::kMethod, paths.methods.string());
  auto spectra = read_spectra(spectra_in, paths.spectra.string());
  GroundTruth gt;
  if (!paths.ground_truth.empty()) {
    auto gt_in = open(paths.ground_truth);
    gt = read_ground_truth(gt_in, paths.ground_truth.string());
  }
  return build(std::move(name), std::move(methods), std::move(bugs), std::move(spectra), std::move(gt), options);
}

const std::set<std::string>& Project::faulty(const std::string& bug_id) const {
  auto it = ground_truth.find(bug_id);
  if (it == ground_truth.end()) throw Error(ErrorCode::kMissingLabels, "bug '" + bug_id + "' has no ground truth");
  return it->second;
}

const Document& Project::bug(const std::string& bug_id) const {
  auto it = std::lower_bound(corpus.bugs.begin(), corpus.bugs.end(), bug_id,
                             [](const Document& d, const std::string& id) { return d.id < id; });
  if (it == corpus.bugs.end() || it->id != bug_id) throw Error(ErrorCode::kUnknownId, "unknown bug '" + bug_id + "'");
  return *it;
}

}  // namespace netml
