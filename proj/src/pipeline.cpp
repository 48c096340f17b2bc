#include "netml/pipeline.hpp"

#include <algorithm>

#include "netml/error.hpp"
#include "netml/rng.hpp"

namespace netml {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kNetml: return "netml";
    case ModelKind::kAml: return "aml";
    case ModelKind::kTarantula: return "tarantula";
    case ModelKind::kOchiai: return "ochiai";
    case ModelKind::kDStar: return "dstar";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  for (ModelKind kind : {ModelKind::kNetml, ModelKind::kAml, ModelKind::kTarantula, ModelKind::kOchiai, ModelKind::kDStar})
    if (to_string(kind) == text) return kind;
  throw Error(ErrorCode::kConfig, "unknown model '" + std::string(text) + "'");
}

bool is_supervised(ModelKind kind) { return kind == ModelKind::kNetml || kind == ModelKind::kAml; }

void ModelConfig::validate() const {
  hp.validate();
  aml.validate();
  if (dstar_star < 1) throw Error(ErrorCode::kConfig, "dstar star must be >= 1");
}

namespace {

SpectrumFormula formula_of(ModelKind kind) {
  switch (kind) {
    case ModelKind::kOchiai: return SpectrumFormula::kOchiai;
    case ModelKind::kDStar: return SpectrumFormula::kDStar;
    default: return SpectrumFormula::kTarantula;
  }
}

void append_edges(const SimilarityGraph& graph, std::size_t offset, std::vector<SimilarityGraph::EdgeSpec>& out) {
  for (std::size_t a = 0; a < graph.size(); ++a)
    for (const auto& n : graph.neighbors(a))
      if (n.node > a) out.push_back({a + offset, n.node + offset, n.weight});
}

}  // namespace

Localizer::Localizer(const Project& project)
    : target_(project),
      columns_(project.method_ids()),
      target_columns_(project.method_ids().size()),
      bug_graph_(project.bug_graph),
      method_graph_(project.method_graph) {}

Localizer::Localizer(const Project& source, const Project& target) : target_(target), source_(&source) {
  for (const auto& id : target.bug_ids())
    if (id.starts_with(kSourcePrefix))
      throw Error(ErrorCode::kMalformedInput, "target bug id '" + id + "' collides with the source prefix");

  columns_ = target.method_ids();
  target_columns_ = columns_.size();
  for (const auto& id : source.method_ids()) columns_.push_back(std::string(kSourcePrefix) + id);
  auto methods = std::make_shared<SimilarityGraph>(columns_);
  std::vector<SimilarityGraph::EdgeSpec> edges;
  append_edges(*target.method_graph, 0, edges);
  append_edges(*source.method_graph, target_columns_, edges);
  methods->add_edges(edges);
  method_graph_ = std::move(methods);

  // Source bug text is re-weighted with the target corpus statistics so that
  // query-to-history similarities live in one vector space.
  std::vector<std::string> ids = target.bug_ids();
  std::vector<SparseVector> source_vectors;
  source_vectors.reserve(source.corpus.bugs.size());
  for (const auto& doc : source.corpus.bugs) {
    ids.push_back(std::string(kSourcePrefix) + doc.id);
    source_vectors.push_back(target.corpus.corpus.vectorize(doc.token_counts));
  }
  std::vector<const SparseVector*> vectors;
  for (const auto& doc : target.corpus.bugs) vectors.push_back(&doc.tfidf);
  for (const auto& v : source_vectors) vectors.push_back(&v);
  bug_graph_ = std::make_shared<const SimilarityGraph>(build_similarity_graph(ids, vectors, target.options.sparsify));
}

std::string Localizer::history_node(const std::string& bug_id) const {
  return source_ ? std::string(kSourcePrefix) + bug_id : bug_id;
}

Localizer::Row Localizer::row_of(const std::string& node) const {
  if (source_ && node.starts_with(kSourcePrefix)) {
    const std::string id = node.substr(kSourcePrefix.size());
    return Row{source_, source_->tensor.bug_row(id), target_columns_, source_->is_labeled(id)};
  }
  return Row{&target_, target_.tensor.bug_row(node), 0, target_.is_labeled(node)};
}

std::vector<double> Localizer::unsupervised_scores(const std::string& query, const ModelConfig& config) const {
  auto it = target_.spectra.find(query);
  if (it == target_.spectra.end()) throw Error(ErrorCode::kMissingSpectra, "bug '" + query + "' has no program spectra");
  const auto stats = raw_stats_all(target_.method_ids(), it->second);
  std::vector<double> scores;
  scores.reserve(target_columns_);
  for (const auto& m : target_.method_ids())
    scores.push_back(suspiciousness(formula_of(config.kind), stats.at(m), config.dstar_star));
  return scores;
}

Localization Localizer::localize(const std::string& query, const std::vector<std::string>& history,
                                 const ModelConfig& config) const {
  config.validate();
  const Row query_row = row_of(query);
  if (query_row.project != &target_) throw Error(ErrorCode::kUnknownId, "query '" + query + "' is not a target bug");

  Localization out;
  if (!is_supervised(config.kind)) {
    out.ranked = rank_methods(query, target_.method_ids(), unsupervised_scores(query, config));
    return out;
  }

  std::vector<std::string> nodes;
  for (const auto& h : history) {
    const std::string node = history_node(h);
    if (node == query) continue;
    if (!row_of(node).labeled) throw Error(ErrorCode::kMissingLabels, "history bug '" + h + "' has no ground truth");
    nodes.push_back(node);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (nodes.empty()) throw Error(ErrorCode::kEmptyHistory, "no history bugs to learn from for query '" + query + "'");

  nodes.insert(std::lower_bound(nodes.begin(), nodes.end(), query), query);
  const SimilarityGraph local = bug_graph_->induced(nodes);
  out.neighbors = top_k_neighbors(query, local, config.hp.k);

  auto masked = [&](FeatureVector x) {
    for (std::size_t j = 0; j < kNumFeatures; ++j)
      if (!config.features[j]) x[j] = 0.0;
    return x;
  };

  if (config.kind == ModelKind::kAml) {
    std::vector<FeatureVector> xs;
    std::vector<Label> ys;
    for (const auto& node : out.neighbors) {
      const Row r = row_of(node);
      const FeatureTensor& t = r.project->tensor;
      for (std::size_t m = 0; m < t.methods.size(); ++m) {
        xs.push_back(masked(t.at(r.tensor_row, m)));
        ys.push_back(t.y[t.index(r.tensor_row, m)]);
      }
    }
    out.aml = aml_fit(xs, ys, config.aml, Rng::substream(config.seed, "aml/" + query).next());
    std::vector<double> scores(target_columns_);
    for (std::size_t m = 0; m < target_columns_; ++m)
      scores[m] = aml_score(masked(target_.tensor.at(query_row.tensor_row, m)), out.aml->theta);
    out.ranked = rank_methods(query, target_.method_ids(), scores);
    return out;
  }

  NetmlProblem problem;
  problem.bug_ids = out.neighbors;
  problem.bug_ids.push_back(query);
  std::sort(problem.bug_ids.begin(), problem.bug_ids.end());
  problem.method_ids = columns_;
  const std::size_t n_cells = problem.bug_ids.size() * columns_.size();
  problem.x.assign(n_cells, FeatureVector{});
  problem.y.assign(n_cells, Label::kAbsent);
  for (std::size_t b = 0; b < problem.bug_ids.size(); ++b) {
    const std::string& node = problem.bug_ids[b];
    const bool is_query = node == query;
    if (is_query) problem.query_row = b;
    const Row r = is_query ? query_row : row_of(node);
    const FeatureTensor& t = r.project->tensor;
    for (std::size_t m = 0; m < t.methods.size(); ++m) {
      const std::size_t cell = problem.cell(b, r.column_offset + m);
      problem.x[cell] = masked(t.at(r.tensor_row, m));
      if (!is_query) problem.y[cell] = t.y[t.index(r.tensor_row, m)];
    }
  }
  problem.w = instance_weights(problem.y);
  problem.bug_graph = std::make_shared<const SimilarityGraph>(local.induced(problem.bug_ids));
  problem.method_graph = method_graph_;

  FitResult result = fit(problem, config.hp);
  std::vector<double> scores(result.query_scores.begin(), result.query_scores.begin() + static_cast<std::ptrdiff_t>(target_columns_));
  out.ranked = rank_methods(query, target_.method_ids(), scores);
  out.problem = std::move(problem);
  out.fit = std::move(result);
  return out;
}

Localization Localizer::localize(const std::string& query, const ModelConfig& config) const {
  std::vector<std::string> history;
  const Project& p = history_project();
  for (const auto& id : p.bug_ids())
    if (p.is_labeled(id) && (source_ || id != query)) history.push_back(id);
  return localize(query, history, config);
}

}  // namespace netml
