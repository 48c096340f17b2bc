#include "netml/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "netml/csv.hpp"
#include "netml/error.hpp"

namespace netml {

SimilarityGraph::SimilarityGraph(std::vector<std::string> nodes)
    : nodes_(std::move(nodes)), adjacency_(nodes_.size()), degree_(nodes_.size(), 0.0) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], i).second)
      throw Error(ErrorCode::kMalformedInput, "duplicate graph node '" + nodes_[i] + "'");
  }
}

void SimilarityGraph::recompute_degree(std::size_t i) {
  double sum = 0.0;
  for (const auto& n : adjacency_[i]) sum += n.weight;
  degree_[i] = sum;
}

void SimilarityGraph::set_edge(std::size_t a, std::size_t b, double weight) {
  if (a == b) return;
  if (!(weight >= 0.0) || !std::isfinite(weight))
    throw Error(ErrorCode::kMalformedInput, "graph edge weight must be finite and non-negative");
  auto upsert = [&](std::size_t from, std::size_t to) {
    auto& list = adjacency_[from];
    auto it = std::lower_bound(list.begin(), list.end(), to,
                               [](const Neighbor& n, std::size_t node) { return n.node < node; });
    if (it != list.end() && it->node == to) {
      if (weight == 0.0) {
        list.erase(it);
      } else {
        it->weight = weight;
      }
    } else if (weight != 0.0) {
      list.insert(it, Neighbor{to, weight});
    }
    recompute_degree(from);
  };
  upsert(a, b);
  upsert(b, a);
}

void SimilarityGraph::add_edges(const std::vector<EdgeSpec>& edges) {
  for (const auto& e : edges) {
    if (e.a == e.b || e.a >= nodes_.size() || e.b >= nodes_.size())
      throw Error(ErrorCode::kMalformedInput, "invalid graph edge");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
      throw Error(ErrorCode::kMalformedInput, "graph edge weight must be finite and non-negative");
    if (e.weight == 0.0) continue;
    adjacency_[e.a].push_back({e.b, e.weight});
    adjacency_[e.b].push_back({e.a, e.weight});
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto& list = adjacency_[i];
    std::sort(list.begin(), list.end(), [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
    auto dup = std::adjacent_find(list.begin(), list.end(),
                                  [](const Neighbor& x, const Neighbor& y) { return x.node == y.node; });
    if (dup != list.end()) throw Error(ErrorCode::kMalformedInput, "duplicate graph edge");
    recompute_degree(i);
  }
}

std::optional<std::size_t> SimilarityGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double SimilarityGraph::weight(std::size_t a, std::size_t b) const {
  const auto& list = adjacency_[a];
  auto it = std::lower_bound(list.begin(), list.end(), b,
                             [](const Neighbor& n, std::size_t node) { return n.node < node; });
  return it != list.end() && it->node == b ? it->weight : 0.0;
}

std::size_t SimilarityGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& list : adjacency_) twice += list.size();
  return twice / 2;
}

SimilarityGraph SimilarityGraph::induced(const std::vector<std::string>& ids) const {
  std::vector<std::size_t> source;
  source.reserve(ids.size());
  for (const auto& id : ids) {
    auto i = find(id);
    if (!i) throw Error(ErrorCode::kUnknownId, "graph has no node '" + id + "'");
    source.push_back(*i);
  }
  SimilarityGraph out(ids);
  std::vector<EdgeSpec> edges;
  for (std::size_t a = 0; a < source.size(); ++a) {
    for (std::size_t b = a + 1; b < source.size(); ++b) {
      const double w = weight(source[a], source[b]);
      if (w != 0.0) edges.push_back({a, b, w});
    }
  }
  out.add_edges(edges);
  return out;
}

void SimilarityGraph::write_csv(std::ostream& out) const {
  csv::write_row(out, {"src", "dst", "weight"});
  for (std::size_t a = 0; a < nodes_.size(); ++a) {
    for (const auto& n : adjacency_[a]) {
      if (n.node > a) csv::write_row(out, {nodes_[a], nodes_[n.node], csv::format_double(n.weight)});
    }
  }
}

SimilarityGraph build_similarity_graph(const std::vector<std::string>& ids,
                                       const std::vector<const SparseVector*>& vectors,
                                       const SparsifyRule& rule) {
  if (ids.size() != vectors.size())
    throw Error(ErrorCode::kMalformedInput, "graph ids and vectors differ in length");
  SimilarityGraph graph(ids);
  const std::size_t n = ids.size();
  std::vector<std::vector<Neighbor>> candidates(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double w = cosine_similarity(*vectors[a], *vectors[b]);
      if (w > rule.min_weight && w > 0.0) {
        candidates[a].push_back({b, w});
        candidates[b].push_back({a, w});
      }
    }
  }
  std::vector<SimilarityGraph::EdgeSpec> edges;
  if (!rule.top_k_per_node) {
    for (std::size_t a = 0; a < n; ++a)
      for (const auto& c : candidates[a])
        if (c.node > a) edges.push_back({a, c.node, c.weight});
    graph.add_edges(edges);
    return graph;
  }
  // An edge survives if it is among the top k of either endpoint.
  const std::size_t k = *rule.top_k_per_node;
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  for (std::size_t a = 0; a < n; ++a) {
    auto& list = candidates[a];
    std::stable_sort(list.begin(), list.end(), [](const Neighbor& x, const Neighbor& y) { return x.weight > y.weight; });
    for (std::size_t i = 0; i < list.size() && i < k; ++i)
      kept.emplace_back(std::min(a, list[i].node), std::max(a, list[i].node));
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  for (const auto& [a, b] : kept) {
    for (const auto& c : candidates[a])
      if (c.node == b) edges.push_back({a, b, c.weight});
  }
  graph.add_edges(edges);
  return graph;
}

SimilarityGraph build_similarity_graph(const std::vector<Document>& docs, const SparsifyRule& rule) {
  std::vector<std::string> ids;
  std::vector<const SparseVector*> vectors;
  for (const auto& d : docs) {
    ids.push_back(d.id);
    vectors.push_back(&d.tfidf);
  }
  return build_similarity_graph(ids, vectors, rule);
}

std::vector<std::string> top_k_neighbors(std::string_view query, const SimilarityGraph& graph, std::size_t k) {
  auto q = graph.find(query);
  if (!q) throw Error(ErrorCode::kUnknownId, "query '" + std::string(query) + "' not in graph");
  std::vector<std::pair<double, const std::string*>> candidates;
  candidates.reserve(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (i == *q) continue;
    candidates.emplace_back(graph.weight(*q, i), &graph.node(i));
  }
  auto better = [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  };
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end(), better);
  std::vector<std::string> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(*candidates[i].second);
  return out;
}

}  // namespace netml
