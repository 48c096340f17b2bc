#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "netml/corpus.hpp"

namespace netml {

/// Edge sparsification. The default keeps every nonzero cosine edge.
struct SparsifyRule {
  double min_weight = 0.0;                        // keep edges with weight > min_weight
  std::optional<std::size_t> top_k_per_node;      // keep an edge if it is in either endpoint's top k
};

struct Neighbor {
  std::size_t node = 0;
  double weight = 0.0;
};

/// Weighted undirected graph with no self-edges. Adjacency lists are sorted
/// by neighbor index and degree sums are kept consistent with the edges.
class SimilarityGraph {
 public:
  SimilarityGraph() = default;
  explicit SimilarityGraph(std::vector<std::string> nodes);

  /// Sets (or overwrites) the symmetric edge; weight 0 removes it.
  void set_edge(std::size_t a, std::size_t b, double weight);

  struct EdgeSpec {
    std::size_t a = 0;
    std::size_t b = 0;
    double weight = 0.0;
  };

  /// Adds many distinct new edges at once (each unordered pair at most once,
  /// not already present).
  void add_edges(const std::vector<EdgeSpec>& edges);

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::string& node(std::size_t i) const { return nodes_[i]; }
  std::optional<std::size_t> find(std::string_view id) const;

  const std::vector<Neighbor>& neighbors(std::size_t i) const { return adjacency_[i]; }
  double degree(std::size_t i) const { return degree_[i]; }
  double weight(std::size_t a, std::size_t b) const;
  std::size_t edge_count() const;

  /// Subgraph on the given ids, in the given order. Throws UnknownId.
  SimilarityGraph induced(const std::vector<std::string>& ids) const;

  /// CSV edge list "src,dst,weight", each undirected edge once (src < dst by index).
  void write_csv(std::ostream& out) const;

 private:
  void recompute_degree(std::size_t i);

  std::vector<std::string> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> degree_;
};

/// Pairwise cosine graph over TF-IDF vectors, then sparsified.
SimilarityGraph build_similarity_graph(const std::vector<std::string>& ids,
                                       const std::vector<const SparseVector*>& vectors,
                                       const SparsifyRule& rule = {});

SimilarityGraph build_similarity_graph(const std::vector<Document>& docs,
                                       const SparsifyRule& rule = {});

/// The K nodes most similar to `query` (missing edges count as weight 0),
/// by descending weight with ascending id as tie-break.
std::vector<std::string> top_k_neighbors(std::string_view query, const SimilarityGraph& graph,
                                         std::size_t k);

}  // namespace netml
