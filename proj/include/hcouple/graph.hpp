#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hcouple {

/// Unordered vertex pair stored with first < second.
using Edge = std::pair<int, int>;

Edge make_edge(int u, int v);

/// Index of {u, v} among the C(n, 2) pairs in lexicographic order.
int edge_id(int u, int v, int n);
Edge edge_from_id(int id, int n);
int pair_count(int n);

/// Simple undirected graph on {0..n-1} backed by bitset adjacency rows.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(int vertex_count);
  SimpleGraph(int vertex_count, std::span<const Edge> edges);

  static SimpleGraph complete(int n);
  static SimpleGraph cycle(int n);
  static SimpleGraph path(int n);

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return m_; }

  bool has_edge(int u, int v) const;
  /// Adds {u, v}; returns false if it was already present.
  bool add_edge(int u, int v);
  bool remove_edge(int u, int v);

  std::vector<Edge> edges() const;
  std::vector<int> neighbors(int v) const;
  int degree(int v) const;
  int max_degree() const;

  /// Adjacency row as a mask; valid only when vertex_count() <= 64.
  std::uint64_t row(int v) const { return adj_[static_cast<std::size_t>(v) * words_]; }

  bool is_connected() const;
  bool contains_edges(std::span<const Edge> edges) const;

  friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_;
  }

 private:
  void check_vertex(int v) const;

  int n_ = 0;
  int words_ = 0;
  std::size_t m_ = 0;
  std::vector<std::uint64_t> adj_;
};

/// Induced subgraph on the given vertices, relabelled 0..k-1 in the given order.
SimpleGraph induced_subgraph(const SimpleGraph& g, std::span<const int> vertices);

}  // namespace hcouple
