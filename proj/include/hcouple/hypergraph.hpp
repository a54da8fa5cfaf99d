#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hcouple/graph.hpp"
#include "hcouple/pattern.hpp"

namespace hcouple {

/// Sorted r-element vertex set.
using Hyperedge = std::vector<int>;

/// r-uniform multi-hypergraph over {0..n-1}.  Repeated vertex sets are
/// kept as separate hyperedges.
class Hypergraph {
 public:
  Hypergraph(int r, int ambient_n);
  Hypergraph(int r, int ambient_n, std::vector<Hyperedge> edges);

  int uniformity() const { return r_; }
  int ambient_order() const { return n_; }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// Validates and sorts the vertex set, then appends it.
  void add(Hyperedge edge);

  Hypergraph subhypergraph(std::span<const int> edge_indices) const;
  std::vector<int> spanned_vertices() const;

 private:
  int r_;
  int n_;
  std::vector<Hyperedge> edges_;
};

/// Vertex set plus a set of distinct copies of F.
struct FGraph {
  std::shared_ptr<const PatternGraph> pattern;
  int ambient_n = 0;
  std::vector<FCopy> f_edges;

  /// Adds a copy; returns false if an F-edge with the same edge set exists.
  bool add(FCopy copy);
  bool contains(const FCopy& copy) const;
};

enum class ComponentClass { tree, unicyclic, complex };
const char* to_string(ComponentClass c);

struct ComponentReport {
  std::vector<int> vertices;
  std::vector<int> edge_indices;
  int nullity = 0;
  ComponentClass cls = ComponentClass::tree;
};

struct StructureReport {
  std::vector<ComponentReport> components;
};

/// (r-1) e(H) + c(H) - |H| over spanned vertices.
int nullity(const Hypergraph& h);

/// Hyperedge-index partition into connected components.
std::vector<std::vector<int>> component_edge_indices(const Hypergraph& h);

bool is_connected(const Hypergraph& h);

StructureReport analyze(const Hypergraph& h);

ComponentClass classify_component(const Hypergraph& h);

bool is_tree_by_construction(const Hypergraph& h);

struct AvoidableSearchOptions {
  std::uint64_t node_cap = 2'000'000;
};

/// Hyperedge indices of a connected complex sub-hypergraph with at most
/// 2 * C(r, 2) hyperedges, or nullopt.  Throws budget_exceeded when the
/// search cap is hit before a decision.
std::optional<std::vector<int>> find_avoidable_configuration(const Hypergraph& h,
                                                             const AvoidableSearchOptions& options = {});

int avoidable_edge_bound(int r);

struct CleanCycle {
  std::vector<int> edge_indices;   // cyclic order
  std::vector<int> cycle_vertices; // v_i shared by edge i-1 and edge i; for k = 2 the two shared vertices
  int length() const { return static_cast<int>(edge_indices.size()); }
};

bool is_clean_cycle(const Hypergraph& h, std::span<const int> cyclic_edge_order);

/// Every clean k-cycle with 2 <= k <= k_max, each reported once.
std::vector<CleanCycle> find_clean_cycles(const Hypergraph& h, int k_max);

SimpleGraph underlying_graph(const Hypergraph& h);
SimpleGraph underlying_graph(const FGraph& hf);

/// Copies of F inside G(H_F) that are not F-edges and share an edge with f1.
std::vector<FCopy> extra_copies(const FGraph& hf, const FCopy& f1);

/// Multi-hypergraph of F-edge vertex sets.
Hypergraph to_hypergraph(const FGraph& hf);

}  // namespace hcouple
