#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcouple/graph.hpp"
#include "hcouple/random.hpp"
#include "hcouple/rational.hpp"

namespace hcouple {

struct BalanceClass {
  bool one_balanced = false;
  bool strictly_one_balanced = false;
};

struct PatternFlags {
  bool one_balanced = false;
  bool strictly_one_balanced = false;
  bool two_connected = false;
  bool three_connected = false;
  bool edge_swap_rigid = false;
  bool nice = false;
};

// Free-standing classifiers on plain graphs.  The sweeps over all small
// graphs call these directly, without building a PatternGraph.

/// e(F) / (|F| - 1); throws invalid_pattern for fewer than two vertices.
Rational one_density(const SimpleGraph& f);

/// Checks every induced subgraph on at least two vertices with an edge.
BalanceClass classify_balance(const SimpleGraph& f);

/// Minimum number of vertices whose removal disconnects the graph or leaves
/// a single vertex.  K_n gives n - 1; a disconnected graph gives 0.
int vertex_connectivity(const SimpleGraph& f);

/// Connected with no cut vertex.  K_2 qualifies although its connectivity is 1.
bool is_two_connected(const SimpleGraph& f);

bool are_isomorphic(const SimpleGraph& a, const SimpleGraph& b);

/// True iff no single add-one-edge/delete-one-edge move yields an isomorphic graph.
bool edge_swap_rigid(const SimpleGraph& f);

bool is_nice(const SimpleGraph& f);

/// Number of vertex permutations preserving the edge set.
std::uint64_t automorphism_count(const SimpleGraph& f, int size_cap = 10);

/// A fixed connected pattern F with its derived metadata computed once.
class PatternGraph {
 public:
  static constexpr int kDefaultSizeCap = 10;

  explicit PatternGraph(SimpleGraph graph, std::string name = {}, int size_cap = kDefaultSizeCap);

  const SimpleGraph& graph() const { return graph_; }
  const std::string& name() const { return name_; }
  /// r = |F|
  int order() const { return graph_.vertex_count(); }
  /// s = e(F)
  int size() const { return static_cast<int>(graph_.edge_count()); }
  const Rational& one_density() const { return d1_; }
  std::uint64_t aut_count() const { return aut_; }
  const PatternFlags& flags() const { return flags_; }
  int connectivity() const { return kappa_; }
  bool is_complete() const { return size() == order() * (order() - 1) / 2; }

 private:
  SimpleGraph graph_;
  std::string name_;
  Rational d1_;
  std::uint64_t aut_ = 0;
  int kappa_ = 0;
  PatternFlags flags_;
};

Rational one_density(const PatternGraph& f);
BalanceClass classify_balance(const PatternGraph& f);
int vertex_connectivity(const PatternGraph& f);
bool edge_swap_rigid(const PatternGraph& f);
bool is_nice(const PatternGraph& f);
std::uint64_t automorphism_count(const PatternGraph& f);

/// K3..K7, C4..C7, P3..P5 and petersen.
PatternGraph named_pattern(std::string_view name);
bool is_named_pattern(std::string_view name);

/// A copy of F in the complete graph on the ambient vertex set.  Copies are
/// identified by their edge sets; vertex_image is the lexicographically
/// smallest map producing that edge set.
struct FCopy {
  std::vector<int> vertex_image;
  std::vector<Edge> edges;  // sorted

  std::vector<int> vertices() const;

  friend bool operator==(const FCopy& a, const FCopy& b) { return a.edges == b.edges; }
  friend auto operator<=>(const FCopy& a, const FCopy& b) { return a.edges <=> b.edges; }
};

FCopy make_copy(const PatternGraph& f, std::vector<int> vertex_image);

/// All C(n, r) * r! / aut(F) copies, ordered lexicographically by sorted edge set.
std::vector<FCopy> enumerate_copies(const PatternGraph& f, int n);

/// All copies of F whose edges lie in host (not necessarily induced).
std::vector<FCopy> copies_in_host(const PatternGraph& f, const SimpleGraph& host);

/// Number of copies of F in K_n: C(n, r) * r! / aut(F).
BigInt copy_count(const PatternGraph& f, int n);

SimpleGraph sample_gnp(int n, const Rational& p, RandomStream& rng);

/// Exact F-factor search by backtracking over copies of F in g.
std::optional<std::vector<FCopy>> find_factor_direct(const SimpleGraph& g, const PatternGraph& f,
                                                     std::uint64_t node_budget = 50'000'000);

}  // namespace hcouple
