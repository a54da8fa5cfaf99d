#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcouple/hypergraph.hpp"
#include "hcouple/pattern.hpp"
#include "hcouple/rational.hpp"

namespace hcouple {

enum class EnumerationMode { exhaustive, random };

struct EnumerationSpec {
  int r = 3;
  int max_hyperedges = 4;
  int max_vertices = 9;
  EnumerationMode mode = EnumerationMode::exhaustive;
  std::uint64_t count = 0;  // random mode
  std::uint64_t seed = 0;
  int jobs = 1;
  AvoidableSearchOptions avoidable;
};

struct Counterexample {
  std::string description;
  std::optional<Hypergraph> hypergraph;
  std::optional<FGraph> fgraph;
};

struct LemmaReport {
  std::string lemma;
  std::uint64_t instances_checked = 0;
  std::uint64_t instances_skipped = 0;  // outside the hypothesis, e.g. an avoidable configuration is present
  std::map<std::string, std::uint64_t> tallies;
  std::vector<Counterexample> counterexamples;
  double elapsed_seconds = 0;

  bool clean() const { return counterexamples.empty(); }
};

/// Connected r-uniform hypergraphs with 1..max_edges hyperedges on at most
/// max_vertices vertices, one per isomorphism class.
std::vector<Hypergraph> connected_hypergraphs(int r, int max_edges, int max_vertices, bool allow_repeats = true);

/// Invariant of a hypergraph up to relabelling vertices and hyperedges.
std::vector<std::uint32_t> canonical_form(const Hypergraph& h);

/// Random hypergraph on a pool of r..max_vertices vertices; pool size uniform.
Hypergraph random_hypergraph(int r, int max_edges, int max_vertices, RandomStream& rng);

/// Random F-graph with 1..max_edges F-edges on a small vertex pool.
FGraph random_fgraph(const std::shared_ptr<const PatternGraph>& f, int max_edges, int max_vertices,
                     RandomStream& rng);

/// F-graph whose F-edges sit on the hyperedges of a clean k-cycle, one copy of
/// F per hyperedge chosen by decoration[i] from the copies on that vertex set.
FGraph decorated_clean_cycle(const std::shared_ptr<const PatternGraph>& f, int k, std::span<const int> decoration);

/// Number of distinct copies of F on a fixed r-vertex set: r!/aut(F).
int copies_per_vertex_set(const PatternGraph& f);

/// Vertex sets of the r-cliques in g (n <= 64).
std::vector<std::vector<int>> cliques_of_size(const SimpleGraph& g, int r);

LemmaReport verify_lemma2(const EnumerationSpec& spec);
LemmaReport verify_r3_exception(const EnumerationSpec& spec);

/// Multisets (s_1..s_t), t <= C(r,2), 2 <= s_i <= r-1, with sum C(s_i,2) >= C(r,2);
/// plus `random_instances` assembled configurations checked against nullity.
LemmaReport verify_bd_inequality(int r, std::uint64_t random_instances = 0, std::uint64_t seed = 0);

LemmaReport verify_lemma8(const std::shared_ptr<const PatternGraph>& f, const EnumerationSpec& spec);

struct MFBound {
  std::uint64_t lower_bound = 0;
  bool certified_zero = false;
  std::optional<FGraph> witness;
  LemmaReport report;
};

/// Lower bound for M_F from decorated clean k-cycles (k <= min(e(F),
/// spec.max_hyperedges)) and spec.count random F-graphs.
MFBound bound_MF(const std::shared_ptr<const PatternGraph>& f, const EnumerationSpec& spec,
                 std::uint64_t decoration_budget = 20000);

/// Every spanning subgraph S of F: e(S) <= s - d1 k with k + 1 components.
LemmaReport verify_mbd(const PatternGraph& f, int edge_cap = 24);

}  // namespace hcouple
