#include <doctest.h>

#include "hcouple/errors.hpp"
#include "hcouple/oracles.hpp"
#include "support.hpp"

using namespace hcouple;

namespace {

std::shared_ptr<const PatternGraph> pattern(const char* name) {
  return std::make_shared<const PatternGraph>(named_pattern(name));
}

}  // namespace

TEST_SUITE("oracles") {
  TEST_CASE("connected graph counts by edge number") {
    const auto all = connected_hypergraphs(2, 5, 6, false);
    std::vector<int> by_size(6, 0);
    for (const auto& h : all) ++by_size[h.edge_count()];
    CHECK(by_size[1] == 1);
    CHECK(by_size[2] == 1);
    CHECK(by_size[3] == 3);
    CHECK(by_size[4] == 5);
    CHECK(by_size[5] == 12);
  }

  TEST_CASE("connected 3-graph counts") {
    // Independently counted: 1, 3 and 12 classes with 1, 2 and 3 hyperedges.
    std::vector<int> by_size(4, 0);
    for (const auto& h : connected_hypergraphs(3, 3, 7)) ++by_size[h.edge_count()];
    CHECK(by_size == std::vector<int>{0, 1, 3, 12});
  }

  TEST_CASE("canonical form ignores labels") {
    Hypergraph a(3, 6, {{0, 1, 2}, {2, 3, 4}, {4, 5, 0}});
    Hypergraph b(3, 6, {{5, 3, 1}, {1, 0, 2}, {2, 4, 5}});
    Hypergraph c(3, 6, {{0, 1, 2}, {2, 3, 4}, {3, 4, 5}});
    CHECK(canonical_form(a) == canonical_form(b));
    CHECK(canonical_form(a) != canonical_form(c));
  }

  TEST_CASE("clique listing") {
    CHECK(cliques_of_size(SimpleGraph::complete(5), 3).size() == 10);
    CHECK(cliques_of_size(SimpleGraph::cycle(5), 3).empty());
    CHECK(copies_per_vertex_set(named_pattern("C4")) == 3);
    CHECK(copies_per_vertex_set(named_pattern("K4")) == 1);
  }

  TEST_CASE("clique lemma on small cases") {
    EnumerationSpec spec;
    spec.r = 4;
    spec.max_hyperedges = 2;
    spec.max_vertices = 8;
    auto rep = verify_lemma2(spec);
    CHECK(rep.clean());
    CHECK(rep.instances_checked > 0);
    CHECK(rep.tallies["extra_cliques"] == 0);

    // Clean 2-cycle for r = 4: no K4 beyond the two hyperedges.
    const Hypergraph two(4, 6, {{0, 1, 2, 3}, {0, 1, 4, 5}});
    const auto g = underlying_graph(two);
    CHECK(cliques_of_size(g, 4).size() == 2);

    spec.r = 3;
    CHECK_THROWS_AS(verify_lemma2(spec), Error);
  }

  TEST_CASE("r = 3 exception") {
    // The clean 3-cycle: one extra triangle, witnessed.
    const Hypergraph cyc(3, 6, {{0, 1, 3}, {1, 2, 4}, {0, 2, 5}});
    const auto tris = cliques_of_size(underlying_graph(cyc), 3);
    CHECK(tris.size() == 4);
    auto cycles = find_clean_cycles(cyc, 3);
    REQUIRE(cycles.size() == 1);
    auto centre = cycles[0].cycle_vertices;
    std::sort(centre.begin(), centre.end());
    CHECK(centre == std::vector<int>{0, 1, 2});

    // A tree has no extra triangles.
    const Hypergraph tree(3, 7, {{0, 1, 2}, {2, 3, 4}, {4, 5, 6}});
    CHECK(cliques_of_size(underlying_graph(tree), 3).size() == 3);

    EnumerationSpec spec;
    spec.r = 3;
    spec.max_hyperedges = 3;
    spec.max_vertices = 7;
    auto rep = verify_r3_exception(spec);
    CHECK(rep.clean());
    CHECK(rep.tallies["extra_triangles"] >= 1);
    CHECK(rep.tallies["extra_triangles"] == rep.tallies["witnessed"]);
  }

  TEST_CASE("multiset inequality") {
    auto r4 = verify_bd_inequality(4, 200, 1);
    CHECK(r4.clean());
    // (3,3) is the only r = 4 equality case, and it cannot be placed.
    CHECK(r4.tallies["equality_cases"] == 1);
    CHECK(r4.tallies["equality_realisable"] == 0);
    auto r3 = verify_bd_inequality(3, 200, 1);
    CHECK(r3.clean());
    // (2,2,2): the clean 3-cycle signature.
    CHECK(r3.tallies["equality_cases"] == 1);
    CHECK(r3.tallies["equality_realisable"] == 1);
    CHECK(r3.tallies["assembled"] > 0);
    CHECK_THROWS_AS(verify_bd_inequality(9), Error);
  }

  TEST_CASE("extra-copy structure") {
    EnumerationSpec spec;
    spec.max_hyperedges = 3;
    auto k3 = verify_lemma8(pattern("K3"), spec);
    CHECK(k3.clean());
    CHECK(k3.tallies["extra_copies"] >= 1);
    CHECK(k3.tallies["clean_cycle_witness"] >= 1);

    spec.mode = EnumerationMode::random;
    spec.count = 2000;
    spec.max_hyperedges = 5;
    spec.max_vertices = 7;
    spec.seed = 3;
    CHECK(verify_lemma8(pattern("C4"), spec).clean());
    spec.count = 400;
    spec.max_vertices = 8;
    auto k4 = verify_lemma8(pattern("K4"), spec);
    CHECK(k4.clean());

    CHECK_THROWS_AS(verify_lemma8(pattern("P4"), spec), Error);
  }

  TEST_CASE("extra-copy bound search") {
    EnumerationSpec spec;
    spec.mode = EnumerationMode::random;
    spec.count = 200;
    spec.max_hyperedges = 4;
    spec.max_vertices = 8;
    auto k4 = bound_MF(pattern("K4"), spec);
    CHECK(k4.lower_bound == 0);
    CHECK(k4.certified_zero);
    CHECK(k4.report.clean());

    auto k3 = bound_MF(pattern("K3"), spec);
    CHECK(k3.lower_bound >= 1);
    CHECK_FALSE(k3.certified_zero);
    REQUIRE(k3.witness.has_value());
    CHECK_FALSE(find_avoidable_configuration(to_hypergraph(*k3.witness)).has_value());

    auto c4 = bound_MF(pattern("C4"), spec);
    CHECK(c4.report.clean());
    MESSAGE("C4 extra-copy lower bound: " << c4.lower_bound);
  }

  TEST_CASE("cliques have a certified zero bound") {
    EnumerationSpec spec;
    spec.mode = EnumerationMode::random;
    spec.count = 50;
    spec.max_hyperedges = 4;
    for (const char* k : {"K4", "K5", "K6"}) {
      spec.max_vertices = 2 * named_pattern(k).order();
      auto b = bound_MF(pattern(k), spec, 2000);
      CHECK(b.certified_zero);
      CHECK(b.lower_bound == 0);
    }
  }

  TEST_CASE("spanning subgraph density") {
    auto k4 = verify_mbd(named_pattern("K4"));
    CHECK(k4.clean());
    CHECK(k4.instances_checked >= 63);
    auto c4 = verify_mbd(named_pattern("C4"));
    CHECK(c4.clean());
    CHECK(c4.tallies["equality"] >= 1);
    CHECK(verify_mbd(named_pattern("petersen")).clean());
  }

  TEST_CASE("decorated cycles") {
    auto c4 = pattern("C4");
    const std::vector<int> deco{0, 1, 2};
    auto hf = decorated_clean_cycle(c4, 3, deco);
    CHECK(hf.f_edges.size() == 3);
    auto h = to_hypergraph(hf);
    CHECK(nullity(h) == 1);
    CHECK(find_clean_cycles(h, 3).size() == 1);
  }
}
