#include <doctest.h>

#include <set>

#include "hcouple/errors.hpp"
#include "hcouple/pattern.hpp"
#include "support.hpp"

using namespace hcouple;

namespace {

SimpleGraph bowtie() {
  SimpleGraph g(5);
  for (auto [u, v] : {std::pair{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}}) g.add_edge(u, v);
  return g;
}

// Balance by brute force over every edge subset, vertex set = spanned vertices.
BalanceClass naive_balance(const SimpleGraph& f) {
  const auto edges = f.edges();
  const Rational d = one_density(f);
  BalanceClass out{true, true};
  const std::uint32_t full = (1u << edges.size()) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::set<int> verts;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (mask >> i & 1) verts.insert({edges[i].first, edges[i].second});
    Rational dsub(std::popcount(mask), static_cast<long>(verts.size()) - 1);
    dsub.canonicalize();
    if (dsub > d) out.one_balanced = false;
    const bool proper = mask != full || static_cast<int>(verts.size()) != f.vertex_count();
    if (proper && dsub >= d) out.strictly_one_balanced = false;
  }
  return out;
}

}  // namespace

TEST_SUITE("patterns") {
  TEST_CASE("one density") {
    CHECK(one_density(named_pattern("K4")) == 2);
    CHECK(one_density(named_pattern("K3")) == Rational(3, 2));
    CHECK(one_density(named_pattern("C4")) == Rational(4, 3));
    try {
      one_density(SimpleGraph(1));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_pattern);
    }
  }

  TEST_CASE("balance classes") {
    auto k5 = classify_balance(named_pattern("K5"));
    CHECK(k5.one_balanced);
    CHECK(k5.strictly_one_balanced);
    auto c4 = classify_balance(named_pattern("C4"));
    CHECK(c4.one_balanced);
    CHECK(c4.strictly_one_balanced);
    // Whole bowtie ties with a triangle: balanced, not strictly.
    auto bt = classify_balance(bowtie());
    CHECK(bt.one_balanced);
    CHECK_FALSE(bt.strictly_one_balanced);
  }

  TEST_CASE("balance agrees with all-subgraph oracle up to six vertices") {
    int checked = 0;
    for (int n = 2; n <= 6; ++n) {
      for (const auto& g : testing::connected_graph_classes(n)) {
        const auto fast = classify_balance(g);
        const auto slow = naive_balance(g);
        CHECK(fast.one_balanced == slow.one_balanced);
        CHECK(fast.strictly_one_balanced == slow.strictly_one_balanced);
        ++checked;
      }
    }
    CHECK(checked == 1 + 2 + 6 + 21 + 112);
  }

  TEST_CASE("vertex connectivity") {
    CHECK(vertex_connectivity(named_pattern("K3")) == 2);
    CHECK(vertex_connectivity(named_pattern("C5")) == 2);
    CHECK(vertex_connectivity(named_pattern("K4")) == 3);
    CHECK(vertex_connectivity(named_pattern("P4")) == 1);
    SimpleGraph split(4);
    split.add_edge(0, 1);
    split.add_edge(2, 3);
    CHECK(vertex_connectivity(split) == 0);
  }

  TEST_CASE("edge swap rigidity") {
    CHECK(edge_swap_rigid(named_pattern("K4")));
    CHECK_FALSE(edge_swap_rigid(named_pattern("P3")));
    CHECK(edge_swap_rigid(named_pattern("C5")));
    CHECK(edge_swap_rigid(named_pattern("petersen")));
  }

  TEST_CASE("nice patterns") {
    for (const char* k : {"K4", "K5", "K6"}) CHECK(is_nice(named_pattern(k)));
    CHECK_FALSE(is_nice(named_pattern("K3")));
    CHECK_FALSE(is_nice(named_pattern("C4")));
    CHECK_FALSE(is_nice(named_pattern("C5")));
    for (int n = 2; n <= 6; ++n)
      for (const auto& g : testing::connected_graph_classes(n))
        if (vertex_connectivity(g) <= 2) CHECK_FALSE(is_nice(g));
  }

  TEST_CASE("flags stay consistent") {
    for (const char* name : {"K3", "K4", "K5", "C4", "C5", "C6", "P3", "P4", "petersen"}) {
      const auto f = named_pattern(name);
      const auto& fl = f.flags();
      CHECK(fl.nice == (fl.strictly_one_balanced && fl.three_connected && fl.edge_swap_rigid));
      if (fl.strictly_one_balanced) CHECK(fl.two_connected);
      Rational expect(f.size(), f.order() - 1);
      expect.canonicalize();
      CHECK(f.one_density() == expect);
    }
  }

  TEST_CASE("automorphisms") {
    CHECK(automorphism_count(named_pattern("K4")) == 24);
    CHECK(automorphism_count(named_pattern("C4")) == 8);
    CHECK(automorphism_count(named_pattern("P3")) == 2);
    CHECK(automorphism_count(named_pattern("petersen")) == 120);
    try {
      automorphism_count(SimpleGraph::path(11));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::cap_exceeded);
    }
  }

  TEST_CASE("copy enumeration") {
    CHECK(enumerate_copies(named_pattern("K3"), 4).size() == 4);
    CHECK(enumerate_copies(named_pattern("P3"), 3).size() == 3);
    CHECK(enumerate_copies(named_pattern("K4"), 3).empty());

    // C4 in K5 by brute force over 4-edge subsets.
    const auto c4 = named_pattern("C4");
    const auto copies = enumerate_copies(c4, 5);
    CHECK(copies.size() == 15);
    const auto all = SimpleGraph::complete(5).edges();
    std::set<std::vector<Edge>> brute;
    for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
      if (std::popcount(mask) != 4) continue;
      std::vector<Edge> chosen;
      std::set<int> verts;
      for (std::size_t i = 0; i < all.size(); ++i) {
        if (mask >> i & 1) {
          chosen.push_back(all[i]);
          verts.insert({all[i].first, all[i].second});
        }
      }
      if (verts.size() != 4) continue;
      std::vector<int> vs(verts.begin(), verts.end());
      SimpleGraph sub(4);
      for (auto [u, v] : chosen)
        sub.add_edge(static_cast<int>(std::find(vs.begin(), vs.end(), u) - vs.begin()),
                     static_cast<int>(std::find(vs.begin(), vs.end(), v) - vs.begin()));
      if (are_isomorphic(sub, c4.graph())) brute.insert(chosen);
    }
    std::set<std::vector<Edge>> listed;
    for (const auto& c : copies) listed.insert(c.edges);
    CHECK(listed == brute);
    CHECK(std::is_sorted(copies.begin(), copies.end()));
  }

  TEST_CASE("copy count formula") {
    for (const char* name : {"K3", "K4", "C4", "C5", "P3", "P4"}) {
      const auto f = named_pattern(name);
      for (int n = f.order(); n <= 7; ++n) CHECK(BigInt(enumerate_copies(f, n).size()) == copy_count(f, n));
    }
  }

  TEST_CASE("G(n,p) sampling") {
    RandomStream rng(1, 0);
    CHECK(sample_gnp(10, 0, rng).edge_count() == 0);
    CHECK(sample_gnp(10, 1, rng) == SimpleGraph::complete(10));

    const int draws = 400;
    double total = 0;
    for (int i = 0; i < draws; ++i) total += static_cast<double>(sample_gnp(100, Rational(1, 2), rng).edge_count());
    const double sigma = std::sqrt(4950 * 0.25 / draws);
    CHECK(std::abs(total / draws - 2475) < 4 * sigma);

    // Per-edge frequencies.
    const int n = 6;
    const int rounds = 10000;
    const Rational p(3, 10);
    std::vector<int> hits(pair_count(n), 0);
    for (int i = 0; i < rounds; ++i)
      for (const auto& [u, v] : sample_gnp(n, p, rng).edges()) ++hits[edge_id(u, v, n)];
    const double sd = testing::binomial_sigma(0.3, rounds);
    for (int h : hits) CHECK(std::abs(h / double(rounds) - 0.3) < 4 * sd);
  }

  TEST_CASE("direct factor search") {
    CHECK(find_factor_direct(SimpleGraph::complete(8), named_pattern("K4")).has_value());
    CHECK_FALSE(find_factor_direct(SimpleGraph(4), named_pattern("K4")).has_value());
    auto paths = find_factor_direct(SimpleGraph::cycle(8), named_pattern("P4"));
    REQUIRE(paths.has_value());
    std::set<int> covered;
    for (const auto& c : *paths) {
      for (int v : c.vertices()) CHECK(covered.insert(v).second);
      CHECK(SimpleGraph::cycle(8).contains_edges(c.edges));
    }
    CHECK(covered.size() == 8);
    CHECK_FALSE(find_factor_direct(SimpleGraph::path(8), named_pattern("C4")).has_value());
    try {
      find_factor_direct(SimpleGraph::complete(7), named_pattern("K4"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::divisibility);
    }
  }

  TEST_CASE("direct factor matches naive partition search") {
    // Naive: try every way to split the vertex set into ordered blocks.
    const auto f = named_pattern("P3");
    RandomStream rng(7, 3);
    for (int trial = 0; trial < 150; ++trial) {
      const SimpleGraph g = sample_gnp(6, Rational(2, 5), rng);
      std::vector<int> perm{0, 1, 2, 3, 4, 5};
      bool naive = false;
      do {
        bool ok = true;
        for (int b = 0; b < 2 && ok; ++b) {
          std::vector<int> block(perm.begin() + 3 * b, perm.begin() + 3 * b + 3);
          ok = g.contains_edges(make_copy(f, block).edges);
        }
        naive = ok;
      } while (!naive && std::next_permutation(perm.begin(), perm.end()));
      CHECK(find_factor_direct(g, f).has_value() == naive);
    }
  }

  TEST_CASE("strictly balanced implies 2-connected") {
    for (int n = 2; n <= 6; ++n)
      for (const auto& g : testing::connected_graph_classes(n))
        if (classify_balance(g).strictly_one_balanced) CHECK(is_two_connected(g));
    CHECK(is_two_connected(SimpleGraph::complete(2)));
    CHECK_FALSE(is_two_connected(SimpleGraph::path(3)));
  }
}
