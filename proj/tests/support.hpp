#pragma once
// Shared helpers for the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "hcouple/conditional.hpp"
#include "hcouple/coupling.hpp"
#include "hcouple/pattern.hpp"
#include "hcouple/random.hpp"

namespace hcouple::testing {

/// One representative per isomorphism class of graphs on exactly n
/// vertices, grown one vertex at a time.
inline std::vector<SimpleGraph> graph_classes(int n) {
  std::vector<SimpleGraph> level{SimpleGraph(1)};
  for (int k = 1; k < n; ++k) {
    std::map<std::pair<std::size_t, std::vector<int>>, std::vector<SimpleGraph>> buckets;
    std::vector<SimpleGraph> next;
    for (const auto& g : level) {
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        SimpleGraph h(k + 1);
        for (const auto& [u, v] : g.edges()) h.add_edge(u, v);
        for (int v = 0; v < k; ++v)
          if (mask >> v & 1) h.add_edge(v, k);
        std::vector<int> degrees;
        for (int v = 0; v <= k; ++v) degrees.push_back(h.degree(v));
        std::sort(degrees.begin(), degrees.end());
        auto& bucket = buckets[{h.edge_count(), degrees}];
        bool seen = false;
        for (const auto& other : bucket) {
          if (are_isomorphic(other, h)) {
            seen = true;
            break;
          }
        }
        if (!seen) {
          bucket.push_back(h);
          next.push_back(h);
        }
      }
    }
    level = std::move(next);
  }
  return n == 0 ? std::vector<SimpleGraph>{} : level;
}

inline std::vector<SimpleGraph> connected_graph_classes(int n) {
  std::vector<SimpleGraph> out;
  for (auto& g : graph_classes(n))
    if (g.is_connected()) out.push_back(std::move(g));
  return out;
}

/// A history reachable by the coupling: tests a random prefix of a shuffled
/// copy order against a sampled G, then asks about the next copy.
inline ConditionalQuery random_history(const CopyCatalog& catalog, const Rational& p, RandomStream& rng,
                                       std::optional<Rational> thinning = std::nullopt) {
  const SimpleGraph g = sample_gnp(catalog.n, p, rng);
  std::vector<int> order(catalog.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  shuffle(order, rng);
  const std::size_t prefix = rng.uniform(order.size());
  EdgeSet revealed;
  std::vector<EdgeSet> failed;
  for (std::size_t i = 0; i < prefix; ++i) {
    const int j = order[i];
    bool ok = g.contains_edges(catalog.copies[j].edges);
    if (thinning) ok = rng.bernoulli(*thinning) && ok;
    if (ok) {
      revealed = set_union(revealed, catalog.edge_sets[j]);
    } else {
      failed.push_back(catalog.edge_sets[j]);
    }
  }
  return make_query(catalog.edge_sets[order[prefix]], failed, revealed, p, thinning);
}

inline double binomial_sigma(double q, double trials) { return std::sqrt(q * (1 - q) / trials); }

}  // namespace hcouple::testing
