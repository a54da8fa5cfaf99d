#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hcouple/coupling.hpp"
#include "hcouple/hypergraph.hpp"

namespace hcouple {

struct Matching {
  std::vector<int> edge_indices;      // into the input hypergraph
  std::vector<Hyperedge> hyperedges;  // pairwise disjoint
  std::vector<int> covered;           // sorted
  bool perfect = false;
};

/// Exact cover of all ambient vertices by hyperedges, branching on the
/// uncovered vertex with the fewest usable hyperedges.
std::optional<Matching> perfect_matching(const Hypergraph& h, std::uint64_t node_budget = 50'000'000);

struct FactorCertificate {
  std::vector<FCopy> copies;
  SimpleGraph host;
};

bool verify_certificate(const FactorCertificate& cert);

struct FactorOutcome {
  CouplingResult coupling;
  bool matching_exists = false;
  std::optional<FactorCertificate> certificate;
};

/// Coupling, then a perfect matching of the F-edge vertex sets, mapped back
/// to copies of F in G.  The matching is searched even when the coupling
/// failed so callers can compare; no certificate is produced in that case.
FactorOutcome factor_via_coupling(const CouplingEngine& engine, RandomStream& rng,
                                  std::uint64_t node_budget = 50'000'000);

std::optional<FactorCertificate> factor_via_coupling(const CouplingConfig& config, RandomStream& rng);

}  // namespace hcouple
