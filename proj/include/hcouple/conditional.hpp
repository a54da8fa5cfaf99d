#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcouple/rational.hpp"
#include "hcouple/weighted_count.hpp"

namespace hcouple {

/// Sorted list of edge ids (see edge_id) in the ambient complete graph.
using EdgeSet = std::vector<int>;

EdgeSet set_union(const EdgeSet& a, const EdgeSet& b);
EdgeSet set_difference(const EdgeSet& a, const EdgeSet& b);
bool intersects(const EdgeSet& a, const EdgeSet& b);
bool is_subset(const EdgeSet& a, const EdgeSet& b);

/// What the exploration has revealed: every edge of R is present and none
/// of the failed sets E_i' = E_i \ R is fully present.  With thinning each
/// failed set also carries its own Bernoulli(c) coin, so the constraint is
/// "not (coin and all of E_i')".
struct HistoryConstraint {
  EdgeSet revealed;
  std::vector<EdgeSet> failed_sets;
  std::optional<Rational> thinning;
};

struct ConditionalQuery {
  EdgeSet target;  // E_j' = E_j \ R
  HistoryConstraint constraint;
  Rational edge_probability;
};

struct ConditionalLimits {
  int shannon_var_cap = 40;
  int brute_force_var_cap = 24;
};

/// Builds the query for testing copy E_j given full copy edge sets of the
/// failed tests and the revealed set R.
ConditionalQuery make_query(const EdgeSet& target_full, std::span<const EdgeSet> failed_full,
                            const EdgeSet& revealed, const Rational& p,
                            std::optional<Rational> thinning = std::nullopt);

/// Indices of failed sets linked to the target through chains of shared
/// unrevealed edges.  Everything else cancels in the conditional ratio.
std::vector<int> target_component(const ConditionalQuery& q);

/// P(test succeeds | history), exact.  In thinned mode the test also needs
/// the target's own coin, so the result carries a factor c.
Rational conditional_probability(const ConditionalQuery& q, const ConditionalLimits& limits = {});

/// As above, reusing a weigher built for the same p and violation factor
/// (1 - c, or 0 without thinning) so its memo carries across queries.
Rational conditional_probability(const ConditionalQuery& q, ClauseWeigher* shared,
                                 const ConditionalLimits& limits = {});

/// Same quantity by direct enumeration of every assignment of every
/// unrevealed edge mentioned by the query (no component pruning).
Rational brute_force_conditional(const ConditionalQuery& q, const ConditionalLimits& limits = {});

/// N_1: failed tests whose unrevealed edges meet the target's.
std::vector<int> overlapping_failed(const EdgeSet& target_full, std::span<const EdgeSet> failed_full,
                                    const EdgeSet& revealed);

/// Members of N_1 whose whole edge set lies inside E_j u R.
std::vector<int> covered_failed(const EdgeSet& target_full, std::span<const EdgeSet> failed_full,
                                const EdgeSet& revealed);

/// Q_j = sum over N_1 of p^|E_i \ (E_j u R)|.
Rational q_statistic(const EdgeSet& target_full, std::span<const EdgeSet> failed_full, const EdgeSet& revealed,
                     const Rational& p);

/// p^|E_j \ R| (1 - Q_j), or c p^|E_j \ R| (1 - c Q_j) with thinning.  Not clamped.
Rational pi_lower_bound(const EdgeSet& target_full, std::span<const EdgeSet> failed_full,
                        const EdgeSet& revealed, const Rational& p,
                        std::optional<Rational> thinning = std::nullopt);

/// Line-oriented dump of a query for debugging.
std::string describe(const ConditionalQuery& q);

}  // namespace hcouple
