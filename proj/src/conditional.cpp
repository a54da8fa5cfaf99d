#include "hcouple/conditional.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

#include "hcouple/errors.hpp"
#include "hcouple/kernels.hpp"
#include "hcouple/weighted_count.hpp"

namespace hcouple {

EdgeSet set_union(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

EdgeSet set_difference(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool intersects(const EdgeSet& a, const EdgeSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

bool is_subset(const EdgeSet& a, const EdgeSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

namespace {

void validate(const ConditionalQuery& q) {
  if (!is_probability(q.edge_probability)) {
    throw Error(ErrorKind::out_of_range, "edge probability outside [0,1]");
  }
  if (q.constraint.thinning && !is_probability(*q.constraint.thinning)) {
    throw Error(ErrorKind::out_of_range, "thinning probability outside [0,1]");
  }
  if (intersects(q.target, q.constraint.revealed)) {
    throw Error(ErrorKind::contract_violation, "target set meets the revealed set");
  }
  for (const auto& f : q.constraint.failed_sets) {
    if (intersects(f, q.constraint.revealed)) {
      throw Error(ErrorKind::contract_violation, "failed set meets the revealed set");
    }
  }
}

Rational violation_factor(const ConditionalQuery& q) {
  return q.constraint.thinning ? Rational(1 - *q.constraint.thinning) : Rational(0);
}

Rational own_coin(const ConditionalQuery& q) {
  return q.constraint.thinning ? *q.constraint.thinning : Rational(1);
}

// Local 0..m-1 numbering of the edges mentioned by the given sets.  With
// identity set, edge ids are used as bit positions directly, which keeps
// masks stable across queries that share a weigher.
struct LocalVars {
  EdgeSet edges;
  bool identity = false;
  std::uint64_t mask(const EdgeSet& s) const {
    std::uint64_t m = 0;
    for (int e : s) {
      auto pos = identity ? e : std::lower_bound(edges.begin(), edges.end(), e) - edges.begin();
      m |= std::uint64_t{1} << pos;
    }
    return m;
  }
};

}  // namespace

ConditionalQuery make_query(const EdgeSet& target_full, std::span<const EdgeSet> failed_full,
                            const EdgeSet& revealed, const Rational& p, std::optional<Rational> thinning) {
  ConditionalQuery q;
  q.edge_probability = p;
  q.target = set_difference(target_full, revealed);
  q.constraint.revealed = revealed;
  q.constraint.thinning = std::move(thinning);
  for (const auto& f : failed_full) q.constraint.failed_sets.push_back(set_difference(f, revealed));
  return q;
}

std::vector<int> target_component(const ConditionalQuery& q) {
  const auto& failed = q.constraint.failed_sets;
  std::vector<char> in(failed.size(), 0);
  EdgeSet reach = q.target;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < failed.size(); ++i) {
      if (in[i] || !intersects(failed[i], reach)) continue;
      in[i] = 1;
      reach = set_union(reach, failed[i]);
      grew = true;
    }
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < failed.size(); ++i)
    if (in[i]) out.push_back(static_cast<int>(i));
  return out;
}

Rational conditional_probability(const ConditionalQuery& q, const ConditionalLimits& limits) {
  return conditional_probability(q, nullptr, limits);
}

Rational conditional_probability(const ConditionalQuery& q, ClauseWeigher* shared, const ConditionalLimits& limits) {
  validate(q);
  const Rational& p = q.edge_probability;
  const Rational factor = violation_factor(q);

  // An empty failed set means the test failed on its coin alone (thinned)
  // or is contradictory (plain).
  for (const auto& f : q.constraint.failed_sets) {
    if (f.empty() && factor == 0) {
      throw Error(ErrorKind::zero_probability_condition, "a failed set is fully revealed as present");
    }
  }

  const auto component = target_component(q);
  const Rational base = pow(p, static_cast<unsigned>(q.target.size())) * own_coin(q);
  if (component.empty()) return base;

  LocalVars vars{q.target};
  for (int i : component) vars.edges = set_union(vars.edges, q.constraint.failed_sets[i]);
  vars.identity = shared != nullptr && vars.edges.back() < 64;
  const int cap = std::min(limits.shannon_var_cap, 64);
  if (static_cast<int>(vars.edges.size()) > cap) {
    throw Error(ErrorKind::component_too_large,
                "conditioning component has " + std::to_string(vars.edges.size()) +
                    " unrevealed edges, cap is " + std::to_string(cap));
  }

  std::vector<std::uint64_t> clauses;
  for (int i : component) clauses.push_back(vars.mask(q.constraint.failed_sets[i]));
  const std::uint64_t target_mask = vars.mask(q.target);

  std::optional<ClauseWeigher> own;
  if (shared == nullptr) own.emplace(p, factor);
  ClauseWeigher& weigher = shared ? *shared : *own;
  Rational denominator = weigher.weight(clauses);
  if (denominator == 0) {
    throw Error(ErrorKind::zero_probability_condition, "conditioning event has probability zero");
  }
  std::vector<std::uint64_t> reduced;
  for (auto c : clauses) reduced.push_back(c & ~target_mask);
  Rational numerator = pow(p, static_cast<unsigned>(q.target.size())) * weigher.weight(reduced);
  return numerator / denominator * own_coin(q);
}

Rational brute_force_conditional(const ConditionalQuery& q, const ConditionalLimits& limits) {
  validate(q);
  const Rational& p = q.edge_probability;
  const Rational factor = violation_factor(q);

  LocalVars vars{q.target};
  for (const auto& f : q.constraint.failed_sets) vars.edges = set_union(vars.edges, f);
  const int m = static_cast<int>(vars.edges.size());
  const int cap = std::min(limits.brute_force_var_cap, kernels::kMaxHistogramVars);
  if (m > cap) {
    throw Error(ErrorKind::cap_exceeded, "brute force scope has " + std::to_string(m) +
                                             " unrevealed edges, cap is " + std::to_string(cap));
  }
  std::vector<std::uint32_t> clauses;
  for (const auto& f : q.constraint.failed_sets) clauses.push_back(static_cast<std::uint32_t>(vars.mask(f)));
  const auto target = static_cast<std::uint32_t>(vars.mask(q.target));

  const auto hist = kernels::assignment_histogram(m, clauses, target);

  std::vector<Rational> by_ones(m + 1);
  for (int k = 0; k <= m; ++k) by_ones[k] = pow(p, k) * pow(Rational(1 - p), static_cast<unsigned>(m - k));
  std::vector<Rational> by_violations(clauses.size() + 1);
  for (std::size_t v = 0; v <= clauses.size(); ++v) by_violations[v] = pow(factor, static_cast<unsigned>(v));

  Rational numerator = 0;
  Rational denominator = 0;
  for (int t = 0; t <= 1; ++t) {
    for (int k = 0; k <= m; ++k) {
      for (std::size_t v = 0; v <= clauses.size(); ++v) {
        const std::uint64_t count = hist.at(t, k, static_cast<int>(v));
        if (count == 0 || by_violations[v] == 0) continue;
        Rational w = by_ones[k] * by_violations[v] * Rational(BigInt(static_cast<unsigned long>(count)));
        denominator += w;
        if (t == 1) numerator += w;
      }
    }
  }
  if (denominator == 0) {
    throw Error(ErrorKind::zero_probability_condition, "conditioning event has probability zero");
  }
  return numerator / denominator * own_coin(q);
}

std::vector<int> overlapping_failed(const EdgeSet& target_full, std::span<const EdgeSet> failed_full,
                                    const EdgeSet& revealed) {
  const EdgeSet target = set_difference(target_full, revealed);
  std::vector<int> out;
  for (std::size_t i = 0; i < failed_full.size(); ++i)
    if (intersects(set_difference(failed_full[i], revealed), target)) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> covered_failed(const EdgeSet& target_full, std::span<const EdgeSet> failed_full,
                                const EdgeSet& revealed) {
  const EdgeSet known = set_union(target_full, revealed);
  std::vector<int> out;
  for (int i : overlapping_failed(target_full, failed_full, revealed))
    if (is_subset(failed_full[i], known)) out.push_back(i);
  return out;
}

Rational q_statistic(const EdgeSet& target_full, std::span<const EdgeSet> failed_full, const EdgeSet& revealed,
                     const Rational& p) {
  const EdgeSet known = set_union(target_full, revealed);
  Rational q = 0;
  for (int i : overlapping_failed(target_full, failed_full, revealed)) {
    q += pow(p, static_cast<unsigned>(set_difference(failed_full[i], known).size()));
  }
  return q;
}

Rational pi_lower_bound(const EdgeSet& target_full, std::span<const EdgeSet> failed_full,
                        const EdgeSet& revealed, const Rational& p, std::optional<Rational> thinning) {
  const Rational q = q_statistic(target_full, failed_full, revealed, p);
  const Rational lead = pow(p, static_cast<unsigned>(set_difference(target_full, revealed).size()));
  if (thinning) return *thinning * lead * (1 - *thinning * q);
  return lead * (1 - q);
}

std::string describe(const ConditionalQuery& q) {
  std::ostringstream out;
  auto dump = [&](const EdgeSet& s) {
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << s[i];
  };
  out << "p " << to_string(q.edge_probability) << "\n";
  if (q.constraint.thinning) out << "thinning " << to_string(*q.constraint.thinning) << "\n";
  out << "revealed ";
  dump(q.constraint.revealed);
  out << "\ntarget ";
  dump(q.target);
  out << "\n";
  const auto component = target_component(q);
  for (std::size_t i = 0; i < q.constraint.failed_sets.size(); ++i) {
    bool linked = std::binary_search(component.begin(), component.end(), static_cast<int>(i));
    out << "failed " << i << (linked ? " linked " : " detached ");
    dump(q.constraint.failed_sets[i]);
    out << "\n";
  }
  return out.str();
}

}  // namespace hcouple
