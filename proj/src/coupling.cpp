#include "hcouple/coupling.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "hcouple/errors.hpp"
#include "hcouple/weighted_count.hpp"

namespace hcouple {

const char* to_string(CouplingMode m) { return m == CouplingMode::plain ? "plain" : "thinned"; }

const char* to_string(CopyOrder o) { return o == CopyOrder::canonical ? "canonical" : "shuffled"; }

const char* to_string(StepClass c) {
  switch (c) {
    case StepClass::normal: return "normal";
    case StepClass::dangerous: return "dangerous";
    case StepClass::deadly: return "deadly";
  }
  return "?";
}

const char* to_string(Diagnosis d) {
  switch (d) {
    case Diagnosis::b1: return "B1";
    case Diagnosis::b2: return "B2";
    case Diagnosis::unexplained: return "unexplained";
  }
  return "?";
}

Rational derive_pi_plain(const PatternGraph& f, const Rational& p, const Rational& beta) {
  if (!is_probability(p)) throw Error(ErrorKind::out_of_range, "p outside [0,1]");
  if (beta < 0 || beta >= 1) throw Error(ErrorKind::invalid_constants, "slack beta must lie in [0,1)");
  return (1 - beta) * pow(p, static_cast<unsigned>(f.size()));
}

Rational derive_pi_thinned(const PatternGraph& f, const Rational& p, const Rational& a, const Rational& c) {
  if (!is_probability(p)) throw Error(ErrorKind::out_of_range, "p outside [0,1]");
  if (c <= 0 || c >= 1) throw Error(ErrorKind::invalid_constants, "thinning c must lie in (0,1)");
  if (a <= 0) throw Error(ErrorKind::invalid_constants, "a must be positive");
  if (c * (1 - c) <= a) {
    throw Error(ErrorKind::invalid_constants,
                "c(1-c) = " + to_string(Rational(c * (1 - c))) + " does not exceed a = " + to_string(a));
  }
  if (f.order() == 3 && f.is_complete() && a >= Rational(1, 4)) {
    throw Error(ErrorKind::invalid_constants, "triangle coupling needs a < 1/4");
  }
  return a * pow(p, static_cast<unsigned>(f.size()));
}

ThinningConstants auto_thinning_constants(std::uint64_t mf_bound) {
  Rational c(1, 2 * (static_cast<unsigned long>(mf_bound) + 1));
  c.canonicalize();
  return {c / 2, c};
}

void CouplingConfig::validate() const {
  if (!pattern) throw Error(ErrorKind::config, "coupling config has no pattern");
  if (n < 1) throw Error(ErrorKind::config, "n must be positive");
  if (!is_probability(p)) throw Error(ErrorKind::out_of_range, "p outside [0,1]");
  if (!is_probability(pi)) throw Error(ErrorKind::out_of_range, "pi outside [0,1]");
  if (mode == CouplingMode::thinned && (c <= 0 || c >= 1)) {
    throw Error(ErrorKind::invalid_constants, "thinned mode needs c in (0,1)");
  }
  if (delta_cap && *delta_cap < 0) throw Error(ErrorKind::config, "delta cap must be non-negative");
}

int default_delta(const PatternGraph& f, int n, const Rational& pi) {
  const int r = f.order();
  if (n < r) return r;
  // Copies through a fixed vertex: M r / n.
  Rational through(copy_count(f, n) * r, BigInt(n));
  Rational expected = pi * through;
  if (expected < 1) expected = 1;
  BigInt up;
  mpz_cdiv_q(up.get_mpz_t(), expected.get_num_mpz_t(), expected.get_den_mpz_t());
  return 3 * r * static_cast<int>(up.get_si()) + r;
}

EdgeSet edge_ids(const std::vector<Edge>& edges, int n) {
  EdgeSet out;
  out.reserve(edges.size());
  for (auto [u, v] : edges) out.push_back(edge_id(u, v, n));
  std::sort(out.begin(), out.end());
  return out;
}

CopyCatalog CopyCatalog::build(const PatternGraph& f, int n) {
  CopyCatalog cat;
  cat.n = n;
  cat.copies = enumerate_copies(f, n);
  cat.edge_sets.reserve(cat.copies.size());
  for (const auto& copy : cat.copies) cat.edge_sets.push_back(edge_ids(copy.edges, n));
  return cat;
}

StepClass classify_step(CouplingMode mode, int covered, bool pi_j_below_pi, bool included) {
  if (pi_j_below_pi && included) return StepClass::deadly;
  const bool dangerous = mode == CouplingMode::plain ? covered >= 1 : covered >= 2;
  return dangerous ? StepClass::dangerous : StepClass::normal;
}

bool unexplained_q_consistent(const FailureDiagnosis& d, CouplingMode mode, const Rational& beta,
                              const Rational& a, const Rational& c) {
  if (d.kind != Diagnosis::unexplained) return true;
  if (mode == CouplingMode::plain) return d.q > beta;
  return c * d.q > 1 - a / c;
}

CouplingEngine::CouplingEngine(CouplingConfig config) : config_(std::move(config)) {
  config_.validate();
  catalog_ = CopyCatalog::build(*config_.pattern, config_.n);
  delta_ = config_.delta_cap ? *config_.delta_cap : default_delta(*config_.pattern, config_.n, config_.pi);
}

namespace {

// Samples the unrevealed edges that occur in failed sets from their law
// given the history, one constraint component at a time.
void complete_constrained_edges(const std::vector<EdgeSet>& failed_sets, const Rational& p,
                                const Rational& violation, int shannon_cap, std::vector<char>& present,
                                std::vector<char>& decided, RandomStream& rng) {
  std::vector<int> open;
  for (std::size_t i = 0; i < failed_sets.size(); ++i)
    if (!failed_sets[i].empty()) open.push_back(static_cast<int>(i));

  std::vector<char> done(failed_sets.size(), 0);
  for (int seed : open) {
    if (done[seed]) continue;
    std::vector<int> members{seed};
    EdgeSet vars = failed_sets[seed];
    done[seed] = 1;
    bool grew = true;
    while (grew) {
      grew = false;
      for (int i : open) {
        if (done[i] || !intersects(failed_sets[i], vars)) continue;
        done[i] = 1;
        members.push_back(i);
        vars = set_union(vars, failed_sets[i]);
        grew = true;
      }
    }
    if (static_cast<int>(vars.size()) > std::min(shannon_cap, 64)) {
      throw Error(ErrorKind::component_too_large,
                  "completion component has " + std::to_string(vars.size()) + " edges");
    }
    std::vector<std::uint64_t> clauses;
    for (int i : members) {
      std::uint64_t m = 0;
      for (int e : failed_sets[i]) m |= std::uint64_t{1} << (std::lower_bound(vars.begin(), vars.end(), e) - vars.begin());
      clauses.push_back(m);
    }
    ClauseWeigher weigher(p, violation);
    for (std::size_t k = 0; k < vars.size(); ++k) {
      const std::uint64_t bit = std::uint64_t{1} << k;
      std::vector<std::uint64_t> set_branch;
      for (auto c : clauses) set_branch.push_back(c & ~bit);
      const Rational total = weigher.weight(clauses);
      const Rational prob = p * weigher.weight(set_branch) / total;
      const bool on = BernoulliThreshold(prob).draw(rng);
      present[vars[k]] = on;
      decided[vars[k]] = 1;
      if (on) {
        clauses = std::move(set_branch);
      } else {
        std::erase_if(clauses, [bit](std::uint64_t c) { return (c & bit) != 0; });
      }
    }
  }
}

}  // namespace

CouplingResult CouplingEngine::run(RandomStream& rng) const { return run_impl(rng, false); }

CouplingResult CouplingEngine::run_lazy(RandomStream& rng) const { return run_impl(rng, true); }

CouplingResult CouplingEngine::run_impl(RandomStream& rng, bool lazy) const {
  const CouplingConfig& cfg = config_;
  const int n = cfg.n;
  const auto thin = cfg.thinning();
  const Rational violation = thin ? Rational(1 - *thin) : Rational(0);
  const std::size_t copies = catalog_.size();

  CouplingResult res;
  res.delta = delta_;
  res.h.pattern = cfg.pattern;
  res.h.ambient_n = n;

  std::vector<char> present;
  std::vector<char> coins;
  if (!lazy) {
    res.g = sample_gnp(n, cfg.p, rng);
    present.assign(pair_count(n), 0);
    for (auto [u, v] : res.g.edges()) present[edge_id(u, v, n)] = 1;
    if (thin) {
      BernoulliThreshold coin(cfg.c);
      coins.resize(copies);
      for (auto& x : coins) x = coin.draw(rng);
    }
  }

  std::vector<int> order(copies);
  std::iota(order.begin(), order.end(), 0);
  if (cfg.order == CopyOrder::shuffled) shuffle(order, rng);

  ClauseWeigher weigher(cfg.p, violation);
  const BernoulliThreshold pi_coin(cfg.pi);
  EdgeSet revealed;
  std::vector<EdgeSet> failed;
  res.steps.reserve(copies);

  for (std::size_t step = 0; step < copies; ++step) {
    const int idx = order[step];
    const EdgeSet& target = catalog_.edge_sets[idx];
    StepRecord rec;
    rec.step = static_cast<int>(step);
    rec.copy = idx;

    const ConditionalQuery query = make_query(target, failed, revealed, cfg.p, thin);
    rec.unrevealed = static_cast<int>(query.target.size());
    rec.pi_j = conditional_probability(query, &weigher, cfg.limits);
    rec.q = q_statistic(target, failed, revealed, cfg.p);
    rec.lower_bound = pi_lower_bound(target, failed, revealed, cfg.p, thin);
    rec.covered = static_cast<int>(covered_failed(target, failed, revealed).size());
    rec.dangerous = cfg.mode == CouplingMode::plain ? rec.covered >= 1 : rec.covered >= 2;

    const auto u = rng.next_u128();
    const bool below = rec.pi_j < cfg.pi;
    if (below) {
      rec.inclusion_probability = cfg.pi;
      rec.included = pi_coin.accepts(u);
    } else if (cfg.pi == 0) {
      rec.inclusion_probability = 0;
    } else {
      const Rational ratio = cfg.pi / rec.pi_j;
      rec.inclusion_probability = ratio * rec.pi_j;
      if (BernoulliThreshold(ratio).accepts(u)) {
        rec.tested = true;
        if (lazy) {
          rec.success = BernoulliThreshold(rec.pi_j).draw(rng);
        } else {
          rec.success = std::all_of(target.begin(), target.end(), [&](int e) { return present[e] != 0; }) &&
                        (!thin || coins[idx]);
        }
        if (rec.success) {
          revealed = set_union(revealed, target);
          rec.included = true;
        } else {
          failed.push_back(target);
        }
      }
    }
    rec.cls = classify_step(cfg.mode, rec.covered, below, rec.included);
    if (rec.included) {
      res.h.add(catalog_.copies[idx]);
      res.included.push_back(idx);
    }
    if (rec.cls == StepClass::deadly && !res.deadly_step) res.deadly_step = rec.step;
    res.steps.push_back(std::move(rec));
  }
  res.failed = res.deadly_step.has_value();

  if (lazy) {
    present.assign(pair_count(n), 0);
    std::vector<char> decided(pair_count(n), 0);
    for (int e : revealed) present[e] = decided[e] = 1;
    std::vector<EdgeSet> open;
    for (const auto& f : failed) open.push_back(set_difference(f, revealed));
    complete_constrained_edges(open, cfg.p, violation, cfg.limits.shannon_var_cap, present, decided, rng);
    const BernoulliThreshold edge_coin(cfg.p);
    res.g = SimpleGraph(n);
    for (int e = 0; e < pair_count(n); ++e) {
      if (!decided[e]) present[e] = edge_coin.draw(rng);
      if (present[e]) {
        auto [a, b] = edge_from_id(e, n);
        res.g.add_edge(a, b);
      }
    }
  }

  if (res.failed) {
    res.diagnosis = diagnose(res);
    res.b1 = res.diagnosis->b1;
    res.b2 = res.diagnosis->b2;
  }
  return res;
}

FailureDiagnosis CouplingEngine::diagnose(const CouplingResult& result) const {
  if (!result.deadly_step) throw Error(ErrorKind::contract_violation, "diagnosis needs a failed run");
  FailureDiagnosis d;
  d.step = *result.deadly_step;
  const StepRecord& rec = result.steps.at(d.step);
  d.q = rec.q;
  d.dangerous = rec.dangerous;

  FGraph partial{config_.pattern, config_.n, {}};
  for (int s = 0; s <= d.step; ++s)
    if (result.steps[s].included) partial.add(catalog_.copies[result.steps[s].copy]);

  d.max_degree = underlying_graph(partial).max_degree();
  d.b1 = d.max_degree > delta_;
  if (auto witness = find_avoidable_configuration(to_hypergraph(partial), config_.avoidable)) {
    d.b2 = true;
    d.witness = std::move(*witness);
  }
  d.kind = d.b1 ? Diagnosis::b1 : d.b2 ? Diagnosis::b2 : Diagnosis::unexplained;
  return d;
}

CouplingResult run_coupling(const CouplingConfig& config, RandomStream& rng) {
  return CouplingEngine(config).run(rng);
}

CouplingResult run_coupling_lazy_equivalence(const CouplingConfig& config, RandomStream& rng) {
  return CouplingEngine(config).run_lazy(rng);
}

std::string trace_jsonl(const CouplingResult& result) {
  std::string out;
  for (const auto& rec : result.steps) {
    nlohmann::json line = {
        {"step", rec.step},
        {"copy", rec.copy},
        {"unrevealed", rec.unrevealed},
        {"pi_j", to_string(rec.pi_j)},
        {"q", to_string(rec.q)},
        {"lower_bound", to_string(rec.lower_bound)},
        {"class", to_string(rec.cls)},
        {"tested", rec.tested},
        {"success", rec.success},
        {"included", rec.included},
    };
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace hcouple
