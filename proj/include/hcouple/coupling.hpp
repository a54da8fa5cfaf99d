#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hcouple/conditional.hpp"
#include "hcouple/graph.hpp"
#include "hcouple/hypergraph.hpp"
#include "hcouple/pattern.hpp"
#include "hcouple/random.hpp"
#include "hcouple/rational.hpp"

namespace hcouple {

enum class CouplingMode { plain, thinned };
enum class CopyOrder { canonical, shuffled };
enum class StepClass { normal, dangerous, deadly };

const char* to_string(CouplingMode m);
const char* to_string(CopyOrder o);
const char* to_string(StepClass c);

/// pi = (1 - beta) p^s.
Rational derive_pi_plain(const PatternGraph& f, const Rational& p, const Rational& beta);

/// pi = a p^s; requires c in (0,1) and c(1 - c) > a, and a < 1/4 for K_3.
Rational derive_pi_thinned(const PatternGraph& f, const Rational& p, const Rational& a, const Rational& c);

struct ThinningConstants {
  Rational a;
  Rational c;
};

/// c = 1/(2C) with C = M_F + 1, and a = c/2.
ThinningConstants auto_thinning_constants(std::uint64_t mf_bound);

struct CouplingConfig {
  int n = 0;
  std::shared_ptr<const PatternGraph> pattern;
  Rational p;
  Rational pi;
  CouplingMode mode = CouplingMode::plain;
  Rational c = 1;  // thinning coin, used in thinned mode only
  CopyOrder order = CopyOrder::canonical;
  std::optional<int> delta_cap;
  ConditionalLimits limits;
  AvoidableSearchOptions avoidable;

  void validate() const;
  std::optional<Rational> thinning() const {
    return mode == CouplingMode::thinned ? std::optional<Rational>(c) : std::nullopt;
  }
};

/// 3 r ceil(max(1, pi * expected copies through a vertex)) + r.
int default_delta(const PatternGraph& f, int n, const Rational& pi);

/// Every copy of F in K_n with its edge-id set, in canonical order.
struct CopyCatalog {
  int n = 0;
  std::vector<FCopy> copies;
  std::vector<EdgeSet> edge_sets;

  static CopyCatalog build(const PatternGraph& f, int n);
  std::size_t size() const { return copies.size(); }
};

EdgeSet edge_ids(const std::vector<Edge>& edges, int n);

struct StepRecord {
  int step = 0;
  int copy = 0;
  int unrevealed = 0;  // |E_j \ R|
  Rational pi_j;
  Rational q;
  Rational lower_bound;
  Rational inclusion_probability;
  int covered = 0;  // failed E_i inside E_j u R with E_i' meeting E_j'
  bool dangerous = false;
  StepClass cls = StepClass::normal;
  bool tested = false;
  bool success = false;
  bool included = false;
};

enum class Diagnosis { b1, b2, unexplained };
const char* to_string(Diagnosis d);

struct FailureDiagnosis {
  Diagnosis kind = Diagnosis::unexplained;
  int step = 0;
  bool b1 = false;
  bool b2 = false;
  bool dangerous = false;
  int max_degree = 0;
  Rational q;
  std::vector<int> witness;  // hyperedge indices of an avoidable configuration
};

struct CouplingResult {
  SimpleGraph g;
  FGraph h;
  std::vector<int> included;  // copy indices, in step order
  bool failed = false;
  std::optional<int> deadly_step;
  std::vector<StepRecord> steps;
  int delta = 0;
  bool b1 = false;
  bool b2 = false;
  std::optional<FailureDiagnosis> diagnosis;
};

/// Runs the sequential coupling for one trial.  The catalog is built once and shared
/// read-only between threads; run() keeps all mutable state local.
class CouplingEngine {
 public:
  explicit CouplingEngine(CouplingConfig config);

  const CouplingConfig& config() const { return config_; }
  const CopyCatalog& catalog() const { return catalog_; }
  int delta() const { return delta_; }

  /// G and the thinning coins are drawn upfront; tests read them.
  CouplingResult run(RandomStream& rng) const;

  /// Test outcomes drawn with probability pi_j; G completed at the end from
  /// its exact conditional law given the history.
  CouplingResult run_lazy(RandomStream& rng) const;

  /// Checks B1 and B2 on the hypergraph built up to and including the
  /// first deadly step.
  FailureDiagnosis diagnose(const CouplingResult& result) const;

 private:
  CouplingResult run_impl(RandomStream& rng, bool lazy) const;

  CouplingConfig config_;
  CopyCatalog catalog_;
  int delta_ = 0;
};

CouplingResult run_coupling(const CouplingConfig& config, RandomStream& rng);
CouplingResult run_coupling_lazy_equivalence(const CouplingConfig& config, RandomStream& rng);

/// Plain: dangerous when a failed copy lies inside E_j u R; thinned: two.
StepClass classify_step(CouplingMode mode, int covered, bool pi_j_below_pi, bool included);

/// For an unexplained failure the exact Q_j must exceed the slack: Q_j > beta
/// (plain) or c Q_j > 1 - a/c (thinned, pi = a p^s).
bool unexplained_q_consistent(const FailureDiagnosis& d, CouplingMode mode, const Rational& beta,
                              const Rational& a, const Rational& c);

/// One JSON object per step.
std::string trace_jsonl(const CouplingResult& result);

}  // namespace hcouple
