#include <doctest.h>

#include <json.hpp>

#include "hcouple/coupling.hpp"
#include "hcouple/errors.hpp"
#include "support.hpp"

using namespace hcouple;

namespace {

std::shared_ptr<const PatternGraph> pattern(const char* name) {
  return std::make_shared<const PatternGraph>(named_pattern(name));
}

CouplingConfig plain(const char* name, int n, const Rational& p, const Rational& beta) {
  CouplingConfig c;
  c.n = n;
  c.pattern = pattern(name);
  c.p = p;
  c.pi = derive_pi_plain(*c.pattern, p, beta);
  return c;
}

CouplingConfig thinned(int n, const Rational& p, const Rational& a, const Rational& c) {
  CouplingConfig cfg;
  cfg.n = n;
  cfg.pattern = pattern("K3");
  cfg.p = p;
  cfg.mode = CouplingMode::thinned;
  cfg.c = c;
  cfg.pi = derive_pi_thinned(*cfg.pattern, p, a, c);
  return cfg;
}

void check_invariants(const CouplingConfig& cfg, const CouplingResult& res) {
  for (const auto& s : res.steps) {
    CHECK(s.lower_bound <= s.pi_j);
    CHECK(s.inclusion_probability == cfg.pi);
    if (cfg.mode == CouplingMode::plain && s.covered >= 1) CHECK(s.pi_j == 0);
    if (!s.dangerous) CHECK(s.covered <= (cfg.mode == CouplingMode::plain ? 0 : 1));
  }
  if (!res.failed) {
    for (const auto& c : res.h.f_edges) CHECK(res.g.contains_edges(c.edges));
  }
  CHECK(res.failed == res.deadly_step.has_value());
  CHECK(res.h.f_edges.size() == res.included.size());
}

}  // namespace

TEST_SUITE("coupling") {
  TEST_CASE("pi derivation") {
    const Rational p(1, 3);
    CHECK(derive_pi_plain(named_pattern("K4"), p, Rational(1, 2)) == pow(p, 6) / 2);
    CHECK(derive_pi_thinned(named_pattern("K3"), p, Rational(1, 5), Rational(1, 2)) == pow(p, 3) / 5);
    try {
      derive_pi_thinned(named_pattern("K3"), p, Rational(3, 10), Rational(1, 2));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_constants);
    }
    try {
      derive_pi_plain(named_pattern("K3"), p, Rational(1));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_constants);
    }
    const auto k = auto_thinning_constants(0);
    CHECK(k.c == Rational(1, 2));
    CHECK(k.a == Rational(1, 4));
    CHECK(auto_thinning_constants(1).c == Rational(1, 4));
  }

  TEST_CASE("catalog and delta") {
    const auto cat = CopyCatalog::build(named_pattern("K3"), 6);
    CHECK(cat.size() == 20);
    CHECK(cat.edge_sets[0].size() == 3);
    CHECK(default_delta(named_pattern("K3"), 6, Rational(1, 40)) == 3 * 3 + 3);
  }

  TEST_CASE("endpoints") {
    RandomStream rng(1, 0);
    auto zero = plain("K4", 7, 0, Rational(1, 2));
    auto r0 = run_coupling(zero, rng);
    CHECK(r0.g.edge_count() == 0);
    CHECK(r0.h.f_edges.empty());
    CHECK_FALSE(r0.failed);

    auto one = plain("K4", 7, 1, Rational(1, 2));
    auto r1 = run_coupling(one, rng);
    CHECK(r1.g == SimpleGraph::complete(7));
    CHECK_FALSE(r1.failed);
    for (const auto& s : r1.steps) CHECK(s.pi_j == 1);
    check_invariants(one, r1);
  }

  TEST_CASE("step classification") {
    CHECK(classify_step(CouplingMode::plain, 0, false, false) == StepClass::normal);
    CHECK(classify_step(CouplingMode::plain, 1, true, false) == StepClass::dangerous);
    CHECK(classify_step(CouplingMode::plain, 1, true, true) == StepClass::deadly);
    CHECK(classify_step(CouplingMode::thinned, 1, true, false) == StepClass::normal);
    CHECK(classify_step(CouplingMode::thinned, 2, true, false) == StepClass::dangerous);
    CHECK(classify_step(CouplingMode::thinned, 2, true, true) == StepClass::deadly);
  }

  TEST_CASE("invariants over many runs") {
    const std::vector<CouplingConfig> configs{
        plain("K3", 6, Rational(1, 2), Rational(1, 2)), plain("K4", 7, Rational(1, 4), Rational(1, 2)),
        plain("C4", 6, Rational(2, 5), Rational(1, 2)), thinned(6, Rational(1, 2), Rational(1, 5), Rational(1, 2)),
        plain("K4", 8, Rational(17, 20), Rational(1, 2))};
    for (const auto& cfg : configs) {
      CouplingEngine engine(cfg);
      for (int t = 0; t < 40; ++t) {
        RandomStream rng(77, t);
        auto res = engine.run(rng);
        check_invariants(cfg, res);
        if (res.failed) {
          REQUIRE(res.diagnosis.has_value());
          CHECK(res.steps[*res.deadly_step].cls == StepClass::deadly);
        }
      }
    }
  }

  TEST_CASE("diagnosis") {
    // Δ = 0 makes any failure a B1.
    auto cfg = plain("K4", 8, Rational(17, 20), Rational(1, 2));
    cfg.delta_cap = 0;
    CouplingEngine engine(cfg);
    int failures = 0;
    for (int t = 0; t < 20; ++t) {
      RandomStream rng(3, t);
      auto res = engine.run(rng);
      if (!res.failed) continue;
      ++failures;
      CHECK(res.diagnosis->kind == Diagnosis::b1);
    }
    CHECK(failures > 0);

    // Two copies of P3 on one vertex set: a repeated hyperedge, so B2.
    CouplingConfig pc;
    pc.n = 3;
    pc.pattern = pattern("P3");
    pc.p = Rational(1, 2);
    pc.pi = Rational(1, 2);
    pc.delta_cap = 100;
    CouplingEngine p3(pc);
    CouplingResult synthetic;
    for (int j = 0; j < 2; ++j) {
      StepRecord s;
      s.step = j;
      s.copy = j;
      s.included = true;
      s.dangerous = j == 1;
      synthetic.steps.push_back(s);
    }
    synthetic.deadly_step = 1;
    synthetic.failed = true;
    auto d = p3.diagnose(synthetic);
    CHECK(d.kind == Diagnosis::b2);
    CHECK(d.witness == std::vector<int>{0, 1});
  }

  TEST_CASE("unexplained failures carry the slack") {
    FailureDiagnosis d;
    d.q = Rational(3, 5);
    CHECK(unexplained_q_consistent(d, CouplingMode::plain, Rational(1, 2), Rational(1, 2), 1));
    d.q = Rational(1, 2);
    CHECK_FALSE(unexplained_q_consistent(d, CouplingMode::plain, Rational(1, 2), Rational(1, 2), 1));
    d.kind = Diagnosis::b2;
    CHECK(unexplained_q_consistent(d, CouplingMode::plain, Rational(1, 2), Rational(1, 2), 1));
  }

  TEST_CASE("lazy run matches eager run at the endpoints") {
    for (const Rational& p : {Rational(0), Rational(1)}) {
      auto cfg = plain("K3", 6, p, Rational(1, 2));
      if (p == 1) cfg.pi = 1;
      RandomStream a(9, 0), b(9, 0);
      auto eager = run_coupling(cfg, a);
      auto lazy = run_coupling_lazy_equivalence(cfg, b);
      CHECK(eager.g == lazy.g);
      CHECK(eager.included == lazy.included);
      CHECK(eager.failed == lazy.failed);
    }
  }

  TEST_CASE("lazy and eager joint laws agree") {
    auto cfg = plain("K3", 5, Rational(1, 2), Rational(1, 2));
    CouplingEngine engine(cfg);
    const int runs = 50000;
    std::map<std::pair<int, int>, std::array<int, 2>> cells;
    for (int t = 0; t < runs; ++t) {
      RandomStream a(21, t), b(22, t);
      auto e = engine.run(a);
      auto l = engine.run_lazy(b);
      ++cells[{static_cast<int>(e.h.f_edges.size()), static_cast<int>(e.g.edge_count())}][0];
      ++cells[{static_cast<int>(l.h.f_edges.size()), static_cast<int>(l.g.edge_count())}][1];
      if (t < 200) check_invariants(cfg, l);
    }
    double worst = 0;
    for (const auto& [cell, counts] : cells) {
      const double pooled = (counts[0] + counts[1]) / (2.0 * runs);
      const double sd = std::sqrt(pooled * (1 - pooled) * 2.0 / runs);
      if (sd == 0) continue;
      const double z = std::abs(counts[0] - counts[1]) / double(runs) / sd;
      worst = std::max(worst, z);
      CHECK(z < 4);
    }
    MESSAGE("lazy/eager worst cell z = " << worst);
  }

  TEST_CASE("trace lines") {
    auto cfg = plain("K3", 5, Rational(1, 2), Rational(1, 2));
    RandomStream rng(2, 2);
    auto res = run_coupling(cfg, rng);
    std::istringstream in(trace_jsonl(res));
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) {
      auto j = nlohmann::json::parse(line);
      CHECK(j.contains("pi_j"));
      CHECK(j.contains("q"));
      CHECK(j.contains("class"));
      ++lines;
    }
    CHECK(lines == res.steps.size());
  }

  TEST_CASE("shuffled order is reproducible") {
    auto cfg = plain("K3", 6, Rational(1, 2), Rational(1, 2));
    cfg.order = CopyOrder::shuffled;
    CouplingEngine engine(cfg);
    RandomStream a(5, 5), b(5, 5);
    auto x = engine.run(a);
    auto y = engine.run(b);
    CHECK(x.included == y.included);
    CHECK(x.g == y.g);
    std::vector<int> order;
    for (const auto& s : x.steps) order.push_back(s.copy);
    CHECK_FALSE(std::is_sorted(order.begin(), order.end()));
  }

  TEST_CASE("config validation") {
    auto cfg = plain("K3", 6, Rational(1, 2), Rational(1, 2));
    cfg.p = Rational(3, 2);
    CHECK_THROWS_AS(cfg.validate(), Error);
    auto t = thinned(6, Rational(1, 2), Rational(1, 5), Rational(1, 2));
    t.c = 1;
    CHECK_THROWS_AS(t.validate(), Error);
  }
}
