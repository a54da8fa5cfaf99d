#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "hcouple/errors.hpp"
#include "hcouple/harness.hpp"
#include "hcouple/io.hpp"

using namespace hcouple;
using nlohmann::json;

namespace {

ExperimentConfig couple_config(std::uint64_t trials, int jobs) {
  return ExperimentConfig::from_json({{"experiment", "couple"},
                                      {"pattern", "K3"},
                                      {"n", 6},
                                      {"p", "1/2"},
                                      {"mode", "thinned"},
                                      {"a", "1/5"},
                                      {"c", "1/2"},
                                      {"trials", trials},
                                      {"seed", 2024},
                                      {"jobs", jobs}});
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hcouple_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HCOUPLE_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("schedule constraints") {
    const auto k4 = named_pattern("K4");
    try {
      schedule_parameters(k4, 100, 0.9, 1.0);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_constants);
    }
    const auto s = schedule_parameters(k4, 100, 1.01, 1.0);
    CHECK(s.p > 0);
    CHECK(s.p <= 1);
    CHECK(s.pi > 0);
    CHECK(s.c > 0);
    CHECK(s.c <= 1);
    CHECK(s.p.get_den() <= 1'000'000);
    CHECK(std::abs(to_double(s.p) - std::pow(std::log(100.0), 1.01) / 10) < 1e-6);

    // p > 1 at this n.
    try {
      schedule_parameters(named_pattern("K3"), 20, 3.0, 1.0);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::out_of_range);
    }

    const double n = 1e4;
    CHECK(p0_reference(named_pattern("K3"), 10000) == doctest::Approx(std::cbrt(2 * std::log(n) / (n * n))));
  }

  TEST_CASE("config parsing") {
    auto cfg = couple_config(10, 2);
    CHECK(cfg.kind == ExperimentKind::couple);
    CHECK(*cfg.p == Rational(1, 2));
    CHECK(*cfg.a == Rational(1, 5));
    auto decimal = ExperimentConfig::from_json({{"p", 0.85}, {"n", 8}, {"pattern", "K4"}});
    CHECK(*decimal.p == Rational(17, 20));
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"experiment", "dance"}}), Error);
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"mode", "odd"}}), Error);
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"n", "six"}}), Error);
    auto round = ExperimentConfig::from_json(cfg.to_json());
    CHECK(round.to_json() == cfg.to_json());
  }

  TEST_CASE("resolution") {
    auto r = resolve_coupling(couple_config(1, 1));
    CHECK(r.config.mode == CouplingMode::thinned);
    CHECK(r.config.pi == Rational(1, 40));
    auto bad = couple_config(1, 1);
    bad.a = Rational(3, 10);
    CHECK_THROWS_AS(resolve_coupling(bad), Error);
    auto missing = ExperimentConfig::from_json({{"n", 6}});
    CHECK_THROWS_AS(resolve_coupling(missing), Error);
    auto autoc = ExperimentConfig::from_json({{"n", 6}, {"p", "1/2"}, {"mode", "thinned_auto"}, {"pattern", "K4"}});
    auto ra = resolve_coupling(autoc);
    CHECK(ra.c == Rational(1, 2));
    CHECK(ra.a == Rational(1, 4));
  }

  TEST_CASE("zero trials") {
    auto rep = run(couple_config(0, 1));
    CHECK(rep.trials.empty());
    CHECK(rep.summary["trials"] == 0);
    CHECK(rep.csv.rfind("# hcouple trials v1\n", 0) == 0);
  }

  TEST_CASE("determinism across thread counts") {
    const auto one = run(couple_config(300, 1));
    const auto eight = run(couple_config(300, 8));
    const auto again = run(couple_config(300, 1));
    CHECK(one.csv == eight.csv);
    CHECK(one.csv == again.csv);
    auto other = couple_config(300, 1);
    other.seed = 2025;
    CHECK(run(other).csv != one.csv);
  }

  TEST_CASE("aggregates add up") {
    const auto rep = run(couple_config(400, 2));
    std::uint64_t failed = 0, h = 0;
    for (const auto& t : rep.trials) {
      failed += t.failed;
      h += t.h_edges;
    }
    CHECK(rep.summary["failure"]["count"] == failed);
    CHECK(rep.summary["trials"] == 400);
    std::uint64_t per_copy = 0;
    for (const auto& c : rep.summary["hyperedges"]["per_copy"]) per_copy += c["count"].get<std::uint64_t>();
    CHECK(per_copy == h);
    for (const char* key : {"failure", "avoidable_configuration"}) CHECK(rep.summary[key].contains("se"));
    // One CSV row per trial plus two header lines.
    CHECK(std::count(rep.csv.begin(), rep.csv.end(), '\n') == 402);
  }

  TEST_CASE("errors stay per trial") {
    auto cfg = couple_config(5, 1);
    cfg.limits.shannon_var_cap = 2;
    const auto rep = run(cfg);
    CHECK(rep.trials.size() == 5);
    CHECK(rep.summary["errors"].get<int>() > 0);
    for (const auto& t : rep.trials)
      if (!t.error.empty()) CHECK(t.error.rfind("component-too-large", 0) == 0);
  }

  TEST_CASE("threshold scan") {
    auto cfg = ExperimentConfig::from_json({{"experiment", "scan"},
                                            {"pattern", "K4"},
                                            {"n", 12},
                                            {"mode", "plain"},
                                            {"scan_pipeline", false},
                                            {"p_grid", {"0", "3/10", "1/2", "7/10", "9/10", "1"}},
                                            {"trials", 120},
                                            {"seed", 9}});
    const auto rep = run(cfg);
    const auto& rows = rep.summary["rows"];
    REQUIRE(rows.size() == 6);
    CHECK(rows[0]["direct"]["count"] == 0);
    CHECK(rows[5]["direct"]["rate"] == 1.0);
    // Shared streams make G monotone in p, so the rate is too.
    for (std::size_t i = 1; i < rows.size(); ++i)
      CHECK(rows[i]["direct"]["count"].get<int>() >= rows[i - 1]["direct"]["count"].get<int>());

    auto piped = ExperimentConfig::from_json({{"experiment", "scan"},
                                              {"pattern", "K3"},
                                              {"n", 6},
                                              {"p_grid", {"0", "1"}},
                                              {"beta", "0"},
                                              {"trials", 5}});
    const auto pr = run(piped);
    CHECK(pr.summary["rows"][0]["pipeline"]["count"] == 0);
    CHECK(pr.summary["rows"][0]["direct"]["count"] == 0);
    CHECK(pr.summary["rows"][1]["pipeline"]["count"] == 5);
    CHECK(pr.summary["rows"][1]["direct"]["count"] == 5);
  }

  TEST_CASE("classify and matching experiments") {
    auto c = run(ExperimentConfig::from_json({{"experiment", "classify"}, {"pattern", "K4"}, {"n", 6}}));
    CHECK(c.summary["nice"] == true);
    CHECK(c.summary["aut"] == 24);
    CHECK(c.summary["copies_in_K_n"] == "15");

    auto dir = scratch("matching");
    write_file(dir / "h.txt", "3 6 2\n0 1 2\n3 4 5\n");
    auto m = run(ExperimentConfig::from_json({{"experiment", "matching"}, {"hypergraph", "h.txt"}}, dir));
    CHECK(m.summary["found"] == true);
  }

  TEST_CASE("oracle experiment writes files") {
    auto cfg = ExperimentConfig::from_json(
        {{"experiment", "oracle"}, {"pattern", "K3"}, {"oracle", {{"lemma", "mf"}, {"max_hyperedges", 3}}}});
    auto rep = run(cfg);
    CHECK(rep.summary["result"]["lower_bound"].get<int>() >= 1);
    auto dir = scratch("oracle");
    write_outputs(rep, dir);
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK(std::filesystem::exists(dir / "mf_witness.fg"));
    auto hf = parse_fgraph(read_file(dir / "mf_witness.fg"));
    CHECK(hf.f_edges.size() == 3);
  }
}

TEST_SUITE("io") {
  TEST_CASE("round trips") {
    SimpleGraph g = SimpleGraph::cycle(5);
    CHECK(parse_graph(format_graph(g)) == g);
    Hypergraph h(3, 7, {{0, 1, 2}, {2, 3, 4}, {0, 1, 2}});
    auto back = parse_hypergraph(format_hypergraph(h));
    CHECK(back.edges() == h.edges());
    CHECK(back.ambient_order() == 7);

    auto c4 = std::make_shared<const PatternGraph>(named_pattern("C4"));
    FGraph hf{c4, 6, {}};
    hf.add(make_copy(*c4, {0, 1, 2, 3}));
    hf.add(make_copy(*c4, {2, 3, 4, 5}));
    auto fb = parse_fgraph(format_fgraph(hf));
    CHECK(fb.f_edges == hf.f_edges);

    SimpleGraph odd(4);
    odd.add_edge(0, 1);
    odd.add_edge(1, 2);
    odd.add_edge(1, 3);
    FGraph inl{std::make_shared<const PatternGraph>(odd, "star"), 5, {}};
    inl.add(make_copy(*inl.pattern, {4, 0, 1, 2}));
    auto ib = parse_fgraph(format_fgraph(inl));
    CHECK(ib.pattern->graph() == odd);
    CHECK(ib.f_edges == inl.f_edges);
  }

  TEST_CASE("comments and errors") {
    auto g = parse_graph("# a triangle\n3 3\n0 1\n\n1 2\n0 2\n");
    CHECK(g == SimpleGraph::complete(3));
    CHECK_THROWS_AS(parse_graph("3 2\n0 1\n"), Error);
    CHECK_THROWS_AS(parse_graph("3 1\n0 3\n"), Error);
    CHECK_THROWS_AS(parse_hypergraph("3 5 1\n0 1 1\n"), Error);
    CHECK_THROWS_AS(load_pattern("no_such_pattern"), Error);
  }

  TEST_CASE("pattern files") {
    auto dir = scratch("pattern");
    write_file(dir / "diamond.txt", "4 5\n0 1\n0 2\n1 2\n1 3\n2 3\n");
    auto f = load_pattern("diamond.txt", dir);
    CHECK(f->size() == 5);
    CHECK(f->aut_count() == 4);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    auto dir = scratch("cli");
    CHECK(run_cli("classify K4") == 0);
    CHECK(run_cli("classify --config " + (dir / "missing.json").string()) == 2);
    write_file(dir / "bad.json", "{\"experiment\": \"couple\", \"n\": 6, \"p\": \"3/2\"}");
    CHECK(run_cli("couple --config " + (dir / "bad.json").string()) == 2);
    write_file(dir / "h.txt", "3 18 3\n0 1 2\n3 4 5\n6 7 8\n");
    CHECK(run_cli("matching " + (dir / "h.txt").string()) == 0);
    write_file(dir / "hbad.txt", "3 7 1\n0 1 2\n");
    CHECK(run_cli("matching " + (dir / "hbad.txt").string()) == 2);
    write_file(dir / "oracle.json", R"({"oracle": {"lemma": "lemma2", "r": 4, "max_hyperedges": 3, "max_vertices": 10, "node_cap": 1}})");
    CHECK(run_cli("oracle --config " + (dir / "oracle.json").string()) == 3);
    write_file(dir / "couple.json", R"({"n": 6, "p": "1/2", "pattern": "K3", "trials": 20})");
    CHECK(run_cli("couple --config " + (dir / "couple.json").string() + " --seed 4 --jobs 2 --out " +
                  (dir / "out").string()) == 0);
    CHECK(std::filesystem::exists(dir / "out" / "trials.csv"));
    CHECK(std::filesystem::exists(dir / "out" / "summary.json"));
    CHECK(run_cli("bogus") == 2);
  }
}
