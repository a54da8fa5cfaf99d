#include "hcouple/harness.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "hcouple/errors.hpp"
#include "hcouple/io.hpp"
#include "hcouple/matching.hpp"
#include "hcouple/parallel.hpp"

namespace hcouple {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kScheduleDenominator = 1'000'000;

Rational rational_from_json(const json& j, const char* key) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return parse_rational(j.dump());
  throw Error(ErrorKind::config, std::string("'") + key + "' must be a number or a fraction string");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, std::string("bad value for '") + key + "': " + e.what());
  }
}

std::optional<Rational> optional_rational(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return rational_from_json(j[key], key);
}

double binomial_se(std::uint64_t count, std::uint64_t trials) {
  if (trials == 0) return 0;
  const double r = static_cast<double>(count) / static_cast<double>(trials);
  return std::sqrt(r * (1 - r) / static_cast<double>(trials));
}

const char* flag(bool b) { return b ? "1" : "0"; }

std::string csv_field(std::string s) {
  for (auto& ch : s)
    if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
  return s;
}

std::string format_rate(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::couple: return "couple";
    case ExperimentKind::scan: return "scan";
    case ExperimentKind::oracle: return "oracle";
    case ExperimentKind::matching: return "matching";
    case ExperimentKind::factor: return "factor";
    case ExperimentKind::classify: return "classify";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
  for (auto k : {ExperimentKind::couple, ExperimentKind::scan, ExperimentKind::oracle, ExperimentKind::matching,
                 ExperimentKind::factor, ExperimentKind::classify})
    if (text == to_string(k)) return k;
  throw Error(ErrorKind::config, "unknown experiment kind '" + text + "'");
}

double p0_reference(const PatternGraph& f, int n) {
  const double r = f.order();
  const double s = f.size();
  const double ln = std::log(static_cast<double>(n));
  return std::pow(static_cast<double>(f.aut_count()) / r * std::pow(n, -r + 1) * ln, 1.0 / s);
}

ScheduleValues schedule_parameters(const PatternGraph& f, int n, double a_exp, double c_const) {
  const double d1 = to_double(f.one_density());
  if (!(d1 * a_exp > 2)) {
    throw Error(ErrorKind::invalid_constants, "schedule needs d1 * a > 2, got " + std::to_string(d1 * a_exp));
  }
  if (c_const <= 0) throw Error(ErrorKind::invalid_constants, "schedule constant C must be positive");
  if (n < 2) throw Error(ErrorKind::out_of_range, "schedule needs n >= 2");
  const double ln = std::log(static_cast<double>(n));
  const double p = std::pow(ln, a_exp) * std::pow(n, -1.0 / d1);
  const double pi = c_const * ln * std::pow(n, -(f.order() - 1.0));
  if (!(p > 0 && p <= 1)) throw Error(ErrorKind::out_of_range, "scheduled p = " + std::to_string(p) + " is not in (0,1]");
  if (!(pi > 0 && pi <= 1)) throw Error(ErrorKind::out_of_range, "scheduled pi is not in (0,1]");
  ScheduleValues v;
  v.p = limit_denominator(p, kScheduleDenominator);
  v.pi = limit_denominator(pi, kScheduleDenominator);
  if (v.p == 0 || v.pi == 0) throw Error(ErrorKind::out_of_range, "scheduled value rounds to zero at this n");
  const double c = 2 * to_double(v.pi) / std::pow(to_double(v.p), f.size());
  if (!(c > 0 && c <= 1)) {
    throw Error(ErrorKind::out_of_range, "scheduled c = " + std::to_string(c) + " is not in (0,1]; n too small");
  }
  v.c = limit_denominator(c, kScheduleDenominator);
  v.p0 = p0_reference(f, n);
  return v;
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorKind::config, "config must be a JSON object");
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.kind = parse_experiment_kind(get_or<std::string>(j, "experiment", "couple"));
  c.pattern = get_or<std::string>(j, "pattern", c.pattern);
  c.n = get_or<int>(j, "n", 0);
  c.p = optional_rational(j, "p");
  if (j.contains("schedule")) {
    const auto& s = j["schedule"];
    c.schedule_a_exp = get_or<double>(s, "a_exp", 0);
    c.schedule_c = get_or<double>(s, "C", 1.0);
  }
  if (j.contains("p_grid")) {
    for (const auto& x : j["p_grid"]) c.p_grid.push_back(rational_from_json(x, "p_grid"));
  }
  c.mode = get_or<std::string>(j, "mode", c.mode);
  if (c.mode != "plain" && c.mode != "thinned" && c.mode != "thinned_auto") {
    throw Error(ErrorKind::config, "mode must be plain, thinned or thinned_auto");
  }
  if (auto b = optional_rational(j, "beta")) c.beta = *b;
  c.a = optional_rational(j, "a");
  c.c = optional_rational(j, "c");
  c.pi = optional_rational(j, "pi");
  const auto order = get_or<std::string>(j, "order", "canonical");
  if (order == "canonical") {
    c.order = CopyOrder::canonical;
  } else if (order == "shuffled") {
    c.order = CopyOrder::shuffled;
  } else {
    throw Error(ErrorKind::config, "order must be canonical or shuffled");
  }
  if (j.contains("delta_cap") && !j["delta_cap"].is_null()) c.delta_cap = get_or<int>(j, "delta_cap", 0);
  if (j.contains("limits")) {
    c.limits.shannon_var_cap = get_or<int>(j["limits"], "shannon_var_cap", c.limits.shannon_var_cap);
    c.limits.brute_force_var_cap = get_or<int>(j["limits"], "brute_force_var_cap", c.limits.brute_force_var_cap);
  }
  c.avoidable_node_cap = get_or<std::uint64_t>(j, "avoidable_node_cap", c.avoidable_node_cap);
  c.matching_node_budget = get_or<std::uint64_t>(j, "matching_node_budget", c.matching_node_budget);
  c.trials = get_or<std::uint64_t>(j, "trials", 0);
  c.seed = get_or<std::uint64_t>(j, "seed", 0);
  c.jobs = get_or<int>(j, "jobs", 1);
  c.lazy = get_or<bool>(j, "lazy", false);
  c.trace = get_or<bool>(j, "trace", false);
  c.scan_pipeline = get_or<bool>(j, "scan_pipeline", true);
  if (j.contains("oracle")) {
    const auto& o = j["oracle"];
    c.oracle.lemma = get_or<std::string>(o, "lemma", c.oracle.lemma);
    auto& s = c.oracle.spec;
    s.r = get_or<int>(o, "r", s.r);
    s.max_hyperedges = get_or<int>(o, "max_hyperedges", s.max_hyperedges);
    s.max_vertices = get_or<int>(o, "max_vertices", s.max_vertices);
    const auto mode = get_or<std::string>(o, "mode", "exhaustive");
    if (mode != "exhaustive" && mode != "random") throw Error(ErrorKind::config, "oracle mode must be exhaustive or random");
    s.mode = mode == "random" ? EnumerationMode::random : EnumerationMode::exhaustive;
    s.count = get_or<std::uint64_t>(o, "count", 0);
    s.avoidable.node_cap = get_or<std::uint64_t>(o, "node_cap", s.avoidable.node_cap);
    c.oracle.random_instances = get_or<std::uint64_t>(o, "random_instances", 0);
    c.oracle.decoration_budget = get_or<std::uint64_t>(o, "decoration_budget", c.oracle.decoration_budget);
  }
  c.hypergraph = get_or<std::string>(j, "hypergraph", "");
  if (j.contains("out")) c.out = get_or<std::string>(j, "out", "");
  if (c.jobs < 1) throw Error(ErrorKind::config, "jobs must be at least 1");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, "invalid JSON in " + path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

json ExperimentConfig::to_json() const {
  json j = {
      {"experiment", hcouple::to_string(kind)},
      {"pattern", pattern},
      {"n", n},
      {"mode", mode},
      {"beta", hcouple::to_string(beta)},
      {"order", hcouple::to_string(order)},
      {"trials", trials},
      {"seed", seed},
      {"jobs", jobs},
      {"lazy", lazy},
  };
  if (p) j["p"] = hcouple::to_string(*p);
  if (schedule_a_exp) j["schedule"] = {{"a_exp", *schedule_a_exp}, {"C", schedule_c}};
  if (a) j["a"] = hcouple::to_string(*a);
  if (c) j["c"] = hcouple::to_string(*c);
  if (pi) j["pi"] = hcouple::to_string(*pi);
  if (delta_cap) j["delta_cap"] = *delta_cap;
  if (!p_grid.empty()) {
    j["p_grid"] = json::array();
    for (const auto& x : p_grid) j["p_grid"].push_back(hcouple::to_string(x));
  }
  if (kind == ExperimentKind::oracle) {
    j["oracle"] = {{"lemma", oracle.lemma},
                   {"r", oracle.spec.r},
                   {"max_hyperedges", oracle.spec.max_hyperedges},
                   {"max_vertices", oracle.spec.max_vertices},
                   {"mode", oracle.spec.mode == EnumerationMode::random ? "random" : "exhaustive"},
                   {"count", oracle.spec.count}};
  }
  return j;
}

ResolvedCoupling resolve_coupling(const ExperimentConfig& cfg, const std::optional<Rational>& p_override) {
  auto f = load_pattern(cfg.pattern, cfg.base_dir);
  if (cfg.n < 1) throw Error(ErrorKind::config, "n must be positive");
  ResolvedCoupling out;
  CouplingConfig& cc = out.config;
  cc.n = cfg.n;
  cc.pattern = f;
  cc.order = cfg.order;
  cc.delta_cap = cfg.delta_cap;
  cc.limits = cfg.limits;
  cc.avoidable.node_cap = cfg.avoidable_node_cap;
  out.beta = cfg.beta;
  const auto s = static_cast<unsigned>(f->size());

  if (cfg.schedule_a_exp && !p_override) {
    const auto sv = schedule_parameters(*f, cfg.n, *cfg.schedule_a_exp, cfg.schedule_c);
    cc.p = sv.p;
    cc.pi = sv.pi;
    out.c = sv.c;
    out.a = sv.pi / pow(sv.p, s);
    if (sv.c < 1) {
      cc.mode = CouplingMode::thinned;
      cc.c = sv.c;
    }
    cc.validate();
    return out;
  }

  if (p_override) {
    cc.p = *p_override;
  } else if (cfg.p) {
    cc.p = *cfg.p;
  } else {
    throw Error(ErrorKind::config, "config needs 'p' or a 'schedule'");
  }

  if (cfg.mode == "plain") {
    cc.pi = cfg.pi ? *cfg.pi : derive_pi_plain(*f, cc.p, cfg.beta);
    out.a = 1 - cfg.beta;
    out.c = 1;
  } else if (cfg.mode == "thinned") {
    if (!cfg.a || !cfg.c) throw Error(ErrorKind::config, "thinned mode needs 'a' and 'c'");
    cc.mode = CouplingMode::thinned;
    cc.c = *cfg.c;
    out.a = *cfg.a;
    out.c = *cfg.c;
    const Rational derived = derive_pi_thinned(*f, cc.p, *cfg.a, *cfg.c);
    cc.pi = cfg.pi ? *cfg.pi : derived;
  } else {
    EnumerationSpec spec;
    spec.r = f->order();
    spec.max_hyperedges = std::min(f->size(), 6);
    spec.max_vertices = 2 * f->order();
    spec.mode = EnumerationMode::random;
    spec.seed = cfg.seed;
    const auto bound = bound_MF(f, spec);
    const auto k = auto_thinning_constants(bound.lower_bound);
    cc.mode = CouplingMode::thinned;
    cc.c = k.c;
    out.a = k.a;
    out.c = k.c;
    cc.pi = cfg.pi ? *cfg.pi : k.a * pow(cc.p, s);
  }
  cc.validate();
  return out;
}

TrialRecord run_trial(const CouplingEngine& engine, const ResolvedCoupling& resolved, ExperimentKind kind,
                      std::uint64_t seed, std::uint64_t trial, bool lazy, std::uint64_t matching_budget,
                      std::string* trace) {
  TrialRecord rec;
  rec.trial = trial;
  RandomStream rng(seed, trial);
  rec.stream_key = rng.key();
  const auto start = Clock::now();
  const auto& cfg = engine.config();
  try {
    CouplingResult res;
    if (kind == ExperimentKind::factor) {
      auto outcome = factor_via_coupling(engine, rng, matching_budget);
      res = std::move(outcome.coupling);
      rec.matching = outcome.matching_exists;
      rec.factor = outcome.certificate.has_value();
      if (outcome.certificate) rec.certificate_ok = verify_certificate(*outcome.certificate);
      rec.direct_factor = find_factor_direct(res.g, *cfg.pattern).has_value();
    } else {
      res = lazy ? engine.run_lazy(rng) : engine.run(rng);
    }
    rec.failed = res.failed;
    rec.deadly_step = res.deadly_step;
    rec.h_edges = static_cast<int>(res.h.f_edges.size());
    rec.g_edges = static_cast<int>(res.g.edge_count());
    rec.included = res.included;
    rec.h_avoidable = find_avoidable_configuration(to_hypergraph(res.h), cfg.avoidable).has_value();
    for (const auto& s : res.steps) {
      if (s.lower_bound > s.pi_j) rec.lower_bound_ok = false;
      if (s.inclusion_probability != cfg.pi) rec.inclusion_exact = false;
    }
    if (!res.failed) {
      for (const auto& copy : res.h.f_edges)
        if (!res.g.contains_edges(copy.edges)) rec.sound = false;
    }
    if (res.diagnosis) {
      const auto& d = *res.diagnosis;
      rec.diagnosis = to_string(d.kind);
      rec.deadly_q = d.q;
      rec.diagnosis_ok = unexplained_q_consistent(d, cfg.mode, resolved.beta, resolved.a, resolved.c);
      const bool clique_chain = cfg.mode == CouplingMode::plain && cfg.pattern->is_complete() && cfg.pattern->order() >= 4;
      if (clique_chain && d.dangerous && !(d.b1 || d.b2)) rec.diagnosis_ok = false;
    }
    if (trace) *trace = trace_jsonl(res);
  } catch (const Error& e) {
    rec.error = std::string(to_string(e.kind())) + ": " + e.what();
  }
  rec.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return rec;
}

std::string trials_csv(const std::vector<TrialRecord>& trials) {
  std::ostringstream out;
  out << "# hcouple trials v1\n";
  out << "trial,stream,failed,deadly_step,diagnosis,deadly_q,h_edges,g_edges,h_avoidable,matching,factor,"
         "direct_factor,certificate_ok,lower_bound_ok,inclusion_exact,sound,diagnosis_ok,error\n";
  for (const auto& t : trials) {
    char stream[20];
    std::snprintf(stream, sizeof stream, "%016llx", static_cast<unsigned long long>(t.stream_key));
    out << t.trial << ',' << stream << ',' << flag(t.failed) << ','
        << (t.deadly_step ? std::to_string(*t.deadly_step) : "") << ',' << t.diagnosis << ','
        << (t.deadly_q ? to_string(*t.deadly_q) : "") << ',' << t.h_edges << ',' << t.g_edges << ','
        << flag(t.h_avoidable) << ',' << flag(t.matching) << ',' << flag(t.factor) << ',' << flag(t.direct_factor)
        << ',' << flag(t.certificate_ok) << ',' << flag(t.lower_bound_ok) << ',' << flag(t.inclusion_exact) << ','
        << flag(t.sound) << ',' << flag(t.diagnosis_ok) << ',' << csv_field(t.error) << '\n';
  }
  return out.str();
}

json rate_json(std::uint64_t count, std::uint64_t trials) {
  const double rate = trials ? static_cast<double>(count) / static_cast<double>(trials) : 0.0;
  return {{"count", count}, {"trials", trials}, {"rate", rate}, {"se", binomial_se(count, trials)}};
}

json report_json(const LemmaReport& report) {
  json j = {{"lemma", report.lemma},
            {"instances_checked", report.instances_checked},
            {"instances_skipped", report.instances_skipped},
            {"counterexamples", report.counterexamples.size()},
            {"elapsed_seconds", report.elapsed_seconds},
            {"tallies", report.tallies}};
  j["counterexample_descriptions"] = json::array();
  for (const auto& c : report.counterexamples) j["counterexample_descriptions"].push_back(c.description);
  return j;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::couple && cfg.kind != ExperimentKind::factor) {
    throw Error(ErrorKind::config, "run_experiment handles couple and factor experiments");
  }
  const auto start = Clock::now();
  const ResolvedCoupling resolved = resolve_coupling(cfg);
  const CouplingEngine engine(resolved.config);
  const auto& cc = engine.config();
  const std::uint64_t trials = cfg.trials;

  ExperimentReport report;
  report.trials.resize(trials);
  std::vector<std::string> traces(cfg.trace ? trials : 0);
  parallel_for(trials, cfg.jobs, [&](std::size_t i) {
    report.trials[i] = run_trial(engine, resolved, cfg.kind, cfg.seed, i, cfg.lazy, cfg.matching_node_budget,
                                 cfg.trace ? &traces[i] : nullptr);
  });
  report.csv = trials_csv(report.trials);
  for (std::size_t i = 0; i < traces.size(); ++i)
    report.extra_files.emplace_back("traces/trial_" + std::to_string(i) + ".jsonl", traces[i]);

  // Aggregation in trial order.
  const std::size_t m = engine.catalog().size();
  const bool track_pairs = m <= 1000;
  std::vector<std::uint64_t> single(m, 0);
  std::vector<std::uint64_t> pairs(track_pairs ? m * (m - (m > 0)) / 2 : 0, 0);
  auto pair_index = [m](std::size_t i, std::size_t j) { return i * (2 * m - i - 1) / 2 + (j - i - 1); };
  std::uint64_t failed = 0, errors = 0, b1 = 0, b2 = 0, unexplained = 0, avoidable = 0;
  std::uint64_t unsound = 0, bound_bad = 0, inclusion_bad = 0, diagnosis_bad = 0;
  std::uint64_t matchings = 0, factors = 0, direct = 0, cert_bad = 0, ok_and_matching = 0;
  double runtime = 0;
  for (const auto& t : report.trials) {
    runtime += t.runtime_seconds;
    if (!t.error.empty()) {
      ++errors;
      continue;
    }
    failed += t.failed;
    b1 += t.diagnosis == "B1";
    b2 += t.diagnosis == "B2";
    unexplained += t.diagnosis == "unexplained";
    avoidable += t.h_avoidable;
    unsound += !t.sound;
    bound_bad += !t.lower_bound_ok;
    inclusion_bad += !t.inclusion_exact;
    diagnosis_bad += !t.diagnosis_ok;
    matchings += t.matching;
    factors += t.factor;
    direct += t.direct_factor;
    cert_bad += !t.certificate_ok;
    ok_and_matching += !t.failed && t.matching;
    auto inc = t.included;
    std::sort(inc.begin(), inc.end());
    for (std::size_t a = 0; a < inc.size(); ++a) {
      ++single[inc[a]];
      if (!track_pairs) continue;
      for (std::size_t b = a + 1; b < inc.size(); ++b) ++pairs[pair_index(inc[a], inc[b])];
    }
  }
  const std::uint64_t good = trials - errors;

  json& s = report.summary;
  s["experiment"] = to_string(cfg.kind);
  s["config"] = cfg.to_json();
  s["resolved"] = {{"p", to_string(cc.p)},
                   {"pi", to_string(cc.pi)},
                   {"mode", to_string(cc.mode)},
                   {"c", to_string(resolved.c)},
                   {"a", to_string(resolved.a)},
                   {"copies", m},
                   {"delta", engine.delta()}};
  s["trials"] = trials;
  s["errors"] = errors;
  s["failure"] = rate_json(failed, good);
  s["diagnosis"] = {{"B1", rate_json(b1, good)}, {"B2", rate_json(b2, good)}, {"unexplained", rate_json(unexplained, good)}};
  s["avoidable_configuration"] = rate_json(avoidable, good);
  s["violations"] = {{"soundness", unsound},
                     {"lower_bound", bound_bad},
                     {"inclusion_probability", inclusion_bad},
                     {"diagnosis", diagnosis_bad},
                     {"certificate", cert_bad}};

  const double pi = to_double(cc.pi);
  auto zscore = [good](std::uint64_t count, double target) {
    const double sd = std::sqrt(target * (1 - target) / static_cast<double>(good));
    if (good == 0 || sd == 0) return 0.0;
    return (static_cast<double>(count) / static_cast<double>(good) - target) / sd;
  };
  double max_z = 0;
  std::uint64_t outside = 0;
  json rates = json::array();
  for (std::size_t i = 0; i < m; ++i) {
    const double z = zscore(single[i], pi);
    max_z = std::max(max_z, std::abs(z));
    outside += std::abs(z) > 4;
    if (m <= 200) rates.push_back({{"copy", i}, {"count", single[i]}, {"z", z}});
  }
  s["hyperedges"] = {{"target", pi}, {"max_abs_z", max_z}, {"outside_4_sigma", outside}};
  if (m <= 200) s["hyperedges"]["per_copy"] = rates;
  if (track_pairs) {
    double max_pz = 0;
    std::uint64_t pair_outside = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double z = zscore(pairs[i], pi * pi);
      max_pz = std::max(max_pz, std::abs(z));
      pair_outside += std::abs(z) > 4;
    }
    s["pairs"] = {{"target", pi * pi}, {"checked", pairs.size()}, {"max_abs_z", max_pz}, {"outside_4_sigma", pair_outside}};
  }
  if (cfg.kind == ExperimentKind::factor) {
    s["matching"] = rate_json(matchings, good);
    s["factor"] = rate_json(factors, good);
    s["direct_factor"] = rate_json(direct, good);
    s["not_failed_and_matching"] = ok_and_matching;
  }
  s["trial_runtime_seconds"] = runtime;
  s["elapsed_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

ExperimentReport threshold_scan(const ExperimentConfig& cfg) {
  if (cfg.p_grid.empty()) throw Error(ErrorKind::config, "scan needs a non-empty 'p_grid'");
  const auto start = Clock::now();
  auto f = load_pattern(cfg.pattern, cfg.base_dir);
  if (cfg.n < 1) throw Error(ErrorKind::config, "n must be positive");
  if (cfg.n % f->order() != 0) throw Error(ErrorKind::divisibility, "|F| does not divide n");

  ExperimentReport report;
  std::ostringstream table;
  table << "# hcouple scan v1\n";
  table << "p,trials,direct,direct_rate,direct_se,pipeline_trials,pipeline,pipeline_rate,pipeline_se,coupling_failed,"
           "pipeline_errors\n";
  json rows = json::array();
  for (const auto& p : cfg.p_grid) {
    if (!is_probability(p)) throw Error(ErrorKind::out_of_range, "grid value outside [0,1]");
    std::optional<ResolvedCoupling> resolved;
    std::optional<CouplingEngine> engine;
    if (cfg.scan_pipeline) {
      resolved = resolve_coupling(cfg, p);
      engine.emplace(resolved->config);
    }
    struct Row {
      bool direct = false, pipeline = false, failed = false, error = false;
    };
    std::vector<Row> results(cfg.trials);
    parallel_for(cfg.trials, cfg.jobs, [&](std::size_t t) {
      Row row;
      // Same stream at every grid point.  G is drawn first in both paths, so
      // the direct check sees the pipeline's G and G grows with p.
      RandomStream direct_rng(cfg.seed, t);
      row.direct = find_factor_direct(sample_gnp(cfg.n, p, direct_rng), *f).has_value();
      if (engine) {
        try {
          RandomStream rng(cfg.seed, t);
          auto outcome = factor_via_coupling(*engine, rng, cfg.matching_node_budget);
          row.pipeline = outcome.certificate.has_value();
          row.failed = outcome.coupling.failed;
        } catch (const Error&) {
          row.error = true;
        }
      }
      results[t] = row;
    });
    std::uint64_t direct = 0, pipeline = 0, failed = 0, errors = 0;
    for (const auto& r : results) {
      direct += r.direct;
      pipeline += r.pipeline;
      failed += r.failed;
      errors += r.error;
    }
    const std::uint64_t trials = cfg.trials;
    const std::uint64_t piped = engine ? trials - errors : 0;
    const double dr = trials ? static_cast<double>(direct) / trials : 0;
    const double pr = piped ? static_cast<double>(pipeline) / piped : 0;
    table << to_string(p) << ',' << trials << ',' << direct << ',' << format_rate(dr) << ','
          << format_rate(binomial_se(direct, trials)) << ',' << piped << ',' << pipeline << ',' << format_rate(pr)
          << ',' << format_rate(binomial_se(pipeline, piped)) << ',' << failed << ',' << errors << '\n';
    rows.push_back({{"p", to_string(p)},
                    {"direct", rate_json(direct, trials)},
                    {"pipeline", rate_json(pipeline, piped)},
                    {"coupling_failed", failed},
                    {"pipeline_errors", errors}});
  }
  report.extra_files.emplace_back("scan.csv", table.str());
  report.summary = {{"experiment", "scan"},
                    {"config", cfg.to_json()},
                    {"rows", rows},
                    {"p0", p0_reference(*f, cfg.n)},
                    {"elapsed_seconds", std::chrono::duration<double>(Clock::now() - start).count()}};
  return report;
}

ExperimentReport run_oracle(const ExperimentConfig& cfg) {
  ExperimentReport report;
  const auto& o = cfg.oracle;
  EnumerationSpec spec = o.spec;
  spec.seed = cfg.seed;
  spec.jobs = cfg.jobs;
  if (spec.mode == EnumerationMode::random && cfg.trials > 0 && spec.count == 0) spec.count = cfg.trials;

  LemmaReport lemma;
  json extra;
  if (o.lemma == "lemma2") {
    lemma = verify_lemma2(spec);
  } else if (o.lemma == "r3") {
    lemma = verify_r3_exception(spec);
  } else if (o.lemma == "bd") {
    lemma = verify_bd_inequality(spec.r, o.random_instances, cfg.seed);
  } else if (o.lemma == "lemma8") {
    lemma = verify_lemma8(load_pattern(cfg.pattern, cfg.base_dir), spec);
  } else if (o.lemma == "mf") {
    auto bound = bound_MF(load_pattern(cfg.pattern, cfg.base_dir), spec, o.decoration_budget);
    extra = {{"lower_bound", bound.lower_bound}, {"certified_zero", bound.certified_zero}};
    if (bound.witness) report.extra_files.emplace_back("mf_witness.fg", format_fgraph(*bound.witness));
    lemma = std::move(bound.report);
  } else if (o.lemma == "mbd") {
    lemma = verify_mbd(*load_pattern(cfg.pattern, cfg.base_dir));
  } else {
    throw Error(ErrorKind::config, "unknown oracle lemma '" + o.lemma + "'");
  }
  for (std::size_t i = 0; i < lemma.counterexamples.size(); ++i) {
    const auto& c = lemma.counterexamples[i];
    const std::string stem = "counterexample_" + std::to_string(i);
    if (c.hypergraph) report.extra_files.emplace_back(stem + ".hyp", format_hypergraph(*c.hypergraph));
    if (c.fgraph) report.extra_files.emplace_back(stem + ".fg", format_fgraph(*c.fgraph));
  }
  report.summary = report_json(lemma);
  report.summary["experiment"] = "oracle";
  report.summary["config"] = cfg.to_json();
  if (!extra.is_null()) report.summary["result"] = extra;
  return report;
}

ExperimentReport run_matching(const ExperimentConfig& cfg) {
  if (cfg.hypergraph.empty()) throw Error(ErrorKind::config, "matching needs a 'hypergraph' file");
  std::filesystem::path path(cfg.hypergraph);
  if (path.is_relative() && !cfg.base_dir.empty()) path = cfg.base_dir / path;
  const Hypergraph h = parse_hypergraph(read_file(path));
  ExperimentReport report;
  const auto m = perfect_matching(h, cfg.matching_node_budget);
  report.summary = {{"experiment", "matching"}, {"input", path.string()}, {"found", m.has_value()}};
  if (m) {
    report.summary["hyperedges"] = m->hyperedges;
    report.summary["edge_indices"] = m->edge_indices;
  }
  return report;
}

ExperimentReport run_classify(const ExperimentConfig& cfg) {
  auto f = load_pattern(cfg.pattern, cfg.base_dir);
  const auto& fl = f->flags();
  ExperimentReport report;
  report.summary = {{"experiment", "classify"},
                    {"pattern", f->name()},
                    {"r", f->order()},
                    {"s", f->size()},
                    {"d1", to_string(f->one_density())},
                    {"aut", f->aut_count()},
                    {"connectivity", f->connectivity()},
                    {"one_balanced", fl.one_balanced},
                    {"strictly_one_balanced", fl.strictly_one_balanced},
                    {"two_connected", fl.two_connected},
                    {"three_connected", fl.three_connected},
                    {"edge_swap_rigid", fl.edge_swap_rigid},
                    {"nice", fl.nice}};
  if (cfg.n >= f->order()) report.summary["copies_in_K_n"] = copy_count(*f, cfg.n).get_str();
  return report;
}

ExperimentReport run(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::couple:
    case ExperimentKind::factor: return run_experiment(cfg);
    case ExperimentKind::scan: return threshold_scan(cfg);
    case ExperimentKind::oracle: return run_oracle(cfg);
    case ExperimentKind::matching: return run_matching(cfg);
    case ExperimentKind::classify: return run_classify(cfg);
  }
  throw Error(ErrorKind::config, "unknown experiment");
}

void write_outputs(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (!report.csv.empty()) write_file(dir / "trials.csv", report.csv);
  write_file(dir / "summary.json", report.summary.dump(2) + "\n");
  for (const auto& [name, contents] : report.extra_files) write_file(dir / name, contents);
}

}  // namespace hcouple
