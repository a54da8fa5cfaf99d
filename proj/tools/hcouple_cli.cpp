// Command-line front end for the coupling experiments.
#include <iostream>

#include <CLI11.hpp>

#include "hcouple/errors.hpp"
#include "hcouple/harness.hpp"
#include "hcouple/io.hpp"
#include "hcouple/matching.hpp"

using namespace hcouple;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<int> jobs;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
  auto* opt = cmd->add_option("--config", c.config, "JSON experiment config");
  if (config_required) opt->required();
  cmd->add_option("--seed", c.seed, "64-bit master seed");
  cmd->add_option("--trials", c.trials, "number of trials");
  cmd->add_option("--jobs", c.jobs, "worker threads");
  cmd->add_option("--out", c.out, "output directory");
}

ExperimentConfig assemble(const Common& c, ExperimentKind kind) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(c.config);
  cfg.kind = kind;
  if (c.seed) cfg.seed = *c.seed;
  if (c.trials) cfg.trials = *c.trials;
  if (c.jobs) {
    if (*c.jobs < 1) throw Error(ErrorKind::config, "--jobs must be at least 1");
    cfg.jobs = *c.jobs;
  }
  if (!c.out.empty()) cfg.out = c.out;
  return cfg;
}

int exit_code(ErrorKind k) {
  if (is_budget_error(k)) return 3;
  switch (k) {
    case ErrorKind::config:
    case ErrorKind::parse:
    case ErrorKind::invalid_pattern:
    case ErrorKind::invalid_constants:
    case ErrorKind::out_of_range:
    case ErrorKind::divisibility: return 2;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hcouple: couplings of G(n,p) with random clique hypergraphs"};
  app.require_subcommand(1);

  Common couple, scan, oracle, factor, matching, classify;
  auto* c_couple = app.add_subcommand("couple", "run coupling trials");
  add_common(c_couple, couple, true);
  auto* c_scan = app.add_subcommand("scan", "factor rate over a grid of p");
  add_common(c_scan, scan, true);
  auto* c_oracle = app.add_subcommand("oracle", "check a structural lemma by enumeration");
  add_common(c_oracle, oracle, true);
  auto* c_factor = app.add_subcommand("factor", "coupling, matching and certificate pipeline");
  add_common(c_factor, factor, true);

  auto* c_matching = app.add_subcommand("matching", "perfect matching of a hypergraph file");
  add_common(c_matching, matching, false);
  std::string hyp_file;
  c_matching->add_option("hypergraph", hyp_file, "hypergraph text file");

  auto* c_classify = app.add_subcommand("classify", "balance and connectivity flags of a pattern");
  add_common(c_classify, classify, false);
  std::string pattern_arg;
  c_classify->add_option("pattern", pattern_arg, "built-in name (K4, C5, petersen, ...) or graph file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg;
    if (c_couple->parsed()) cfg = assemble(couple, ExperimentKind::couple);
    if (c_scan->parsed()) cfg = assemble(scan, ExperimentKind::scan);
    if (c_oracle->parsed()) cfg = assemble(oracle, ExperimentKind::oracle);
    if (c_factor->parsed()) cfg = assemble(factor, ExperimentKind::factor);
    if (c_matching->parsed()) {
      cfg = assemble(matching, ExperimentKind::matching);
      if (!hyp_file.empty()) {
        cfg.hypergraph = std::filesystem::absolute(hyp_file).string();
      }
    }
    if (c_classify->parsed()) {
      cfg = assemble(classify, ExperimentKind::classify);
      if (!pattern_arg.empty()) cfg.pattern = pattern_arg;
    }

    const ExperimentReport report = run(cfg);
    if (cfg.kind == ExperimentKind::matching) {
      if (report.summary.value("found", false)) {
        for (const auto& e : report.summary["hyperedges"]) {
          const auto verts = e.get<std::vector<int>>();
          for (std::size_t i = 0; i < verts.size(); ++i) std::cout << (i ? " " : "") << verts[i];
          std::cout << '\n';
        }
      } else {
        std::cout << "none\n";
      }
    } else {
      std::cout << report.summary.dump(2) << '\n';
    }
    if (!cfg.out.empty()) write_outputs(report, cfg.out);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
