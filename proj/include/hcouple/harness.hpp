#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcouple/coupling.hpp"
#include "hcouple/oracles.hpp"
#include "hcouple/rational.hpp"

namespace hcouple {

enum class ExperimentKind { couple, scan, oracle, matching, factor, classify };
const char* to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& text);

/// Parameter schedule at a concrete n, rounded to denominators <= 10^6.
struct ScheduleValues {
  Rational p;
  Rational pi;
  Rational c;
  double p0 = 0;  // threshold reference point ((aut/r) n^{1-r} log n)^{1/s}
};

ScheduleValues schedule_parameters(const PatternGraph& f, int n, double a_exp, double c_const);

double p0_reference(const PatternGraph& f, int n);

struct OracleSettings {
  std::string lemma = "lemma2";  // lemma2 | r3 | bd | lemma8 | mf | mbd
  EnumerationSpec spec;
  std::uint64_t random_instances = 0;  // bd: assembled configurations
  std::uint64_t decoration_budget = 20000;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::couple;
  std::string pattern = "K3";
  int n = 0;
  std::optional<Rational> p;
  std::optional<double> schedule_a_exp;
  double schedule_c = 1.0;
  std::vector<Rational> p_grid;
  std::string mode = "plain";  // plain | thinned | thinned_auto
  Rational beta{1, 2};
  std::optional<Rational> a;
  std::optional<Rational> c;
  std::optional<Rational> pi;
  CopyOrder order = CopyOrder::canonical;
  std::optional<int> delta_cap;
  ConditionalLimits limits;
  std::uint64_t avoidable_node_cap = AvoidableSearchOptions{}.node_cap;
  std::uint64_t matching_node_budget = 50'000'000;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool lazy = false;
  bool trace = false;
  bool scan_pipeline = true;
  OracleSettings oracle;
  std::string hypergraph;  // matching input
  std::filesystem::path out;
  std::filesystem::path base_dir;  // relative paths resolve here

  static ExperimentConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

/// Coupling parameters after resolving schedules and thinning constants.
struct ResolvedCoupling {
  CouplingConfig config;
  Rational beta;
  Rational a;
  Rational c;
};

ResolvedCoupling resolve_coupling(const ExperimentConfig& cfg, const std::optional<Rational>& p_override = {});

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t stream_key = 0;
  bool failed = false;
  std::optional<int> deadly_step;
  std::string diagnosis = "none";
  std::optional<Rational> deadly_q;
  int h_edges = 0;
  int g_edges = 0;
  bool h_avoidable = false;
  bool matching = false;
  bool factor = false;
  bool direct_factor = false;
  bool certificate_ok = true;
  bool lower_bound_ok = true;
  bool inclusion_exact = true;
  bool sound = true;
  bool diagnosis_ok = true;
  std::string error;
  double runtime_seconds = 0;    // reported in the summary only
  std::vector<int> included;     // copy indices, not written to CSV
};

struct ExperimentReport {
  std::vector<TrialRecord> trials;
  nlohmann::json summary;
  std::string csv;
  std::vector<std::pair<std::string, std::string>> extra_files;  // name, contents
};

std::string trials_csv(const std::vector<TrialRecord>& trials);

/// Runs one trial of a couple or factor experiment.
TrialRecord run_trial(const CouplingEngine& engine, const ResolvedCoupling& resolved, ExperimentKind kind,
                      std::uint64_t seed, std::uint64_t trial, bool lazy, std::uint64_t matching_budget,
                      std::string* trace = nullptr);

ExperimentReport run_experiment(const ExperimentConfig& cfg);
ExperimentReport threshold_scan(const ExperimentConfig& cfg);
ExperimentReport run_oracle(const ExperimentConfig& cfg);
ExperimentReport run_matching(const ExperimentConfig& cfg);
ExperimentReport run_classify(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind.
ExperimentReport run(const ExperimentConfig& cfg);

/// Writes trials.csv (when there are trials), summary.json and extra files.
void write_outputs(const ExperimentReport& report, const std::filesystem::path& dir);

nlohmann::json rate_json(std::uint64_t count, std::uint64_t trials);
nlohmann::json report_json(const LemmaReport& report);

}  // namespace hcouple
