#include "hcouple/matching.hpp"

#include <algorithm>
#include <map>

#include "hcouple/errors.hpp"

namespace hcouple {

namespace {

class ExactCover {
 public:
  ExactCover(const Hypergraph& h, std::uint64_t budget) : h_(h), budget_(budget), covered_(h.ambient_order(), 0) {
    // Repeated vertex sets are one candidate.
    std::map<Hyperedge, int> first;
    for (int i = 0; i < h.edge_count(); ++i) first.emplace(h.edges()[i], i);
    for (const auto& [e, i] : first) candidates_.push_back(i);
    std::sort(candidates_.begin(), candidates_.end());
    incident_.resize(h.ambient_order());
    for (int i : candidates_)
      for (int v : h.edges()[i]) incident_[v].push_back(i);
  }

  bool solve() {
    if (++nodes_ > budget_) throw Error(ErrorKind::budget_exceeded, "perfect matching search exceeded its node budget");
    int best = -1;
    std::size_t best_count = SIZE_MAX;
    std::vector<int> best_options;
    for (int v = 0; v < h_.ambient_order(); ++v) {
      if (covered_[v]) continue;
      std::vector<int> options;
      for (int i : incident_[v])
        if (usable(i)) options.push_back(i);
      if (options.size() < best_count) {
        best = v;
        best_count = options.size();
        best_options = std::move(options);
        if (best_count == 0) return false;
      }
    }
    if (best < 0) return true;
    for (int i : best_options) {
      set(i, 1);
      chosen_.push_back(i);
      if (solve()) return true;
      chosen_.pop_back();
      set(i, 0);
    }
    return false;
  }

  const std::vector<int>& chosen() const { return chosen_; }

 private:
  bool usable(int i) const {
    return std::none_of(h_.edges()[i].begin(), h_.edges()[i].end(), [&](int v) { return covered_[v] != 0; });
  }
  void set(int i, char value) {
    for (int v : h_.edges()[i]) covered_[v] = value;
  }

  const Hypergraph& h_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<char> covered_;
  std::vector<int> candidates_;
  std::vector<std::vector<int>> incident_;
  std::vector<int> chosen_;
};

}  // namespace

std::optional<Matching> perfect_matching(const Hypergraph& h, std::uint64_t node_budget) {
  const int r = h.uniformity();
  const int n = h.ambient_order();
  if (n % r != 0) {
    throw Error(ErrorKind::divisibility, "r = " + std::to_string(r) + " does not divide n = " + std::to_string(n));
  }
  ExactCover search(h, node_budget);
  if (!search.solve()) return std::nullopt;
  Matching m;
  m.edge_indices = search.chosen();
  std::sort(m.edge_indices.begin(), m.edge_indices.end());
  for (int i : m.edge_indices) {
    m.hyperedges.push_back(h.edges()[i]);
    m.covered.insert(m.covered.end(), h.edges()[i].begin(), h.edges()[i].end());
  }
  std::sort(m.covered.begin(), m.covered.end());
  m.perfect = static_cast<int>(m.covered.size()) == n;
  return m;
}

bool verify_certificate(const FactorCertificate& cert) {
  const int n = cert.host.vertex_count();
  std::vector<char> seen(n, 0);
  int covered = 0;
  for (const auto& copy : cert.copies) {
    for (int v : copy.vertex_image) {
      if (v < 0 || v >= n || seen[v]) return false;
      seen[v] = 1;
      ++covered;
    }
    for (auto [u, v] : copy.edges) {
      auto in_copy = [&](int x) {
        return std::find(copy.vertex_image.begin(), copy.vertex_image.end(), x) != copy.vertex_image.end();
      };
      if (!in_copy(u) || !in_copy(v) || !cert.host.has_edge(u, v)) return false;
    }
  }
  return covered == n;
}

FactorOutcome factor_via_coupling(const CouplingEngine& engine, RandomStream& rng, std::uint64_t node_budget) {
  const auto& cfg = engine.config();
  if (cfg.n % cfg.pattern->order() != 0) {
    throw Error(ErrorKind::divisibility, "|F| does not divide n");
  }
  FactorOutcome out;
  out.coupling = engine.run(rng);
  const Hypergraph hyp = to_hypergraph(out.coupling.h);
  auto matching = perfect_matching(hyp, node_budget);
  out.matching_exists = matching.has_value();
  if (!matching || out.coupling.failed) return out;

  FactorCertificate cert;
  cert.host = out.coupling.g;
  for (int i : matching->edge_indices) cert.copies.push_back(out.coupling.h.f_edges[i]);
  if (!verify_certificate(cert)) {
    throw Error(ErrorKind::contract_violation, "coupling produced a matching that is not backed by G");
  }
  out.certificate = std::move(cert);
  return out;
}

std::optional<FactorCertificate> factor_via_coupling(const CouplingConfig& config, RandomStream& rng) {
  return factor_via_coupling(CouplingEngine(config), rng).certificate;
}

}  // namespace hcouple
