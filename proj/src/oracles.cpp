#include "hcouple/oracles.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "hcouple/errors.hpp"
#include "hcouple/parallel.hpp"

namespace hcouple {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Per-instance result, merged in index order so reports do not depend on
// the number of threads.
struct Outcome {
  bool skipped = false;
  std::map<std::string, std::uint64_t> tallies;
  std::vector<Counterexample> found;
};

void merge(LemmaReport& report, std::vector<Outcome>& outcomes) {
  for (auto& o : outcomes) {
    if (o.skipped) {
      ++report.instances_skipped;
    } else {
      ++report.instances_checked;
    }
    for (const auto& [k, v] : o.tallies) report.tallies[k] += v;
    for (auto& c : o.found) report.counterexamples.push_back(std::move(c));
  }
}

std::string describe_edges(const Hypergraph& h) {
  std::string out;
  for (const auto& e : h.edges()) {
    out += '{';
    for (std::size_t i = 0; i < e.size(); ++i) out += (i ? "," : "") + std::to_string(e[i]);
    out += '}';
  }
  return out;
}

bool has_avoidable(const Hypergraph& h, const AvoidableSearchOptions& options) {
  return find_avoidable_configuration(h, options).has_value();
}

// Vertex sets of r-cliques that are not hyperedges.
std::vector<std::vector<int>> extra_cliques(const Hypergraph& h) {
  std::set<Hyperedge> present(h.edges().begin(), h.edges().end());
  std::vector<std::vector<int>> out;
  for (auto& c : cliques_of_size(underlying_graph(h), h.uniformity()))
    if (!present.count(c)) out.push_back(std::move(c));
  return out;
}

// Same count by the general subgraph matcher, for re-verification.
std::size_t extra_cliques_by_matcher(const Hypergraph& h) {
  std::set<Hyperedge> present(h.edges().begin(), h.edges().end());
  const PatternGraph kr(SimpleGraph::complete(h.uniformity()));
  std::size_t count = 0;
  for (const auto& copy : copies_in_host(kr, underlying_graph(h)))
    if (!present.count(copy.vertices())) ++count;
  return count;
}

std::vector<Hypergraph> instances(const EnumerationSpec& spec, int r) {
  if (spec.mode == EnumerationMode::exhaustive) return connected_hypergraphs(r, spec.max_hyperedges, spec.max_vertices);
  return {};
}

template <typename Check>
LemmaReport sweep_hypergraphs(const std::string& name, const EnumerationSpec& spec, int r, Check check) {
  const auto start = Clock::now();
  LemmaReport report;
  report.lemma = name;
  if (spec.mode == EnumerationMode::exhaustive) {
    const auto all = instances(spec, r);
    std::vector<Outcome> outcomes(all.size());
    parallel_for(all.size(), spec.jobs, [&](std::size_t i) { outcomes[i] = check(all[i]); });
    merge(report, outcomes);
  } else {
    std::vector<Outcome> outcomes(spec.count);
    parallel_for(spec.count, spec.jobs, [&](std::size_t i) {
      RandomStream rng(spec.seed, i);
      outcomes[i] = check(random_hypergraph(r, spec.max_hyperedges, spec.max_vertices, rng));
    });
    merge(report, outcomes);
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

// All copies of F on a fixed vertex set, in the order of enumerate_copies on [r].
std::vector<FCopy> copies_on(const PatternGraph& f, const std::vector<FCopy>& base, const Hyperedge& vertices) {
  std::vector<FCopy> out;
  out.reserve(base.size());
  for (const auto& c : base) {
    std::vector<int> image;
    for (int v : c.vertex_image) image.push_back(vertices[v]);
    out.push_back(make_copy(f, std::move(image)));
  }
  return out;
}

bool covers_copy(const Hypergraph& h, const CleanCycle& cycle, const FCopy& f0) {
  for (auto [u, v] : f0.edges) {
    bool inside = std::any_of(cycle.edge_indices.begin(), cycle.edge_indices.end(), [&](int idx) {
      const auto& e = h.edges()[idx];
      return std::binary_search(e.begin(), e.end(), u) && std::binary_search(e.begin(), e.end(), v);
    });
    if (!inside) return false;
  }
  return true;
}

std::vector<FCopy> all_extra_copies(const FGraph& hf) {
  std::vector<FCopy> out;
  for (auto& c : copies_in_host(*hf.pattern, underlying_graph(hf)))
    if (!hf.contains(c)) out.push_back(std::move(c));
  return out;
}

bool share_edge(const FCopy& a, const FCopy& b) {
  std::vector<Edge> common;
  std::set_intersection(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(), std::back_inserter(common));
  return !common.empty();
}

}  // namespace

std::vector<std::uint32_t> canonical_form(const Hypergraph& h) {
  const int m = h.edge_count();
  if (m > 32) throw Error(ErrorKind::cap_exceeded, "canonical form supports at most 32 hyperedges");
  const auto spanned = h.spanned_vertices();
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint32_t> best;
  std::vector<std::uint32_t> masks(h.ambient_order());
  do {
    std::fill(masks.begin(), masks.end(), 0);
    for (int i = 0; i < m; ++i)
      for (int v : h.edges()[perm[i]]) masks[v] |= std::uint32_t{1} << i;
    std::vector<std::uint32_t> key;
    key.reserve(spanned.size());
    for (int v : spanned) key.push_back(masks[v]);
    std::sort(key.begin(), key.end());
    if (best.empty() || key < best) best = std::move(key);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<Hypergraph> connected_hypergraphs(int r, int max_edges, int max_vertices, bool allow_repeats) {
  std::vector<Hypergraph> out;
  if (max_edges < 1 || max_vertices < r || r < 2) return out;
  if (max_vertices > 24) throw Error(ErrorKind::cap_exceeded, "exhaustive generation supports at most 24 vertices");
  Hyperedge first(r);
  std::iota(first.begin(), first.end(), 0);
  std::vector<Hypergraph> level{Hypergraph(r, r, {first})};
  out = level;
  for (int m = 2; m <= max_edges; ++m) {
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<Hypergraph> next;
    for (const auto& h : level) {
      const int v = h.ambient_order();
      for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << v); ++mask) {
        const int shared = std::popcount(mask);
        if (shared > r || v + r - shared > max_vertices) continue;
        Hyperedge e;
        for (int x = 0; x < v; ++x)
          if (mask >> x & 1) e.push_back(x);
        for (int x = 0; x < r - shared; ++x) e.push_back(v + x);
        if (!allow_repeats && std::find(h.edges().begin(), h.edges().end(), e) != h.edges().end()) continue;
        auto edges = h.edges();
        edges.push_back(e);
        Hypergraph g(r, v + r - shared, std::move(edges));
        if (seen.insert(canonical_form(g)).second) next.push_back(std::move(g));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

Hypergraph random_hypergraph(int r, int max_edges, int max_vertices, RandomStream& rng) {
  if (max_vertices < r || max_edges < 1) throw Error(ErrorKind::config, "random hypergraph needs room for one hyperedge");
  const int m = 1 + static_cast<int>(rng.uniform(max_edges));
  const int pool = r + static_cast<int>(rng.uniform(max_vertices - r + 1));
  Hypergraph h(r, pool);
  std::vector<int> vertices(pool);
  for (int i = 0; i < m; ++i) {
    std::iota(vertices.begin(), vertices.end(), 0);
    for (int j = 0; j < r; ++j) std::swap(vertices[j], vertices[j + rng.uniform(pool - j)]);
    h.add(Hyperedge(vertices.begin(), vertices.begin() + r));
  }
  return h;
}

FGraph random_fgraph(const std::shared_ptr<const PatternGraph>& f, int max_edges, int max_vertices,
                     RandomStream& rng) {
  const int r = f->order();
  if (max_vertices < r || max_edges < 1) throw Error(ErrorKind::config, "random F-graph needs room for one copy");
  const int m = 1 + static_cast<int>(rng.uniform(max_edges));
  const int pool = r + static_cast<int>(rng.uniform(max_vertices - r + 1));
  FGraph hf{f, pool, {}};
  std::vector<int> vertices(pool);
  for (int i = 0; i < m; ++i) {
    std::iota(vertices.begin(), vertices.end(), 0);
    for (int j = 0; j < r; ++j) std::swap(vertices[j], vertices[j + rng.uniform(pool - j)]);
    hf.add(make_copy(*f, std::vector<int>(vertices.begin(), vertices.begin() + r)));
  }
  return hf;
}

int copies_per_vertex_set(const PatternGraph& f) { return static_cast<int>(enumerate_copies(f, f.order()).size()); }

FGraph decorated_clean_cycle(const std::shared_ptr<const PatternGraph>& f, int k, std::span<const int> decoration) {
  const int r = f->order();
  if (k < 2 || r < 2) throw Error(ErrorKind::config, "clean cycles need k >= 2");
  if (static_cast<int>(decoration.size()) != k) throw Error(ErrorKind::config, "one decoration per hyperedge");
  const auto base = enumerate_copies(*f, r);
  FGraph hf{f, k + k * (r - 2), {}};
  int fresh = k;
  for (int i = 0; i < k; ++i) {
    Hyperedge e{i, (i + 1) % k};
    for (int x = 0; x < r - 2; ++x) e.push_back(fresh++);
    std::sort(e.begin(), e.end());
    const auto on = copies_on(*f, base, e);
    hf.add(on.at(decoration[i]));
  }
  return hf;
}

std::vector<std::vector<int>> cliques_of_size(const SimpleGraph& g, int r) {
  const int n = g.vertex_count();
  if (n > 64) throw Error(ErrorKind::cap_exceeded, "clique enumeration supports at most 64 vertices");
  std::vector<std::vector<int>> out;
  std::vector<int> chosen;
  std::function<void(std::uint64_t)> grow = [&](std::uint64_t candidates) {
    if (static_cast<int>(chosen.size()) == r) {
      out.push_back(chosen);
      return;
    }
    while (candidates) {
      const int v = std::countr_zero(candidates);
      candidates &= candidates - 1;
      chosen.push_back(v);
      grow(candidates & g.row(v));
      chosen.pop_back();
    }
  };
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  if (r >= 1) grow(all);
  return out;
}

LemmaReport verify_lemma2(const EnumerationSpec& spec) {
  if (spec.r < 4) throw Error(ErrorKind::contract_violation, "the clique lemma needs r >= 4");
  return sweep_hypergraphs("lemma2", spec, spec.r, [&](const Hypergraph& h) {
    Outcome o;
    if (has_avoidable(h, spec.avoidable)) {
      o.skipped = true;
      return o;
    }
    const auto extras = extra_cliques(h);
    o.tallies["extra_cliques"] += extras.size();
    if (!extras.empty() && extra_cliques_by_matcher(h) == extras.size() && !has_avoidable(h, spec.avoidable)) {
      o.found.push_back({"extra K_r without avoidable configuration: " + describe_edges(h), h, std::nullopt});
    }
    return o;
  });
}

LemmaReport verify_r3_exception(const EnumerationSpec& spec) {
  if (spec.r != 3) throw Error(ErrorKind::contract_violation, "the triangle exception sweep needs r = 3");
  return sweep_hypergraphs("r3_exception", spec, 3, [&](const Hypergraph& h) {
    Outcome o;
    if (has_avoidable(h, spec.avoidable)) {
      o.skipped = true;
      return o;
    }
    const auto extras = extra_cliques(h);
    if (extras.empty()) return o;
    const auto cycles = find_clean_cycles(h, 3);
    for (const auto& t : extras) {
      ++o.tallies["extra_triangles"];
      bool witnessed = std::any_of(cycles.begin(), cycles.end(), [&](const CleanCycle& c) {
        if (c.length() != 3) return false;
        auto centre = c.cycle_vertices;
        std::sort(centre.begin(), centre.end());
        return centre == t;
      });
      if (witnessed) {
        ++o.tallies["witnessed"];
      } else if (extra_cliques_by_matcher(h) == extras.size()) {
        o.found.push_back({"unwitnessed extra triangle in " + describe_edges(h), h, std::nullopt});
      }
    }
    return o;
  });
}

namespace {

// Can t cliques of the given orders, placed inside K_r, cover every pair?
bool placement_covers(int r, const std::vector<int>& sizes) {
  std::vector<std::vector<std::uint32_t>> options(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << r); ++mask) {
      if (std::popcount(mask) != sizes[i]) continue;
      std::uint32_t pairs = 0;
      int id = 0;
      for (int u = 0; u < r; ++u)
        for (int v = u + 1; v < r; ++v, ++id)
          if ((mask >> u & 1) && (mask >> v & 1)) pairs |= std::uint32_t{1} << id;
      options[i].push_back(pairs);
    }
  }
  const std::uint32_t full = r * (r - 1) / 2 == 32 ? ~0u : (std::uint32_t{1} << (r * (r - 1) / 2)) - 1;
  std::function<bool(std::size_t, std::uint32_t)> place = [&](std::size_t i, std::uint32_t covered) {
    if (covered == full) return true;
    if (i == sizes.size()) return false;
    for (auto o : options[i])
      if (place(i + 1, covered | o)) return true;
    return false;
  };
  return place(0, 0);
}

}  // namespace

LemmaReport verify_bd_inequality(int r, std::uint64_t random_instances, std::uint64_t seed) {
  if (r < 3 || r > 8) throw Error(ErrorKind::out_of_range, "inequality sweep supports 3 <= r <= 8");
  const auto start = Clock::now();
  LemmaReport report;
  report.lemma = "bd_inequality";
  const int pairs = r * (r - 1) / 2;
  std::vector<int> sizes;

  std::function<void(int, int, int)> extend = [&](int min_size, int sum_pairs, int sum_excess) {
    if (!sizes.empty() && sum_pairs >= pairs) {
      ++report.instances_checked;
      if (sum_excess < r) {
        report.counterexamples.push_back({"sum (s_i - 1) below r", std::nullopt, std::nullopt});
      } else if (sum_excess == r) {
        ++report.tallies["equality_cases"];
        bool all_top = std::all_of(sizes.begin(), sizes.end(), [&](int s) { return s == r - 1; });
        if (!all_top) report.counterexamples.push_back({"equality with some s_i < r - 1", std::nullopt, std::nullopt});
        if (placement_covers(r, sizes)) {
          ++report.tallies["equality_realisable"];
          if (r >= 4) report.counterexamples.push_back({"equality realised for r >= 4", std::nullopt, std::nullopt});
        }
      }
    }
    if (static_cast<int>(sizes.size()) == pairs) return;
    for (int s = min_size; s <= r - 1; ++s) {
      sizes.push_back(s);
      extend(s, sum_pairs + s * (s - 1) / 2, sum_excess + s - 1);
      sizes.pop_back();
    }
  };
  extend(2, 0, 0);

  // Assembled configurations C+ = h + h_1 + ... + h_t.
  for (std::uint64_t i = 0; i < random_instances; ++i) {
    RandomStream rng(seed, i);
    const int t = 1 + static_cast<int>(rng.uniform(pairs));
    const int pool = 1 + static_cast<int>(rng.uniform(t * (r - 2) + 1));
    Hyperedge h(r);
    std::iota(h.begin(), h.end(), 0);
    Hypergraph cplus(r, r + pool, {h});
    int excess = 0;
    for (int j = 0; j < t; ++j) {
      const int s = 2 + static_cast<int>(rng.uniform(r - 2));
      std::vector<int> inner(r), outer(pool);
      std::iota(inner.begin(), inner.end(), 0);
      std::iota(outer.begin(), outer.end(), r);
      if (pool < r - s) continue;
      shuffle(inner, rng);
      shuffle(outer, rng);
      Hyperedge e(inner.begin(), inner.begin() + s);
      e.insert(e.end(), outer.begin(), outer.begin() + (r - s));
      cplus.add(e);
      excess += s - 1;
    }
    ++report.tallies["assembled"];
    if (nullity(cplus) < excess) {
      report.counterexamples.push_back({"n(C+) below sum (s_i - 1): " + describe_edges(cplus), cplus, std::nullopt});
    }
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

LemmaReport verify_lemma8(const std::shared_ptr<const PatternGraph>& f, const EnumerationSpec& spec) {
  if (!f->flags().two_connected) throw Error(ErrorKind::contract_violation, "extra-copy check needs a 2-connected pattern");
  const auto start = Clock::now();
  const bool nice = f->flags().nice;
  const int kmax = std::min(f->size(), std::max(2, spec.max_hyperedges));
  const int per_set = copies_per_vertex_set(*f);

  auto check = [&](const FGraph& hf) {
    Outcome o;
    const Hypergraph hyp = to_hypergraph(hf);
    if (has_avoidable(hyp, spec.avoidable)) {
      o.skipped = true;
      return o;
    }
    const auto extras = all_extra_copies(hf);
    if (extras.empty()) return o;
    const auto cycles = find_clean_cycles(hyp, f->size());
    for (const auto& f0 : extras) {
      ++o.tallies["extra_copies"];
      if (nice) {
        o.found.push_back({"nice pattern with an extra copy and no avoidable configuration", hyp, hf});
        continue;
      }
      bool witnessed = std::any_of(cycles.begin(), cycles.end(),
                                   [&](const CleanCycle& c) { return covers_copy(hyp, c, f0); });
      if (witnessed) {
        ++o.tallies["clean_cycle_witness"];
      } else {
        o.found.push_back({"extra copy without avoidable configuration or covering clean cycle", hyp, hf});
      }
    }
    return o;
  };

  LemmaReport report;
  report.lemma = "lemma8";
  std::vector<FGraph> fixed;
  if (spec.mode == EnumerationMode::exhaustive) {
    // Every decoration of every clean k-cycle, k <= kmax.
    for (int k = 2; k <= kmax; ++k) {
      std::vector<int> deco(k, 0);
      while (true) {
        fixed.push_back(decorated_clean_cycle(f, k, deco));
        int pos = 0;
        while (pos < k && ++deco[pos] == per_set) deco[pos++] = 0;
        if (pos == k) break;
      }
    }
  }
  std::vector<Outcome> outcomes(fixed.size() + spec.count);
  parallel_for(outcomes.size(), spec.jobs, [&](std::size_t i) {
    if (i < fixed.size()) {
      outcomes[i] = check(fixed[i]);
      return;
    }
    const std::uint64_t idx = i - fixed.size();
    RandomStream rng(spec.seed, idx);
    if (idx % 2 == 0) {
      outcomes[i] = check(random_fgraph(f, spec.max_hyperedges, spec.max_vertices, rng));
    } else {
      const int k = 2 + static_cast<int>(rng.uniform(kmax - 1));
      std::vector<int> deco(k);
      for (auto& d : deco) d = static_cast<int>(rng.uniform(per_set));
      outcomes[i] = check(decorated_clean_cycle(f, k, deco));
    }
  });
  merge(report, outcomes);
  report.elapsed_seconds = seconds_since(start);
  return report;
}

MFBound bound_MF(const std::shared_ptr<const PatternGraph>& f, const EnumerationSpec& spec,
                 std::uint64_t decoration_budget) {
  if (!f->flags().two_connected) throw Error(ErrorKind::contract_violation, "M_F is only bounded for 2-connected F");
  const auto start = Clock::now();
  const bool nice = f->flags().nice;
  const int kmax = std::min(f->size(), std::max(2, spec.max_hyperedges));
  const int per_set = copies_per_vertex_set(*f);

  std::vector<FGraph> candidates;
  const std::uint64_t per_k = std::max<std::uint64_t>(1, decoration_budget / std::max(1, kmax - 1));
  for (int k = 2; k <= kmax; ++k) {
    double total = std::pow(static_cast<double>(per_set), k);
    if (total <= static_cast<double>(per_k)) {
      std::vector<int> deco(k, 0);
      while (true) {
        candidates.push_back(decorated_clean_cycle(f, k, deco));
        int pos = 0;
        while (pos < k && ++deco[pos] == per_set) deco[pos++] = 0;
        if (pos == k) break;
      }
    } else {
      RandomStream rng(spec.seed ^ 0x6d66ULL, static_cast<std::uint64_t>(k));
      for (std::uint64_t s = 0; s < per_k; ++s) {
        std::vector<int> deco(k);
        for (auto& d : deco) d = static_cast<int>(rng.uniform(per_set));
        candidates.push_back(decorated_clean_cycle(f, k, deco));
      }
    }
  }
  const std::size_t fixed = candidates.size();

  struct Local {
    bool skipped = false;
    std::uint64_t best = 0;
  };
  std::vector<Local> results(fixed + spec.count);
  std::vector<std::optional<FGraph>> graphs(results.size());
  parallel_for(results.size(), spec.jobs, [&](std::size_t i) {
    FGraph hf = [&] {
      if (i < fixed) return candidates[i];
      RandomStream rng(spec.seed, i - fixed);
      return random_fgraph(f, spec.max_hyperedges, spec.max_vertices, rng);
    }();
    if (has_avoidable(to_hypergraph(hf), spec.avoidable)) {
      results[i].skipped = true;
      return;
    }
    const auto extras = all_extra_copies(hf);
    for (const auto& f1 : hf.f_edges) {
      std::uint64_t n = std::count_if(extras.begin(), extras.end(), [&](const FCopy& c) { return share_edge(c, f1); });
      results[i].best = std::max(results[i].best, n);
    }
    if (results[i].best > 0) graphs[i] = std::move(hf);
  });

  MFBound out;
  out.report.lemma = "bound_MF";
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].skipped) {
      ++out.report.instances_skipped;
      continue;
    }
    ++out.report.instances_checked;
    if (results[i].best > out.lower_bound) {
      out.lower_bound = results[i].best;
      out.witness = graphs[i];
    }
  }
  out.report.tallies["decorated_cycles"] = fixed;
  out.report.tallies["lower_bound"] = out.lower_bound;
  if (nice && out.lower_bound > 0) {
    out.report.counterexamples.push_back({"nice pattern with positive extra-copy count", to_hypergraph(*out.witness), out.witness});
  }
  out.certified_zero = nice && out.lower_bound == 0;
  out.report.elapsed_seconds = seconds_since(start);
  return out;
}

LemmaReport verify_mbd(const PatternGraph& f, int edge_cap) {
  if (!f.flags().one_balanced) throw Error(ErrorKind::contract_violation, "the subgraph bound needs a 1-balanced pattern");
  const int s = f.size();
  const int r = f.order();
  if (s > edge_cap) throw Error(ErrorKind::cap_exceeded, "pattern has more edges than the subgraph sweep allows");
  const auto start = Clock::now();
  LemmaReport report;
  report.lemma = "mbd";
  const auto edges = f.graph().edges();
  const Rational& d1 = f.one_density();
  const bool strict = f.flags().strictly_one_balanced;

  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s); ++mask) {
    std::vector<int> parent(r);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int i = 0; i < s; ++i)
      if (mask >> i & 1) parent[find(edges[i].first)] = find(edges[i].second);
    std::vector<int> size(r, 0);
    for (int v = 0; v < r; ++v) ++size[find(v)];
    int components = 0;
    bool middling = false;
    for (int v = 0; v < r; ++v) {
      if (find(v) != v) continue;
      ++components;
      if (size[v] >= 2 && size[v] <= r - 1) middling = true;
    }
    const int k = components - 1;
    const Rational bound = s - d1 * k;
    const int m = std::popcount(mask);
    ++report.instances_checked;
    if (m > bound) {
      report.counterexamples.push_back({"e(S) = " + std::to_string(m) + " exceeds " + to_string(bound), std::nullopt, std::nullopt});
    } else if (m == bound) {
      ++report.tallies["equality"];
      if (strict && middling) {
        report.counterexamples.push_back({"equality with a proper component in a strictly balanced pattern", std::nullopt, std::nullopt});
      }
    }
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

}  // namespace hcouple
