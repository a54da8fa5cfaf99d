#include "hcouple/hypergraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "hcouple/errors.hpp"

namespace hcouple {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

int intersection_size(const Hyperedge& a, const Hyperedge& b) {
  int count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::vector<int> intersection(const Hyperedge& a, const Hyperedge& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Nullity of the sub-hypergraph formed by the listed hyperedges.
int subset_nullity(const Hypergraph& h, std::span<const int> indices) {
  std::vector<int> verts;
  for (int i : indices) verts.insert(verts.end(), h.edges()[i].begin(), h.edges()[i].end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  DisjointSets sets(static_cast<int>(verts.size()));
  int merges = 0;
  auto local = [&](int v) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  for (int i : indices) {
    const auto& e = h.edges()[i];
    for (std::size_t t = 1; t < e.size(); ++t)
      if (sets.unite(local(e[0]), local(e[t]))) ++merges;
  }
  const int components = static_cast<int>(verts.size()) - merges;
  return (h.uniformity() - 1) * static_cast<int>(indices.size()) + components -
         static_cast<int>(verts.size());
}

}  // namespace

Hypergraph::Hypergraph(int r, int ambient_n) : r_(r), n_(ambient_n) {
  if (r < 2) throw Error(ErrorKind::contract_violation, "hypergraph uniformity must be >= 2");
  if (ambient_n < 0) throw Error(ErrorKind::contract_violation, "negative ambient order");
}

Hypergraph::Hypergraph(int r, int ambient_n, std::vector<Hyperedge> edges) : Hypergraph(r, ambient_n) {
  for (auto& e : edges) add(std::move(e));
}

void Hypergraph::add(Hyperedge edge) {
  std::sort(edge.begin(), edge.end());
  if (static_cast<int>(edge.size()) != r_) {
    throw Error(ErrorKind::contract_violation, "hyperedge must have exactly r vertices");
  }
  if (std::adjacent_find(edge.begin(), edge.end()) != edge.end()) {
    throw Error(ErrorKind::contract_violation, "hyperedge has repeated vertex");
  }
  if (edge.front() < 0 || edge.back() >= n_) {
    throw Error(ErrorKind::contract_violation, "hyperedge vertex out of range");
  }
  edges_.push_back(std::move(edge));
}

Hypergraph Hypergraph::subhypergraph(std::span<const int> edge_indices) const {
  Hypergraph out(r_, n_);
  for (int i : edge_indices) out.edges_.push_back(edges_.at(i));
  return out;
}

std::vector<int> Hypergraph::spanned_vertices() const {
  std::vector<int> out;
  for (const auto& e : edges_) out.insert(out.end(), e.begin(), e.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool FGraph::contains(const FCopy& copy) const {
  return std::find(f_edges.begin(), f_edges.end(), copy) != f_edges.end();
}

bool FGraph::add(FCopy copy) {
  if (contains(copy)) return false;
  for (int v : copy.vertex_image)
    if (v < 0 || v >= ambient_n) throw Error(ErrorKind::contract_violation, "F-edge vertex out of range");
  f_edges.push_back(std::move(copy));
  return true;
}

const char* to_string(ComponentClass c) {
  switch (c) {
    case ComponentClass::tree: return "tree";
    case ComponentClass::unicyclic: return "unicyclic";
    case ComponentClass::complex: return "complex";
  }
  return "?";
}

int nullity(const Hypergraph& h) {
  std::vector<int> all(h.edge_count());
  std::iota(all.begin(), all.end(), 0);
  return subset_nullity(h, all);
}

std::vector<std::vector<int>> component_edge_indices(const Hypergraph& h) {
  DisjointSets sets(h.ambient_order());
  for (const auto& e : h.edges())
    for (std::size_t t = 1; t < e.size(); ++t) sets.unite(e[0], e[t]);
  std::map<int, int> slot;
  std::vector<std::vector<int>> out;
  for (int i = 0; i < h.edge_count(); ++i) {
    int root = sets.find(h.edges()[i][0]);
    auto [it, inserted] = slot.emplace(root, static_cast<int>(out.size()));
    if (inserted) out.emplace_back();
    out[it->second].push_back(i);
  }
  return out;
}

bool is_connected(const Hypergraph& h) {
  return h.edge_count() > 0 && component_edge_indices(h).size() == 1;
}

namespace {

ComponentClass class_of(int null) {
  if (null == 0) return ComponentClass::tree;
  if (null == 1) return ComponentClass::unicyclic;
  return ComponentClass::complex;
}

}  // namespace

StructureReport analyze(const Hypergraph& h) {
  StructureReport report;
  for (auto& indices : component_edge_indices(h)) {
    ComponentReport c;
    c.nullity = subset_nullity(h, indices);
    c.cls = class_of(c.nullity);
    c.vertices = h.subhypergraph(indices).spanned_vertices();
    c.edge_indices = std::move(indices);
    report.components.push_back(std::move(c));
  }
  return report;
}

ComponentClass classify_component(const Hypergraph& h) {
  if (!is_connected(h)) {
    throw Error(ErrorKind::contract_violation, "classify_component needs a connected nonempty hypergraph");
  }
  return class_of(nullity(h));
}

bool is_tree_by_construction(const Hypergraph& h) {
  if (h.edge_count() == 0) return true;
  std::vector<char> in_tree(h.ambient_order(), 0);
  std::vector<char> placed(h.edge_count(), 0);
  in_tree[h.edges()[0][0]] = 1;
  int remaining = h.edge_count();
  bool progress = true;
  while (remaining > 0 && progress) {
    progress = false;
    for (int i = 0; i < h.edge_count(); ++i) {
      if (placed[i]) continue;
      int meet = 0;
      for (int v : h.edges()[i]) meet += in_tree[v];
      if (meet != 1) continue;
      for (int v : h.edges()[i]) in_tree[v] = 1;
      placed[i] = 1;
      --remaining;
      progress = true;
    }
  }
  return remaining == 0;
}

int avoidable_edge_bound(int r) { return r * (r - 1); }

std::optional<std::vector<int>> find_avoidable_configuration(const Hypergraph& h,
                                                             const AvoidableSearchOptions& options) {
  const int bound = avoidable_edge_bound(h.uniformity());
  std::uint64_t nodes = 0;

  for (const auto& component : component_edge_indices(h)) {
    if (subset_nullity(h, component) <= 1) continue;

    // Strip hyperedges meeting the rest in at most one vertex; a minimal
    // witness never contains one.
    std::vector<int> core = component;
    std::map<int, int> occurrences;
    for (int i : core)
      for (int v : h.edges()[i]) ++occurrences[v];
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t t = 0; t < core.size(); ++t) {
        int shared = 0;
        for (int v : h.edges()[core[t]]) shared += occurrences[v] >= 2;
        if (shared <= 1) {
          for (int v : h.edges()[core[t]]) --occurrences[v];
          core.erase(core.begin() + static_cast<std::ptrdiff_t>(t));
          changed = true;
          break;
        }
      }
    }

    Hypergraph core_h = h.subhypergraph(core);
    for (const auto& piece : component_edge_indices(core_h)) {
      if (subset_nullity(core_h, piece) <= 1) continue;
      // Breadth-first over connected hyperedge subsets, smallest first.
      std::set<std::vector<int>> level;
      for (int i : piece) level.insert({i});
      for (int size = 1; size <= bound && !level.empty(); ++size) {
        std::set<std::vector<int>> next;
        for (const auto& subset : level) {
          if (++nodes > options.node_cap) {
            throw Error(ErrorKind::budget_exceeded, "avoidable-configuration search exceeded node cap");
          }
          if (size >= 2 && subset_nullity(core_h, subset) >= 2) {
            std::vector<int> witness;
            for (int i : subset) witness.push_back(core[i]);
            std::sort(witness.begin(), witness.end());
            return witness;
          }
          if (size == bound) continue;
          for (int cand : piece) {
            if (std::binary_search(subset.begin(), subset.end(), cand)) continue;
            bool touches = std::any_of(subset.begin(), subset.end(), [&](int i) {
              return intersection_size(core_h.edges()[i], core_h.edges()[cand]) > 0;
            });
            if (!touches) continue;
            std::vector<int> grown = subset;
            grown.insert(std::upper_bound(grown.begin(), grown.end(), cand), cand);
            next.insert(std::move(grown));
          }
        }
        level = std::move(next);
      }
    }
  }
  return std::nullopt;
}

bool is_clean_cycle(const Hypergraph& h, std::span<const int> order) {
  const int k = static_cast<int>(order.size());
  if (k < 2) return false;
  const auto& e = h.edges();
  if (k == 2) return intersection_size(e[order[0]], e[order[1]]) == 2;
  std::vector<int> cycle_vertices;
  for (int t = 0; t < k; ++t) {
    for (int u = t + 1; u < k; ++u) {
      bool adjacent = (u == t + 1) || (t == 0 && u == k - 1);
      int shared = intersection_size(e[order[t]], e[order[u]]);
      if (adjacent ? shared != 1 : shared != 0) return false;
    }
    auto meet = intersection(e[order[t]], e[order[(t + 1) % k]]);
    cycle_vertices.push_back(meet[0]);
  }
  std::sort(cycle_vertices.begin(), cycle_vertices.end());
  return std::adjacent_find(cycle_vertices.begin(), cycle_vertices.end()) == cycle_vertices.end();
}

std::vector<CleanCycle> find_clean_cycles(const Hypergraph& h, int k_max) {
  std::vector<CleanCycle> out;
  const auto& e = h.edges();
  const int m = h.edge_count();
  if (k_max < 2) return out;

  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (intersection_size(e[i], e[j]) == 2) out.push_back({{i, j}, intersection(e[i], e[j])});

  if (k_max < 3) return out;
  std::vector<int> path;
  std::vector<int> shared;  // shared[t] = vertex common to path[t] and path[t+1]

  auto extend = [&](auto&& self) -> void {
    const int t = static_cast<int>(path.size());  // index of the edge to add
    for (int cand = path[0] + 1; cand < m; ++cand) {
      if (std::find(path.begin(), path.end(), cand) != path.end()) continue;
      if (intersection_size(e[path.back()], e[cand]) != 1) continue;
      int v = intersection(e[path.back()], e[cand])[0];
      if (std::find(shared.begin(), shared.end(), v) != shared.end()) continue;
      bool ok = true;
      for (int u = 1; u + 1 < t && ok; ++u) ok = intersection_size(e[path[u]], e[cand]) == 0;
      if (!ok) continue;
      int with_first = intersection_size(e[path[0]], e[cand]);
      if (t >= 2 && with_first == 1) {
        int closing = intersection(e[path[0]], e[cand])[0];
        bool distinct = closing != v && std::find(shared.begin(), shared.end(), closing) == shared.end();
        if (distinct && path[1] < cand) {
          CleanCycle c;
          c.edge_indices = path;
          c.edge_indices.push_back(cand);
          c.cycle_vertices.push_back(closing);
          c.cycle_vertices.insert(c.cycle_vertices.end(), shared.begin(), shared.end());
          c.cycle_vertices.push_back(v);
          out.push_back(std::move(c));
        }
      }
      if ((t == 1 || with_first == 0) && t + 1 < k_max) {
        path.push_back(cand);
        shared.push_back(v);
        self(self);
        path.pop_back();
        shared.pop_back();
      }
    }
  };
  for (int s = 0; s < m; ++s) {
    path = {s};
    shared.clear();
    extend(extend);
  }
  return out;
}

SimpleGraph underlying_graph(const Hypergraph& h) {
  SimpleGraph g(h.ambient_order());
  for (const auto& e : h.edges())
    for (std::size_t a = 0; a < e.size(); ++a)
      for (std::size_t b = a + 1; b < e.size(); ++b) g.add_edge(e[a], e[b]);
  return g;
}

SimpleGraph underlying_graph(const FGraph& hf) {
  SimpleGraph g(hf.ambient_n);
  for (const auto& copy : hf.f_edges)
    for (const auto& [u, v] : copy.edges) g.add_edge(u, v);
  return g;
}

std::vector<FCopy> extra_copies(const FGraph& hf, const FCopy& f1) {
  if (!hf.contains(f1)) throw Error(ErrorKind::contract_violation, "F1 is not an F-edge of H_F");
  SimpleGraph host = underlying_graph(hf);
  std::vector<FCopy> out;
  for (auto& copy : copies_in_host(*hf.pattern, host)) {
    if (hf.contains(copy)) continue;
    bool meets = std::any_of(copy.edges.begin(), copy.edges.end(), [&](const Edge& e) {
      return std::binary_search(f1.edges.begin(), f1.edges.end(), e);
    });
    if (meets) out.push_back(std::move(copy));
  }
  return out;
}

Hypergraph to_hypergraph(const FGraph& hf) {
  Hypergraph h(hf.pattern->order(), hf.ambient_n);
  for (const auto& copy : hf.f_edges) h.add(copy.vertices());
  return h;
}

}  // namespace hcouple
