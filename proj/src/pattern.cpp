#include "hcouple/pattern.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "hcouple/errors.hpp"

namespace hcouple {

namespace {

constexpr int kMaskedLimit = 24;

void require_small(const SimpleGraph& f, int limit, const char* what) {
  if (f.vertex_count() > limit) {
    throw Error(ErrorKind::cap_exceeded, std::string(what) + ": pattern has " +
                                             std::to_string(f.vertex_count()) + " vertices, cap is " +
                                             std::to_string(limit));
  }
}

bool mask_connected(const SimpleGraph& g, std::uint64_t vertices) {
  if (vertices == 0) return true;
  std::uint64_t seen = vertices & (~vertices + 1);
  std::uint64_t frontier = seen;
  while (frontier) {
    int v = std::countr_zero(frontier);
    frontier &= frontier - 1;
    std::uint64_t fresh = g.row(v) & vertices & ~seen;
    seen |= fresh;
    frontier |= fresh;
  }
  return seen == vertices;
}

// Backtracking search for isomorphisms a -> b.  Stops after the first one
// unless count_all is set.
class IsoSearch {
 public:
  IsoSearch(const SimpleGraph& a, const SimpleGraph& b) : a_(a), b_(b), n_(a.vertex_count()) {
    map_.assign(n_, -1);
    used_.assign(n_, 0);
    for (int v = 0; v < n_; ++v) {
      deg_a_.push_back(a.degree(v));
      deg_b_.push_back(b.degree(v));
    }
    // Map high-degree, well-connected vertices first.
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<char> placed(n_, 0);
    order_.clear();
    for (int step = 0; step < n_; ++step) {
      int best = -1;
      int best_links = -1;
      for (int v = 0; v < n_; ++v) {
        if (placed[v]) continue;
        int links = 0;
        for (int w : order_)
          if (a.has_edge(v, w)) ++links;
        if (links > best_links || (links == best_links && deg_a_[v] > deg_a_[best])) {
          best = v;
          best_links = links;
        }
      }
      placed[best] = 1;
      order_.push_back(best);
    }
  }

  std::uint64_t run(bool count_all) {
    count_all_ = count_all;
    found_ = 0;
    recurse(0);
    return found_;
  }

 private:
  bool recurse(int depth) {
    if (depth == n_) {
      ++found_;
      return !count_all_;
    }
    int v = order_[depth];
    for (int w = 0; w < n_; ++w) {
      if (used_[w] || deg_b_[w] != deg_a_[v]) continue;
      bool ok = true;
      for (int d = 0; d < depth && ok; ++d) {
        int u = order_[d];
        ok = a_.has_edge(v, u) == b_.has_edge(w, map_[u]);
      }
      if (!ok) continue;
      map_[v] = w;
      used_[w] = 1;
      bool stop = recurse(depth + 1);
      used_[w] = 0;
      map_[v] = -1;
      if (stop) return true;
    }
    return false;
  }

  const SimpleGraph& a_;
  const SimpleGraph& b_;
  int n_;
  std::vector<int> map_, order_, deg_a_, deg_b_;
  std::vector<char> used_;
  bool count_all_ = false;
  std::uint64_t found_ = 0;
};

BigInt binomial(int n, int k) {
  BigInt out;
  if (k < 0 || k > n) return 0;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

Rational one_density(const SimpleGraph& f) {
  if (f.vertex_count() < 2) {
    throw Error(ErrorKind::invalid_pattern, "1-density needs at least two vertices");
  }
  Rational d(static_cast<long>(f.edge_count()), static_cast<long>(f.vertex_count() - 1));
  d.canonicalize();
  return d;
}

BalanceClass classify_balance(const SimpleGraph& f) {
  const int n = f.vertex_count();
  if (n < 2) throw Error(ErrorKind::invalid_pattern, "balance needs at least two vertices");
  require_small(f, kMaskedLimit, "classify_balance");
  const long m = static_cast<long>(f.edge_count());
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;

  // Induced edge counts for every vertex subset, lowest vertex peeled off.
  std::vector<int> edges_in(std::size_t{1} << n, 0);
  for (std::uint64_t s = 1; s <= full; ++s) {
    int v = std::countr_zero(s);
    std::uint64_t rest = s & (s - 1);
    edges_in[s] = edges_in[rest] + std::popcount(f.row(v) & rest);
  }

  BalanceClass out{true, true};
  for (std::uint64_t s = 1; s <= full; ++s) {
    int k = std::popcount(s);
    if (k < 2 || edges_in[s] == 0) continue;
    // Compare e(S)/(k-1) with m/(n-1) by cross-multiplication.
    long lhs = static_cast<long>(edges_in[s]) * (n - 1);
    long rhs = m * (k - 1);
    if (lhs > rhs) out.one_balanced = false;
    if (s != full && lhs >= rhs) out.strictly_one_balanced = false;
  }
  if (!out.one_balanced) out.strictly_one_balanced = false;
  return out;
}

bool is_two_connected(const SimpleGraph& f) {
  if (f.vertex_count() < 2 || !f.is_connected()) return false;
  return f.vertex_count() == 2 || vertex_connectivity(f) >= 2;
}

int vertex_connectivity(const SimpleGraph& f) {
  const int n = f.vertex_count();
  if (n <= 1) return 0;
  if (!f.is_connected()) return 0;
  if (static_cast<int>(f.edge_count()) == n * (n - 1) / 2) return n - 1;
  require_small(f, 63, "vertex_connectivity");
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (int k = 1; k <= n - 2; ++k) {
    bool cut = false;
    for_each_combination(n, k, [&](const std::vector<int>& removed) {
      if (cut) return;
      std::uint64_t rest = full;
      for (int v : removed) rest &= ~(std::uint64_t{1} << v);
      if (!mask_connected(f, rest)) cut = true;
    });
    if (cut) return k;
  }
  return n - 1;
}

bool are_isomorphic(const SimpleGraph& a, const SimpleGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> da, db;
  for (int v = 0; v < a.vertex_count(); ++v) {
    da.push_back(a.degree(v));
    db.push_back(b.degree(v));
  }
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  if (da != db) return false;
  return IsoSearch(a, b).run(false) > 0;
}

std::uint64_t automorphism_count(const SimpleGraph& f, int size_cap) {
  require_small(f, size_cap, "automorphism_count");
  return IsoSearch(f, f).run(true);
}

bool edge_swap_rigid(const SimpleGraph& f) {
  const int n = f.vertex_count();
  auto edges = f.edges();
  if (edges.empty()) return true;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (f.has_edge(u, v)) continue;
      for (const auto& [a, b] : edges) {
        SimpleGraph swapped = f;
        swapped.add_edge(u, v);
        swapped.remove_edge(a, b);
        if (are_isomorphic(f, swapped)) return false;
      }
    }
  }
  return true;
}

bool is_nice(const SimpleGraph& f) {
  return classify_balance(f).strictly_one_balanced && vertex_connectivity(f) >= 3 && edge_swap_rigid(f);
}

PatternGraph::PatternGraph(SimpleGraph graph, std::string name, int size_cap)
    : graph_(std::move(graph)), name_(std::move(name)) {
  if (graph_.vertex_count() < 2) {
    throw Error(ErrorKind::invalid_pattern, "pattern needs at least two vertices");
  }
  if (!graph_.is_connected()) throw Error(ErrorKind::invalid_pattern, "pattern must be connected");
  require_small(graph_, size_cap, "pattern");
  d1_ = hcouple::one_density(graph_);
  aut_ = hcouple::automorphism_count(graph_, size_cap);
  kappa_ = hcouple::vertex_connectivity(graph_);
  auto balance = hcouple::classify_balance(graph_);
  flags_.one_balanced = balance.one_balanced;
  flags_.strictly_one_balanced = balance.strictly_one_balanced;
  flags_.two_connected = hcouple::is_two_connected(graph_);
  flags_.three_connected = kappa_ >= 3;
  flags_.edge_swap_rigid = hcouple::edge_swap_rigid(graph_);
  flags_.nice = flags_.strictly_one_balanced && flags_.three_connected && flags_.edge_swap_rigid;
}

Rational one_density(const PatternGraph& f) { return f.one_density(); }
BalanceClass classify_balance(const PatternGraph& f) {
  return {f.flags().one_balanced, f.flags().strictly_one_balanced};
}
int vertex_connectivity(const PatternGraph& f) { return f.connectivity(); }
bool edge_swap_rigid(const PatternGraph& f) { return f.flags().edge_swap_rigid; }
bool is_nice(const PatternGraph& f) { return f.flags().nice; }
std::uint64_t automorphism_count(const PatternGraph& f) { return f.aut_count(); }

namespace {

SimpleGraph petersen() {
  SimpleGraph g(10);
  for (int i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(i, i + 5);
    g.add_edge(5 + i, 5 + (i + 2) % 5);
  }
  return g;
}

std::optional<SimpleGraph> lookup_named(std::string_view name) {
  if (name == "petersen") return petersen();
  if (name.size() != 2) return std::nullopt;
  int k = name[1] - '0';
  switch (name[0]) {
    case 'K': if (k >= 3 && k <= 7) return SimpleGraph::complete(k); break;
    case 'C': if (k >= 4 && k <= 7) return SimpleGraph::cycle(k); break;
    case 'P': if (k >= 3 && k <= 5) return SimpleGraph::path(k); break;
    default: break;
  }
  return std::nullopt;
}

}  // namespace

bool is_named_pattern(std::string_view name) { return lookup_named(name).has_value(); }

PatternGraph named_pattern(std::string_view name) {
  auto g = lookup_named(name);
  if (!g) throw Error(ErrorKind::invalid_pattern, "unknown pattern '" + std::string(name) + "'");
  return PatternGraph(std::move(*g), std::string(name));
}

std::vector<int> FCopy::vertices() const {
  std::vector<int> out = vertex_image;
  std::sort(out.begin(), out.end());
  return out;
}

FCopy make_copy(const PatternGraph& f, std::vector<int> vertex_image) {
  if (static_cast<int>(vertex_image.size()) != f.order()) {
    throw Error(ErrorKind::contract_violation, "vertex image has wrong length");
  }
  FCopy copy;
  for (const auto& [u, v] : f.graph().edges()) copy.edges.push_back(make_edge(vertex_image[u], vertex_image[v]));
  std::sort(copy.edges.begin(), copy.edges.end());
  copy.vertex_image = std::move(vertex_image);
  return copy;
}

BigInt copy_count(const PatternGraph& f, int n) {
  BigInt fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(f.order()));
  return binomial(n, f.order()) * fact / BigInt(static_cast<unsigned long>(f.aut_count()));
}

std::vector<FCopy> enumerate_copies(const PatternGraph& f, int n) {
  std::vector<FCopy> out;
  const int r = f.order();
  if (n < r) return out;
  for_each_combination(n, r, [&](const std::vector<int>& subset) {
    if (f.is_complete()) {
      out.push_back(make_copy(f, subset));
      return;
    }
    std::set<std::vector<Edge>> seen;
    std::vector<int> perm = subset;
    do {
      FCopy copy = make_copy(f, perm);
      if (seen.insert(copy.edges).second) out.push_back(std::move(copy));
    } while (std::next_permutation(perm.begin(), perm.end()));
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FCopy> copies_in_host(const PatternGraph& f, const SimpleGraph& host) {
  const SimpleGraph& pg = f.graph();
  const int r = f.order();
  const int n = host.vertex_count();
  std::map<std::vector<Edge>, std::vector<int>> found;
  if (n < r) return {};

  // BFS order so every vertex after the first has a mapped neighbour.
  std::vector<int> order{0};
  std::vector<char> placed(r, 0);
  placed[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int w : pg.neighbors(order[i]))
      if (!placed[w]) {
        placed[w] = 1;
        order.push_back(w);
      }

  std::vector<int> image(r, -1);
  std::vector<char> used(n, 0);
  std::vector<int> host_degree(n);
  for (int v = 0; v < n; ++v) host_degree[v] = host.degree(v);

  auto recurse = [&](auto&& self, int depth) -> void {
    if (depth == r) {
      FCopy copy = make_copy(f, image);
      auto it = found.find(copy.edges);
      if (it == found.end()) {
        found.emplace(std::move(copy.edges), std::move(copy.vertex_image));
      } else if (copy.vertex_image < it->second) {
        it->second = std::move(copy.vertex_image);
      }
      return;
    }
    int v = order[depth];
    int anchor = -1;
    for (int d = 0; d < depth; ++d)
      if (pg.has_edge(v, order[d])) {
        anchor = order[d];
        break;
      }
    std::vector<int> candidates;
    if (anchor >= 0) {
      candidates = host.neighbors(image[anchor]);
    } else {
      candidates.resize(n);
      std::iota(candidates.begin(), candidates.end(), 0);
    }
    const int need = pg.degree(v);
    for (int w : candidates) {
      if (used[w] || host_degree[w] < need) continue;
      bool ok = true;
      for (int d = 0; d < depth && ok; ++d) {
        int u = order[d];
        if (pg.has_edge(v, u)) ok = host.has_edge(w, image[u]);
      }
      if (!ok) continue;
      image[v] = w;
      used[w] = 1;
      self(self, depth + 1);
      used[w] = 0;
      image[v] = -1;
    }
  };
  recurse(recurse, 0);

  std::vector<FCopy> out;
  out.reserve(found.size());
  for (auto& [edges, img] : found) out.push_back(FCopy{img, edges});
  return out;
}

SimpleGraph sample_gnp(int n, const Rational& p, RandomStream& rng) {
  SimpleGraph g(n);
  BernoulliThreshold coin(p);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin.draw(rng)) g.add_edge(u, v);
  return g;
}

std::optional<std::vector<FCopy>> find_factor_direct(const SimpleGraph& g, const PatternGraph& f,
                                                     std::uint64_t node_budget) {
  const int n = g.vertex_count();
  const int r = f.order();
  if (n % r != 0) {
    throw Error(ErrorKind::divisibility,
                "pattern order " + std::to_string(r) + " does not divide n=" + std::to_string(n));
  }
  if (n == 0) return std::vector<FCopy>{};

  std::vector<FCopy> copies = copies_in_host(f, g);
  std::vector<std::vector<int>> verts(copies.size());
  std::vector<std::vector<int>> by_min_vertex(n);
  for (std::size_t i = 0; i < copies.size(); ++i) {
    verts[i] = copies[i].vertices();
    by_min_vertex[verts[i].front()].push_back(static_cast<int>(i));
  }
  // Any copy covering the lowest uncovered vertex v has all other vertices
  // above v, so indexing by minimum vertex is enough.
  std::vector<char> covered(n, 0);
  std::vector<int> chosen;
  std::uint64_t nodes = 0;

  auto recurse = [&](auto&& self, int from) -> bool {
    while (from < n && covered[from]) ++from;
    if (from == n) return true;
    if (++nodes > node_budget) {
      throw Error(ErrorKind::budget_exceeded, "find_factor_direct node budget exceeded");
    }
    for (int c : by_min_vertex[from]) {
      bool free = std::none_of(verts[c].begin(), verts[c].end(), [&](int v) { return covered[v]; });
      if (!free) continue;
      for (int v : verts[c]) covered[v] = 1;
      chosen.push_back(c);
      if (self(self, from + 1)) return true;
      chosen.pop_back();
      for (int v : verts[c]) covered[v] = 0;
    }
    return false;
  };
  if (!recurse(recurse, 0)) return std::nullopt;
  std::vector<FCopy> out;
  for (int c : chosen) out.push_back(copies[c]);
  return out;
}

}  // namespace hcouple
