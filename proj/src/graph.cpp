#include "hcouple/graph.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "hcouple/errors.hpp"

namespace hcouple {

Edge make_edge(int u, int v) {
  if (u == v) throw Error(ErrorKind::contract_violation, "loop edge " + std::to_string(u));
  return u < v ? Edge{u, v} : Edge{v, u};
}

int pair_count(int n) { return n * (n - 1) / 2; }

int edge_id(int u, int v, int n) {
  if (u > v) std::swap(u, v);
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

Edge edge_from_id(int id, int n) {
  int u = 0;
  int row = n - 1;
  while (id >= row) {
    id -= row;
    ++u;
    --row;
  }
  return {u, u + 1 + id};
}

SimpleGraph::SimpleGraph(int vertex_count)
    : n_(vertex_count), words_((vertex_count + 63) / 64) {
  if (vertex_count < 0) throw Error(ErrorKind::contract_violation, "negative vertex count");
  adj_.assign(static_cast<std::size_t>(n_) * words_, 0);
}

SimpleGraph::SimpleGraph(int vertex_count, std::span<const Edge> edges) : SimpleGraph(vertex_count) {
  for (const auto& [u, v] : edges) add_edge(u, v);
}

SimpleGraph SimpleGraph::complete(int n) {
  SimpleGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

SimpleGraph SimpleGraph::cycle(int n) {
  SimpleGraph g(n);
  for (int v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

SimpleGraph SimpleGraph::path(int n) {
  SimpleGraph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

void SimpleGraph::check_vertex(int v) const {
  if (v < 0 || v >= n_) {
    throw Error(ErrorKind::contract_violation,
                "vertex " + std::to_string(v) + " out of range for n=" + std::to_string(n_));
  }
}

bool SimpleGraph::has_edge(int u, int v) const {
  if (u == v) return false;
  const auto row = static_cast<std::size_t>(u) * words_;
  return (adj_[row + v / 64] >> (v % 64)) & 1U;
}

bool SimpleGraph::add_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw Error(ErrorKind::contract_violation, "loop edge " + std::to_string(u));
  if (has_edge(u, v)) return false;
  adj_[static_cast<std::size_t>(u) * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
  adj_[static_cast<std::size_t>(v) * words_ + u / 64] |= std::uint64_t{1} << (u % 64);
  ++m_;
  return true;
}

bool SimpleGraph::remove_edge(int u, int v) {
  if (!has_edge(u, v)) return false;
  adj_[static_cast<std::size_t>(u) * words_ + v / 64] &= ~(std::uint64_t{1} << (v % 64));
  adj_[static_cast<std::size_t>(v) * words_ + u / 64] &= ~(std::uint64_t{1} << (u % 64));
  --m_;
  return true;
}

std::vector<Edge> SimpleGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (int u = 0; u < n_; ++u)
    for (int v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

std::vector<int> SimpleGraph::neighbors(int v) const {
  std::vector<int> out;
  const auto row = static_cast<std::size_t>(v) * words_;
  for (int w = 0; w < words_; ++w) {
    std::uint64_t bits = adj_[row + w];
    while (bits) {
      out.push_back(w * 64 + std::countr_zero(bits));
      bits &= bits - 1;
    }
  }
  return out;
}

int SimpleGraph::degree(int v) const {
  int d = 0;
  const auto row = static_cast<std::size_t>(v) * words_;
  for (int w = 0; w < words_; ++w) d += std::popcount(adj_[row + w]);
  return d;
}

int SimpleGraph::max_degree() const {
  int best = 0;
  for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

bool SimpleGraph::is_connected() const {
  if (n_ <= 1) return true;
  std::vector<char> seen(n_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n_;
}

bool SimpleGraph::contains_edges(std::span<const Edge> edges) const {
  return std::all_of(edges.begin(), edges.end(), [&](const Edge& e) {
    return e.first >= 0 && e.second < n_ && has_edge(e.first, e.second);
  });
}

SimpleGraph induced_subgraph(const SimpleGraph& g, std::span<const int> vertices) {
  SimpleGraph out(static_cast<int>(vertices.size()));
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if (g.has_edge(vertices[i], vertices[j])) out.add_edge(static_cast<int>(i), static_cast<int>(j));
  return out;
}

}  // namespace hcouple
