#include "elcomp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "elcomp/sparse.hpp"

namespace elcomp {

Digraph digraph_from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  Digraph g;
  g.ptr.assign(n + 1, 0);
  auto sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const auto& [from, to] : sorted) ++g.ptr[from + 1];
  for (std::size_t i = 0; i < n; ++i) g.ptr[i + 1] += g.ptr[i];
  g.idx.reserve(sorted.size());
  for (const auto& e : sorted) g.idx.push_back(e.second);
  return g;
}

Digraph digraph_of(const SparseMat& a, double zero_tol) {
  Digraph g;
  g.ptr.assign(a.rows() + 1, 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      const std::size_t j = a.col_idx()[p];
      if (j != i && std::abs(a.vals()[p]) > zero_tol) g.idx.push_back(j);
    }
    g.ptr[i + 1] = g.idx.size();
  }
  return g;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const Digraph& g) {
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  const std::size_t n = g.size();
  std::vector<std::size_t> index(n, unvisited), low(n, 0), edge_pos(n, 0);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<std::size_t> scc_stack, call_stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call_stack.push_back(root);
    while (!call_stack.empty()) {
      const std::size_t v = call_stack.back();
      if (index[v] == unvisited) {
        index[v] = low[v] = counter++;
        edge_pos[v] = g.ptr[v];
        scc_stack.push_back(v);
        on_stack[v] = 1;
      }
      bool pushed = false;
      while (edge_pos[v] < g.ptr[v + 1]) {
        const std::size_t w = g.idx[edge_pos[v]++];
        if (index[w] == unvisited) {
          call_stack.push_back(w);
          pushed = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (pushed) continue;
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const std::size_t parent = call_stack.back();
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return out;
}

bool strongly_connected(const Digraph& g) {
  if (g.size() == 0) return false;
  return strongly_connected_components(g).size() == 1;
}

std::optional<std::vector<std::size_t>> topological_order(const Digraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> indegree(n, 0);
  for (auto j : g.idx) ++indegree[j];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t p = g.ptr[v]; p < g.ptr[v + 1]; ++p) {
      if (--indegree[g.idx[p]] == 0) ready.push(g.idx[p]);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

}  // namespace elcomp
