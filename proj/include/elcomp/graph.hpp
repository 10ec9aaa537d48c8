#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace elcomp {

class SparseMat;

/// Directed graph in adjacency-list (CSR) form.
struct Digraph {
  std::vector<std::size_t> ptr{0};
  std::vector<std::size_t> idx;

  std::size_t size() const { return ptr.size() - 1; }
};

Digraph digraph_from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

/// Edge i -> j for every off-diagonal entry with |a_ij| > zero_tol.
Digraph digraph_of(const SparseMat& a, double zero_tol);

/// Tarjan's algorithm (iterative). Components come out in reverse
/// topological order of the condensation; members of each are sorted.
std::vector<std::vector<std::size_t>> strongly_connected_components(const Digraph& g);

bool strongly_connected(const Digraph& g);

/// Kahn ordering, smallest index first among ready vertices; nullopt on a cycle.
std::optional<std::vector<std::size_t>> topological_order(const Digraph& g);

}  // namespace elcomp
