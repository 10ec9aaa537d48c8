#include <catch_amalgamated.hpp>

#include <random>

#include "elcomp/graph.hpp"
#include "elcomp/sparse.hpp"

using namespace elcomp;

namespace {

// Reachability by repeated relaxation; independent of Tarjan.
std::vector<std::vector<bool>> closure(const Digraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    r[i][i] = true;
    for (std::size_t e = g.ptr[i]; e < g.ptr[i + 1]; ++e) r[i][g.idx[e]] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

}  // namespace

TEST_CASE("small graphs", "[graph]") {
  CHECK(strongly_connected(digraph_from_edges(1, {})));
  CHECK(strongly_connected(digraph_from_edges(2, {{0, 1}, {1, 0}})));
  CHECK_FALSE(strongly_connected(digraph_from_edges(2, {{0, 1}})));
  CHECK_FALSE(strongly_connected(digraph_from_edges(2, {})));
  CHECK(strongly_connected(digraph_from_edges(3, {{0, 1}, {1, 2}, {2, 0}})));

  const auto order = topological_order(digraph_from_edges(3, {{2, 0}, {0, 1}}));
  REQUIRE(order);
  CHECK(*order == std::vector<std::size_t>{2, 0, 1});
  CHECK_FALSE(topological_order(digraph_from_edges(2, {{0, 1}, {1, 0}})));
}

TEST_CASE("matrix digraph skips the diagonal and tiny entries", "[graph]") {
  TripletBuilder b(3, 3);
  b.add(0, 0, 5);
  b.add(0, 1, -1);
  b.add(1, 2, 1e-20);
  b.add(2, 0, 2);
  const Digraph g = digraph_of(b.build(), 1e-14);
  CHECK(g.idx == std::vector<std::size_t>{1, 0});
  CHECK(g.ptr == std::vector<std::size_t>{0, 1, 1, 2});
}

TEST_CASE("components agree with the transitive closure", "[graph][property]") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && rng() % 5 == 0) edges.emplace_back(i, j);
    const Digraph g = digraph_from_edges(n, edges);
    const auto r = closure(g);
    const auto comps = strongly_connected_components(g);
    std::vector<std::size_t> comp(n);
    std::size_t total = 0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      CHECK(std::is_sorted(comps[c].begin(), comps[c].end()));
      for (auto v : comps[c]) comp[v] = c;
      total += comps[c].size();
    }
    CHECK(total == n);
    bool all = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        CHECK((comp[i] == comp[j]) == (r[i][j] && r[j][i]));
        all = all && r[i][j];
      }
    CHECK(strongly_connected(g) == all);
    // Reverse topological order of the condensation: edges never point to a later component.
    for (auto [a, b] : edges) CHECK(comp[a] >= comp[b]);

    const auto order = topological_order(g);
    CHECK(order.has_value() == (comps.size() == n));
    if (order) {
      std::vector<std::size_t> pos(n);
      for (std::size_t k = 0; k < n; ++k) pos[(*order)[k]] = k;
      for (auto [a, b] : edges) CHECK(pos[a] < pos[b]);
    }
  }
}

TEST_CASE("long paths do not overflow the stack", "[graph]") {
  const std::size_t n = 200000;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(n - 1, 0);
  CHECK(strongly_connected(digraph_from_edges(n, edges)));
}
