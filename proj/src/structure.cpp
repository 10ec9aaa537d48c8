#include "elcomp/structure.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <utility>

#include "elcomp/error.hpp"
#include "elcomp/graph.hpp"

namespace elcomp {

std::string to_string(StructureKind k) {
  switch (k) {
    case StructureKind::irreducible_cooperative_part: return "IrreducibleCooperativePart";
    case StructureKind::diagonal_minus: return "DiagonalMinus";
    case StructureKind::block_diagonal_minus: return "BlockDiagonalMinus";
    case StructureKind::triangular_minus: return "TriangularMinus";
    case StructureKind::general: return "General";
  }
  return "General";
}

namespace {

template <typename Pred>
bool any_node(const SampledField& m, const std::vector<std::size_t>* nodes, Pred pred) {
  if (nodes) {
    return std::any_of(nodes->begin(), nodes->end(), [&](std::size_t n) { return pred(m.values[n]); });
  }
  return std::any_of(m.values.begin(), m.values.end(), pred);
}

}  // namespace

bool plus_present(const SampledField& m, const std::vector<std::size_t>* nodes) {
  return any_node(m, nodes, [](double v) { return v > kCouplingPresence; });
}

bool minus_present(const SampledField& m, const std::vector<std::size_t>* nodes) {
  return any_node(m, nodes, [](double v) { return v < -kCouplingPresence; });
}

StructureClass classify_structure(const SampledSystem& sys) {
  const std::size_t n = sys.species();
  StructureClass out;
  out.cooperative = true;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      if (k == l) continue;
      if (plus_present(sys.coupling(k, l))) out.cooperative = false;
      if (minus_present(sys.coupling(k, l))) edges.emplace_back(l, k);
    }
  }
  const Digraph g = digraph_from_edges(n, edges);
  if (strongly_connected(g)) {
    out.kind = StructureKind::irreducible_cooperative_part;
    return out;
  }
  if (edges.empty()) {
    out.kind = StructureKind::diagonal_minus;
    for (std::size_t k = 0; k < n; ++k) out.blocks.push_back({k});
    return out;
  }
  auto comps = strongly_connected_components(g);
  std::vector<std::size_t> comp_of(n);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (auto s : comps[c]) comp_of[s] = c;
  }
  const bool inter = std::any_of(edges.begin(), edges.end(),
                                 [&](const auto& e) { return comp_of[e.first] != comp_of[e.second]; });
  if (!inter) {
    out.kind = StructureKind::block_diagonal_minus;
    std::sort(comps.begin(), comps.end());
    out.blocks = std::move(comps);
    return out;
  }
  if (auto order = topological_order(g)) {
    out.kind = StructureKind::triangular_minus;
    out.order = std::move(*order);
    return out;
  }
  out.kind = StructureKind::general;
  return out;
}

StructureClass classify_structure(const SystemSpec& spec) { return classify_structure(sample_system(spec)); }

GaugeResult find_gauge(const SampledSystem& sys) {
  const std::size_t n = sys.species();
  GaugeResult out;
  // parity[i][j]: 0 unknown, +1 same sign, -1 opposite sign.
  std::vector<std::vector<int>> parity(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool pos = plus_present(sys.coupling(i, j));
      const bool neg = minus_present(sys.coupling(i, j));
      if (pos && neg) {
        out.reason = "MixedSign";
        out.species_a = i;
        out.species_b = j;
        return out;
      }
      if (!pos && !neg) continue;
      const int want = pos ? -1 : 1;
      const std::size_t a = std::min(i, j);
      const std::size_t b = std::max(i, j);
      if (parity[a][b] != 0 && parity[a][b] != want) {
        out.reason = "Inconsistent";
        out.species_a = a;
        out.species_b = b;
        return out;
      }
      parity[a][b] = parity[b][a] = want;
    }
  }
  std::vector<int> sigma(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (sigma[root] != 0) continue;
    sigma[root] = 1;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      for (std::size_t j = 0; j < n; ++j) {
        if (parity[i][j] == 0) continue;
        const int want = sigma[i] * parity[i][j];
        if (sigma[j] == 0) {
          sigma[j] = want;
          queue.push_back(j);
        } else if (sigma[j] != want) {
          out.reason = "Inconsistent";
          out.species_a = std::min(i, j);
          out.species_b = std::max(i, j);
          return out;
        }
      }
    }
  }
  out.sigma = std::move(sigma);
  return out;
}

GaugeResult find_gauge(const SystemSpec& spec) { return find_gauge(sample_system(spec)); }

double gauge_violation(const SampledSystem& sys, const std::vector<int>& sigma) {
  const std::size_t n = sys.species();
  if (sigma.size() != n) throw Error(ErrorCode::dim_mismatch, "gauge length does not match species count");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (double v : sys.coupling(i, j).values) worst = std::max(worst, sigma[i] * sigma[j] * v);
    }
  }
  return n < 2 ? 0.0 : worst;
}

}  // namespace elcomp
