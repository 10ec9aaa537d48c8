#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "elcomp/system.hpp"

namespace elcomp {

/// A coupling entry counts as present when its magnitude exceeds this at some
/// node. The threshold is absolute, so presence depends on the grid.
constexpr double kCouplingPresence = 1e-12;

/// Shape of the species digraph of M^- (edge l -> k iff m_kl^- is present).
enum class StructureKind {
  irreducible_cooperative_part,
  diagonal_minus,
  block_diagonal_minus,
  triangular_minus,
  general,
};

std::string to_string(StructureKind k);

struct StructureClass {
  StructureKind kind = StructureKind::general;
  /// No off-diagonal entry of M^+ is present: the system is cooperative.
  bool cooperative = false;
  /// Strongly connected components of the M^- digraph (block_diagonal_minus
  /// and diagonal_minus; singletons included).
  std::vector<std::vector<std::size_t>> blocks;
  /// Species order making M^- lower triangular (triangular_minus).
  std::vector<std::size_t> order;
};

/// Presence of entry (k, l) of M^+ / M^- over the given nodes (all nodes when
/// `nodes` is null).
bool plus_present(const SampledField& m, const std::vector<std::size_t>* nodes = nullptr);
bool minus_present(const SampledField& m, const std::vector<std::size_t>* nodes = nullptr);

StructureClass classify_structure(const SampledSystem& sys);
StructureClass classify_structure(const SystemSpec& spec);

struct GaugeResult {
  /// sigma_i in {+1, -1}; absent when no sign gauge makes the coupling cooperative.
  std::optional<std::vector<int>> sigma;
  /// Empty on success; "MixedSign" or "Inconsistent" otherwise.
  std::string reason;
  std::optional<std::size_t> species_a;
  std::optional<std::size_t> species_b;
};

/// Sign gauge with sigma_i sigma_j m_ij(x) <= 0 at every node, by a parity
/// two-colouring of the species graph. The first species of each connected
/// component gets +1.
GaugeResult find_gauge(const SampledSystem& sys);
GaugeResult find_gauge(const SystemSpec& spec);

/// Largest sigma_i sigma_j m_ij(x) over nodes and i != j.
double gauge_violation(const SampledSystem& sys, const std::vector<int>& sigma);

}  // namespace elcomp
