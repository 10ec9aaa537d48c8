#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace elcomp {

/// Uniform grid on an axis-aligned rectangle in 1D or 2D.
///
/// Nodes are enumerated lexicographically with x fastest. Interior nodes are
/// those with every index strictly between 0 and n; the rest are boundary.
class Grid {
 public:
  static constexpr int max_dim = 2;

  Grid() = default;

  int dim() const { return dim_; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  int cells(int axis) const { return n_[axis]; }
  double spacing(int axis) const { return h_[axis]; }

  std::size_t node_count() const { return node_count_; }
  std::size_t interior_count() const { return interior_nodes_.size(); }
  std::size_t boundary_count() const { return boundary_nodes_.size(); }

  /// Per-axis index of a node.
  std::array<int, max_dim> indices(std::size_t node) const;
  std::size_t node_at(int i, int j = 0) const;
  double coord(std::size_t node, int axis) const;
  std::array<double, max_dim> point(std::size_t node) const;

  bool is_interior(std::size_t node) const { return interior_index_[node] >= 0; }
  /// Position of `node` in the interior enumeration, or -1.
  std::ptrdiff_t interior_index(std::size_t node) const { return interior_index_[node]; }
  std::ptrdiff_t boundary_index(std::size_t node) const { return boundary_index_[node]; }
  const std::vector<std::size_t>& interior_nodes() const { return interior_nodes_; }
  const std::vector<std::size_t>& boundary_nodes() const { return boundary_nodes_; }

  /// "grid <dim> <n...> <lo...> <hi...>", also the field-file header suffix.
  const std::string& id() const { return id_; }

  friend bool operator==(const Grid& a, const Grid& b) { return a.id_ == b.id_; }

  friend Grid build_grid(int dim, const std::vector<double>& lo,
                         const std::vector<double>& hi, const std::vector<int>& n);

 private:
  int dim_ = 0;
  std::array<double, max_dim> lo_{};
  std::array<double, max_dim> hi_{};
  std::array<int, max_dim> n_{};
  std::array<double, max_dim> h_{};
  std::size_t node_count_ = 0;
  std::vector<std::ptrdiff_t> interior_index_;
  std::vector<std::ptrdiff_t> boundary_index_;
  std::vector<std::size_t> interior_nodes_;
  std::vector<std::size_t> boundary_nodes_;
  std::string id_;
};

/// Throws Error(bad_grid) unless dim is 1 or 2, hi > lo and n >= 3 per axis.
Grid build_grid(int dim, const std::vector<double>& lo, const std::vector<double>& hi,
                const std::vector<int>& n);

/// Boolean flag per interior node of a grid.
struct SubdomainMask {
  std::string grid_id;
  std::vector<std::uint8_t> inside;

  std::size_t count() const;
};

/// Interior nodes strictly inside [lo0, hi0] (per axis). Throws
/// Error(empty_subdomain) when no node qualifies.
SubdomainMask sub_rectangle_mask(const Grid& grid, const std::vector<double>& lo0,
                                 const std::vector<double>& hi0);

SubdomainMask full_mask(const Grid& grid);
SubdomainMask mask_union(const SubdomainMask& a, const SubdomainMask& b);

/// Breadth-first connectivity of the true-set under 2*dim-neighbour adjacency.
bool connected(const Grid& grid, const SubdomainMask& mask);

}  // namespace elcomp
