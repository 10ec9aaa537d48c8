#include "elcomp/mesh.hpp"

#include <charconv>
#include <cmath>
#include <deque>

#include "elcomp/error.hpp"

namespace elcomp {

namespace {

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

}  // namespace

Grid build_grid(int dim, const std::vector<double>& lo, const std::vector<double>& hi,
                const std::vector<int>& n) {
  if (dim != 1 && dim != 2) {
    throw Error(ErrorCode::bad_grid, "grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  const auto d = static_cast<std::size_t>(dim);
  if (lo.size() != d || hi.size() != d || n.size() != d) {
    throw Error(ErrorCode::bad_grid, "grid bounds and cell counts must have one entry per axis");
  }
  Grid g;
  g.dim_ = dim;
  g.node_count_ = 1;
  for (std::size_t a = 0; a < d; ++a) {
    if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]) || !(hi[a] > lo[a])) {
      throw Error(ErrorCode::bad_grid, "axis " + std::to_string(a) + ": need finite hi > lo");
    }
    if (n[a] < 3) {
      throw Error(ErrorCode::bad_grid, "axis " + std::to_string(a) + ": need at least 3 cells, got " +
                                           std::to_string(n[a]));
    }
    g.lo_[a] = lo[a];
    g.hi_[a] = hi[a];
    g.n_[a] = n[a];
    g.h_[a] = (hi[a] - lo[a]) / n[a];
    g.node_count_ *= static_cast<std::size_t>(n[a] + 1);
  }

  g.interior_index_.assign(g.node_count_, -1);
  g.boundary_index_.assign(g.node_count_, -1);
  for (std::size_t node = 0; node < g.node_count_; ++node) {
    const auto idx = g.indices(node);
    bool interior = true;
    for (std::size_t a = 0; a < d; ++a) {
      if (idx[a] == 0 || idx[a] == g.n_[a]) interior = false;
    }
    if (interior) {
      g.interior_index_[node] = static_cast<std::ptrdiff_t>(g.interior_nodes_.size());
      g.interior_nodes_.push_back(node);
    } else {
      g.boundary_index_[node] = static_cast<std::ptrdiff_t>(g.boundary_nodes_.size());
      g.boundary_nodes_.push_back(node);
    }
  }

  std::string id = "grid " + std::to_string(dim);
  for (std::size_t a = 0; a < d; ++a) id += " " + std::to_string(n[a]);
  for (std::size_t a = 0; a < d; ++a) id += " " + shortest(lo[a]);
  for (std::size_t a = 0; a < d; ++a) id += " " + shortest(hi[a]);
  g.id_ = std::move(id);
  return g;
}

std::array<int, Grid::max_dim> Grid::indices(std::size_t node) const {
  std::array<int, max_dim> idx{};
  const auto stride = static_cast<std::size_t>(n_[0] + 1);
  idx[0] = static_cast<int>(node % stride);
  if (dim_ == 2) idx[1] = static_cast<int>(node / stride);
  return idx;
}

std::size_t Grid::node_at(int i, int j) const {
  return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_[0] + 1) * static_cast<std::size_t>(j);
}

double Grid::coord(std::size_t node, int axis) const {
  const auto idx = indices(node);
  return lo_[axis] + idx[axis] * h_[axis];
}

std::array<double, Grid::max_dim> Grid::point(std::size_t node) const {
  std::array<double, max_dim> p{};
  for (int a = 0; a < dim_; ++a) p[a] = coord(node, a);
  return p;
}

std::size_t SubdomainMask::count() const {
  std::size_t c = 0;
  for (auto v : inside) c += v ? 1 : 0;
  return c;
}

SubdomainMask sub_rectangle_mask(const Grid& grid, const std::vector<double>& lo0,
                                 const std::vector<double>& hi0) {
  const auto d = static_cast<std::size_t>(grid.dim());
  if (lo0.size() != d || hi0.size() != d) {
    throw Error(ErrorCode::dim_mismatch, "sub-rectangle bounds need one entry per axis");
  }
  for (std::size_t a = 0; a < d; ++a) {
    const int ax = static_cast<int>(a);
    const double slack = 1e-9 * grid.spacing(ax);
    if (lo0[a] < grid.lo(ax) - slack || hi0[a] > grid.hi(ax) + slack || !(hi0[a] > lo0[a])) {
      throw Error(ErrorCode::validation, "sub-rectangle must lie inside the domain with hi > lo");
    }
  }
  SubdomainMask mask;
  mask.grid_id = grid.id();
  mask.inside.assign(grid.interior_count(), 0);
  for (std::size_t k = 0; k < grid.interior_count(); ++k) {
    const auto p = grid.point(grid.interior_nodes()[k]);
    bool in = true;
    for (std::size_t a = 0; a < d; ++a) {
      // Strict inclusion, with a relative guard so nodes sitting on the
      // sub-rectangle edge are excluded despite round-off.
      const double guard = 1e-9 * grid.spacing(static_cast<int>(a));
      if (!(p[a] > lo0[a] + guard && p[a] < hi0[a] - guard)) in = false;
    }
    mask.inside[k] = in ? 1 : 0;
  }
  if (mask.count() == 0) {
    throw Error(ErrorCode::empty_subdomain, "sub-rectangle contains no interior grid node");
  }
  return mask;
}

SubdomainMask full_mask(const Grid& grid) {
  return SubdomainMask{grid.id(), std::vector<std::uint8_t>(grid.interior_count(), 1)};
}

SubdomainMask mask_union(const SubdomainMask& a, const SubdomainMask& b) {
  if (a.grid_id != b.grid_id || a.inside.size() != b.inside.size()) {
    throw Error(ErrorCode::dim_mismatch, "masks refer to different grids");
  }
  SubdomainMask out = a;
  for (std::size_t i = 0; i < out.inside.size(); ++i) out.inside[i] = a.inside[i] || b.inside[i];
  return out;
}

bool connected(const Grid& grid, const SubdomainMask& mask) {
  if (mask.inside.size() != grid.interior_count()) {
    throw Error(ErrorCode::dim_mismatch, "mask does not match grid");
  }
  const std::size_t total = mask.count();
  if (total == 0) return false;
  std::vector<std::uint8_t> seen(mask.inside.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t k = 0; k < mask.inside.size(); ++k) {
    if (mask.inside[k]) {
      queue.push_back(k);
      seen[k] = 1;
      break;
    }
  }
  std::size_t reached = 0;
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    ++reached;
    const auto idx = grid.indices(grid.interior_nodes()[k]);
    for (int axis = 0; axis < grid.dim(); ++axis) {
      for (int step : {-1, 1}) {
        auto nb = idx;
        nb[axis] += step;
        const std::size_t node = grid.node_at(nb[0], grid.dim() == 2 ? nb[1] : 0);
        const auto ii = grid.interior_index(node);
        if (ii < 0) continue;
        const auto u = static_cast<std::size_t>(ii);
        if (mask.inside[u] && !seen[u]) {
          seen[u] = 1;
          queue.push_back(u);
        }
      }
    }
  }
  return reached == total;
}

}  // namespace elcomp
