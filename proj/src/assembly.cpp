#include "elcomp/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "elcomp/error.hpp"

namespace elcomp {

namespace {

// Local numbering of the unknowns of one species block.
struct UnknownMap {
  std::vector<std::size_t> nodes;
  std::vector<std::ptrdiff_t> local;  // per grid node, -1 if not an unknown
};

UnknownMap make_unknowns(const Grid& grid, const SubdomainMask* mask) {
  UnknownMap map;
  map.local.assign(grid.node_count(), -1);
  if (mask && (mask->grid_id != grid.id() || mask->inside.size() != grid.interior_count())) {
    throw Error(ErrorCode::dim_mismatch, "mask does not belong to this grid");
  }
  for (std::size_t k = 0; k < grid.interior_count(); ++k) {
    if (mask && !mask->inside[k]) continue;
    const std::size_t node = grid.interior_nodes()[k];
    map.local[node] = static_cast<std::ptrdiff_t>(map.nodes.size());
    map.nodes.push_back(node);
  }
  if (map.nodes.empty()) throw Error(ErrorCode::empty_subdomain, "no unknowns to assemble");
  return map;
}

void check_field(const SampledField& f, const Grid& grid, const char* what) {
  if (f.values.size() != grid.node_count()) {
    throw Error(ErrorCode::dim_mismatch, std::string(what) + " field does not match the grid");
  }
}

// Writes the stencil of one species block into A (and G for boundary nodes).
void stencil_rows(const SampledOperator& op, const Grid& grid, const UnknownMap& unknowns,
                  std::size_t block, std::size_t global_block, const SampledField* extra_reaction,
                  TripletBuilder& a, TripletBuilder& g) {
  const int dim = grid.dim();
  const auto d = static_cast<std::size_t>(dim);
  if (op.a.size() != d * d || op.b.size() != d) {
    throw Error(ErrorCode::dim_mismatch, "operator shape does not match grid dimension");
  }
  for (const auto& f : op.a) check_field(f, grid, "diffusion");
  for (const auto& f : op.b) check_field(f, grid, "convection");
  check_field(op.c, grid, "reaction");
  const std::size_t n_int = unknowns.nodes.size();
  const std::size_t n_bnd = grid.boundary_count();
  const std::size_t offset = block * n_int;

  for (std::size_t q = 0; q < n_int; ++q) {
    const std::size_t node = unknowns.nodes[q];
    const std::size_t row = offset + q;
    const auto idx = grid.indices(node);
    auto neighbour = [&](int dx, int dy) { return grid.node_at(idx[0] + dx, idx[1] + dy); };
    auto put = [&](std::size_t nb, double value) {
      const auto loc = unknowns.local[nb];
      if (loc >= 0) {
        a.add(row, offset + static_cast<std::size_t>(loc), value);
      } else if (const auto b = grid.boundary_index(nb); b >= 0) {
        g.add(row, global_block * n_bnd + static_cast<std::size_t>(b), value);
      }
      // Masked-out interior neighbours are zero Dirichlet data: dropped.
    };

    double diag = 0.0;
    for (int axis = 0; axis < dim; ++axis) {
      const double h = grid.spacing(axis);
      const auto& aa = op.a[static_cast<std::size_t>(axis) * d + static_cast<std::size_t>(axis)].values;
      for (int step : {-1, 1}) {
        const std::size_t nb = axis == 0 ? neighbour(step, 0) : neighbour(0, step);
        const double face = 0.5 * (aa[node] + aa[nb]) / (h * h);
        diag += face;
        put(nb, -face);
      }
      const double bv = op.b[static_cast<std::size_t>(axis)].values[node];
      if (bv > 0.0) {
        diag += bv / h;
        put(axis == 0 ? neighbour(-1, 0) : neighbour(0, -1), -bv / h);
      } else if (bv < 0.0) {
        diag -= bv / h;
        put(axis == 0 ? neighbour(1, 0) : neighbour(0, 1), bv / h);
      }
    }
    if (dim == 2) {
      const auto& axy = op.a[1].values;  // -D_y(a^{xy} D_x u)
      const auto& ayx = op.a[2].values;  // -D_x(a^{yx} D_y u)
      const double c4 = 1.0 / (4.0 * grid.spacing(0) * grid.spacing(1));
      const double up = axy[neighbour(0, 1)] * c4;
      const double down = axy[neighbour(0, -1)] * c4;
      const double right = ayx[neighbour(1, 0)] * c4;
      const double left = ayx[neighbour(-1, 0)] * c4;
      if (up != 0.0 || down != 0.0 || right != 0.0 || left != 0.0) {
        put(neighbour(1, 1), -up - right);
        put(neighbour(-1, 1), up + left);
        put(neighbour(1, -1), down + right);
        put(neighbour(-1, -1), -down - left);
      }
    }
    diag += op.c.values[node];
    if (extra_reaction) diag += extra_reaction->values[node];
    a.add(row, row, diag);
  }
}

std::vector<std::size_t> resolve_species(const SampledSystem& sys, const SubsystemOptions& opts) {
  std::vector<std::size_t> ids = opts.species;
  if (ids.empty()) {
    ids.resize(sys.species());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  }
  std::vector<bool> seen(sys.species(), false);
  for (auto s : ids) {
    if (s >= sys.species() || seen[s]) throw Error(ErrorCode::validation, "invalid species selection");
    seen[s] = true;
  }
  return ids;
}

}  // namespace

ScalarAssembly assemble_scalar(const SampledOperator& op, const Grid& grid, const SubdomainMask* mask,
                               const SampledField* extra_reaction) {
  const UnknownMap unknowns = make_unknowns(grid, mask);
  if (extra_reaction) check_field(*extra_reaction, grid, "reaction");
  TripletBuilder a(unknowns.nodes.size(), unknowns.nodes.size());
  TripletBuilder g(unknowns.nodes.size(), grid.boundary_count());
  stencil_rows(op, grid, unknowns, 0, 0, extra_reaction, a, g);
  return {a.build(), g.build(), unknowns.nodes};
}

ScalarAssembly assemble_scalar(const ScalarOperatorSpec& op, const Grid& grid, const SubdomainMask* mask) {
  SystemSpec spec = SystemSpec::uniform(grid, 1);
  spec.ops[0] = op;
  const SampledSystem sys = sample_system(spec);
  return assemble_scalar(sys.ops[0], grid, mask);
}

AssembledSystem assemble_with_coupling(const SampledSystem& sys, const std::vector<SampledField>& m,
                                       const SubsystemOptions& opts) {
  const std::size_t n_all = sys.species();
  if (m.size() != n_all * n_all) throw Error(ErrorCode::dim_mismatch, "coupling must be N x N");
  for (const auto& f : m) check_field(f, sys.grid, "coupling");
  const auto ids = resolve_species(sys, opts);
  const UnknownMap unknowns = make_unknowns(sys.grid, opts.mask);
  const std::size_t n_int = unknowns.nodes.size();
  const std::size_t n_sp = ids.size();
  const std::size_t n_bnd = sys.grid.boundary_count();

  TripletBuilder a(n_sp * n_int, n_sp * n_int);
  TripletBuilder g(n_sp * n_int, n_sp * n_bnd);
  for (std::size_t bk = 0; bk < n_sp; ++bk) {
    const std::size_t k = ids[bk];
    stencil_rows(sys.ops[k], sys.grid, unknowns, bk, bk, &m[k * n_all + k], a, g);
    for (std::size_t bl = 0; bl < n_sp; ++bl) {
      if (bl == bk) continue;
      const auto& mkl = m[k * n_all + ids[bl]].values;
      for (std::size_t q = 0; q < n_int; ++q) {
        const double v = mkl[unknowns.nodes[q]];
        if (v != 0.0) a.add(bk * n_int + q, bl * n_int + q, v);
      }
    }
  }

  AssembledSystem out;
  out.A = a.build();
  out.G = g.build();
  out.species_ids = ids;
  out.nodes = unknowns.nodes;
  out.f_vec.resize(n_sp * n_int);
  out.g_vec.resize(n_sp * n_bnd);
  for (std::size_t bk = 0; bk < n_sp; ++bk) {
    const std::size_t k = ids[bk];
    check_field(sys.f[k], sys.grid, "rhs");
    check_field(sys.g[k], sys.grid, "boundary");
    for (std::size_t q = 0; q < n_int; ++q) out.f_vec[bk * n_int + q] = sys.f[k].values[unknowns.nodes[q]];
    for (std::size_t b = 0; b < n_bnd; ++b) {
      out.g_vec[bk * n_bnd + b] = sys.g[k].values[sys.grid.boundary_nodes()[b]];
    }
  }
  const ZMatrixCheck z = check_z_matrix(out.A, n_sp, n_int);
  out.z_matrix = z.is_z;
  out.offdiag_max = z.value;
  return out;
}

AssembledSystem assemble_system(const SampledSystem& sys, CouplingMode mode, const SubsystemOptions& opts) {
  if (mode == CouplingMode::full) return assemble_with_coupling(sys, sys.m, opts);
  return assemble_with_coupling(sys, split_coupling(sys.m).minus, opts);
}

AssembledSystem assemble_system(const SystemSpec& spec, CouplingMode mode) {
  return assemble_system(sample_system(spec), mode);
}

AssembledSystem assemble_system(const SystemSpec& spec, const std::vector<Expr>& custom_m) {
  const SampledSystem sys = sample_system(spec);
  if (custom_m.size() != sys.species() * sys.species()) {
    throw Error(ErrorCode::dim_mismatch, "custom coupling must be N x N");
  }
  std::vector<SampledField> m;
  for (const auto& e : custom_m) m.push_back(sample_field(e, spec.grid));
  return assemble_with_coupling(sys, m);
}

CouplingSplit split_coupling(const std::vector<SampledField>& m) {
  CouplingSplit out;
  for (const auto& f : m) {
    SampledField plus{f.grid_id, f.values};
    SampledField minus{f.grid_id, f.values};
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      plus.values[i] = std::max(f.values[i], 0.0);
      minus.values[i] = std::min(f.values[i], 0.0);
    }
    out.plus.push_back(std::move(plus));
    out.minus.push_back(std::move(minus));
  }
  return out;
}

CouplingSplit split_coupling(const std::vector<Expr>& m, const Grid& grid) {
  std::vector<SampledField> sampled;
  for (const auto& e : m) sampled.push_back(sample_field(e, grid));
  return split_coupling(sampled);
}

EllipticityBounds check_ellipticity(const SampledOperator& op, const Grid& grid) {
  const auto d = static_cast<std::size_t>(grid.dim());
  if (op.a.size() != d * d) throw Error(ErrorCode::dim_mismatch, "diffusion tensor shape mismatch");
  EllipticityBounds out;
  out.lambda_min = std::numeric_limits<double>::infinity();
  out.Lambda_max = -std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    double lmin;
    double lmax;
    if (d == 1) {
      lmin = lmax = op.a[0].values[node];
    } else {
      const double a11 = op.a[0].values[node];
      const double a12 = op.a[1].values[node];
      const double a21 = op.a[2].values[node];
      const double a22 = op.a[3].values[node];
      out.max_asymmetry = std::max(out.max_asymmetry, std::abs(a12 - a21));
      const double s = 0.5 * (a12 + a21);
      const double mean = 0.5 * (a11 + a22);
      const double r = std::hypot(0.5 * (a11 - a22), s);
      lmin = mean - r;
      lmax = mean + r;
    }
    if (lmin < out.lambda_min) {
      out.lambda_min = lmin;
      worst = node;
    }
    out.Lambda_max = std::max(out.Lambda_max, lmax);
  }
  if (!(out.lambda_min > 0.0)) {
    const auto p = grid.point(worst);
    std::string where = "x=" + std::to_string(p[0]);
    if (d == 2) where += ", y=" + std::to_string(p[1]);
    throw Error(ErrorCode::non_elliptic, "diffusion tensor is not positive definite at node " +
                                             std::to_string(worst) + " (" + where +
                                             "): smallest eigenvalue " + std::to_string(out.lambda_min));
  }
  return out;
}

EllipticityBounds check_ellipticity(const ScalarOperatorSpec& op, const Grid& grid) {
  SampledOperator s;
  for (const auto& e : op.a) s.a.push_back(sample_field(e, grid));
  return check_ellipticity(s, grid);
}

ZMatrixCheck check_z_matrix(const SparseMat& a, std::size_t blocks, std::size_t n_int) {
  ZMatrixCheck out;
  const double tol = kZeroTolFactor * a.norm_inf();
  bool any = false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      const std::size_t j = a.col_idx()[p];
      if (j == i) continue;
      const double v = a.vals()[p];
      if (!any || v > out.value) {
        out.value = v;
        out.row = i;
        out.col = j;
        any = true;
      }
    }
  }
  out.is_z = !any || out.value <= tol;
  if (n_int > 0 && blocks > 0) {
    out.row_species = out.row / n_int;
    out.col_species = out.col / n_int;
  }
  return out;
}

}  // namespace elcomp
