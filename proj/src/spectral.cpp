#include "elcomp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "elcomp/error.hpp"
#include "elcomp/graph.hpp"
#include "elcomp/parallel.hpp"

namespace elcomp {

EigenPair principal_eigenpair(const SparseMat& a, const EigenOptions& opts) {
  if (a.rows() != a.cols() || a.rows() == 0) throw Error(ErrorCode::dim_mismatch, "eigenproblem needs a square matrix");
  const std::size_t n = a.rows();
  const ZMatrixCheck z = check_z_matrix(a, 1, n);
  if (!z.is_z) {
    throw Error(ErrorCode::not_z_matrix, "positive off-diagonal entry " + std::to_string(z.value) + " at (" +
                                             std::to_string(z.row) + ", " + std::to_string(z.col) + ")");
  }
  const double zero_tol = kZeroTolFactor * a.norm_inf();
  if (!strongly_connected(digraph_of(a, zero_tol))) {
    throw Error(ErrorCode::not_irreducible, "matrix graph is not strongly connected");
  }

  // Gershgorin right endpoint; the margin keeps the diagonal of B positive.
  double upper = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      const std::size_t j = a.col_idx()[p];
      row += j == i ? a.vals()[p] : std::abs(a.vals()[p]);
    }
    upper = std::max(upper, row);
  }
  const double s = upper + 0.01 * std::max(1.0, std::abs(upper));

  TripletBuilder tb(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    tb.add(i, i, s);
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      const std::size_t j = a.col_idx()[p];
      if (j == i) {
        tb.add(i, i, -a.vals()[p]);
      } else {
        tb.add(i, j, std::max(0.0, -a.vals()[p]));
      }
    }
  }
  const SparseMat b = tb.build();
  PowerIterationOptions po;
  po.tol = opts.tol_eig;
  po.max_iter = opts.max_iter;
  po.shift = s;
  const auto right = power_iteration(b, po);
  const auto left = power_iteration(transpose(b), po);

  EigenPair out;
  out.shift = s;
  out.lambda = s - right.rho;
  out.lambda_left = s - left.rho;
  out.cw = {s - right.cw.hi, s - right.cw.lo};
  out.iterations = right.iterations;
  out.right = right.vector;
  out.left = left.vector;
  const auto av = matvec(a, out.right);
  for (std::size_t i = 0; i < n; ++i) {
    out.residual = std::max(out.residual, std::abs(av[i] - out.lambda * out.right[i]));
  }
  return out;
}

EigenPair cooperative_eigen(const SampledSystem& sys, const EigenOptions& opts, const SubdomainMask* mask) {
  SubsystemOptions so;
  so.mask = mask;
  return principal_eigenpair(assemble_system(sys, CouplingMode::cooperative_only, so).A, opts);
}

EigenPair cooperative_eigen(const SystemSpec& spec, const EigenOptions& opts) {
  return cooperative_eigen(sample_system(spec), opts);
}

EigenPair component_eigen(const SampledSystem& sys, std::size_t j, const EigenOptions& opts) {
  if (j >= sys.species()) throw Error(ErrorCode::validation, "component index out of range");
  return block_eigen(sys, {j}, opts);
}

EigenPair component_eigen(const SystemSpec& spec, std::size_t j, const EigenOptions& opts) {
  return component_eigen(sample_system(spec), j, opts);
}

EigenPair block_eigen(const SampledSystem& sys, const std::vector<std::size_t>& species, const EigenOptions& opts) {
  SubsystemOptions so;
  so.species = species;
  return principal_eigenpair(assemble_system(sys, CouplingMode::cooperative_only, so).A, opts);
}

SubdomainScan subdomain_scan(const SampledSystem& sys, int depth, const EigenOptions& opts) {
  if (depth < 0) throw Error(ErrorCode::validation, "scan depth must be nonnegative");
  const Grid& grid = sys.grid;
  const int dim = grid.dim();

  std::vector<ScanEntry> boxes;
  boxes.push_back({0, {grid.lo(0), dim == 2 ? grid.lo(1) : 0.0}, {grid.hi(0), dim == 2 ? grid.hi(1) : 0.0}, 0, 0.0});
  boxes.back().lo.resize(static_cast<std::size_t>(dim));
  boxes.back().hi.resize(static_cast<std::size_t>(dim));
  for (int level = 1; level <= depth; ++level) {
    const double parts = std::ldexp(1.0, level + 1);
    const int starts = (1 << (level + 1)) - 1;  // offsets 0 .. parts - 2 in units of L/parts
    std::vector<std::vector<std::pair<double, double>>> axis_ranges(static_cast<std::size_t>(dim));
    for (int axis = 0; axis < dim; ++axis) {
      const double len = grid.hi(axis) - grid.lo(axis);
      for (int k = 0; k < starts; ++k) {
        axis_ranges[static_cast<std::size_t>(axis)].push_back(
            {grid.lo(axis) + len * k / parts, grid.lo(axis) + len * (k + 2) / parts});
      }
    }
    if (dim == 1) {
      for (const auto& r : axis_ranges[0]) boxes.push_back({level, {r.first}, {r.second}, 0, 0.0});
    } else {
      for (const auto& ry : axis_ranges[1]) {
        for (const auto& rx : axis_ranges[0]) {
          boxes.push_back({level, {rx.first, ry.first}, {rx.second, ry.second}, 0, 0.0});
        }
      }
    }
  }

  std::vector<SubdomainMask> masks(boxes.size());
  std::vector<bool> usable(boxes.size(), false);
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    try {
      masks[b] = b == 0 ? full_mask(grid) : sub_rectangle_mask(grid, boxes[b].lo, boxes[b].hi);
      usable[b] = true;
      boxes[b].nodes = masks[b].count();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::empty_subdomain) throw;
    }
  }
  parallel_for(boxes.size(), [&](std::size_t b) {
    if (usable[b]) boxes[b].lambda = cooperative_eigen(sys, opts, &masks[b]).lambda;
  });

  SubdomainScan out;
  out.full_lambda = boxes[0].lambda;
  out.min_lambda = out.full_lambda;
  const double tol = opts.tol_eig * (1.0 + std::abs(out.full_lambda));
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    if (!usable[b]) continue;
    out.min_lambda = std::min(out.min_lambda, boxes[b].lambda);
    if (boxes[b].lambda < out.full_lambda - tol) out.monotone = false;
    out.entries.push_back(boxes[b]);
  }
  return out;
}

}  // namespace elcomp
