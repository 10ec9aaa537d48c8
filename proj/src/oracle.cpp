#include "elcomp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "elcomp/error.hpp"
#include "elcomp/parallel.hpp"

namespace elcomp {

namespace {

std::vector<double> unknown_signs(const std::optional<std::vector<int>>& gauge, std::size_t species,
                                  std::size_t per_species) {
  std::vector<double> d(species * per_species, 1.0);
  if (!gauge) return d;
  if (gauge->size() != species) throw Error(ErrorCode::dim_mismatch, "gauge length does not match species count");
  for (std::size_t k = 0; k < species; ++k) {
    for (std::size_t q = 0; q < per_species; ++q) d[k * per_species + q] = (*gauge)[k] < 0 ? -1.0 : 1.0;
  }
  return d;
}

// D_r M D_c for diagonal sign vectors.
SparseMat conjugate(const SparseMat& m, const std::vector<double>& dr, const std::vector<double>& dc) {
  std::vector<double> vals = m.vals();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t p = m.row_ptr()[i]; p < m.row_ptr()[i + 1]; ++p) vals[p] *= dr[i] * dc[m.col_idx()[p]];
  }
  return SparseMat(m.rows(), m.cols(), m.row_ptr(), m.col_idx(), std::move(vals));
}

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

OracleReport inverse_positivity(const AssembledSystem& asys, const std::optional<std::vector<int>>& gauge,
                                std::size_t max_dof, double tol_op) {
  const std::size_t dof = asys.dof();
  const std::size_t n_sp = asys.species();
  const std::size_t n_bnd = n_sp ? asys.G.cols() / n_sp : 0;
  const auto d = unknown_signs(gauge, n_sp, asys.n_int());
  const auto db = unknown_signs(gauge, n_sp, n_bnd);
  const SparseMat a = conjugate(asys.A, d, d);
  const SparseMat g = conjugate(asys.G, d, db);
  const DenseMatrix inv = dense_inverse(a, max_dof);

  OracleReport out;
  out.gauge = gauge;
  out.dof = dof;
  out.min_entry = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dof; ++i) {
    for (std::size_t j = 0; j < dof; ++j) {
      const double v = inv(i, j);
      out.scale = std::max(out.scale, std::abs(v));
      if (v < out.min_entry) {
        out.min_entry = v;
        out.witness_row = i;
        out.witness_col = j;
      }
    }
  }
  out.inverse_positive = out.min_entry >= -tol_op * out.scale;

  // -inv * g, row by row.
  const SparseMat gt = transpose(g);
  double bscale = 0.0;
  double bmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dof; ++i) {
    for (std::size_t c = 0; c < gt.rows(); ++c) {
      double s = 0.0;
      for (std::size_t p = gt.row_ptr()[c]; p < gt.row_ptr()[c + 1]; ++p) s -= inv(i, gt.col_idx()[p]) * gt.vals()[p];
      bscale = std::max(bscale, std::abs(s));
      bmin = std::min(bmin, s);
    }
  }
  if (gt.rows() == 0) bmin = 0.0;
  out.min_boundary_entry = bmin;
  out.boundary_monotone = bmin >= -tol_op * bscale;
  return out;
}

OracleReport random_probe(const AssembledSystem& asys, std::size_t trials, std::uint64_t seed,
                          const std::optional<std::vector<int>>& gauge, double tol_op) {
  const std::size_t dof = asys.dof();
  OracleReport out;
  out.sampled = true;
  out.trials = trials;
  out.gauge = gauge;
  out.dof = dof;
  if (trials == 0) return out;
  const auto d = unknown_signs(gauge, asys.species(), asys.n_int());
  const LuFactor lu(conjugate(asys.A, d, d));

  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> rhs(trials, std::vector<double>(dof, 0.0));
  const std::size_t hits = std::max<std::size_t>(1, dof / 20);
  for (auto& f : rhs) {
    for (std::size_t h = 0; h < hits; ++h) f[rng() % dof] = unit_double(rng) + 0x1.0p-20;
  }
  std::vector<double> mins(trials), scales(trials);
  std::vector<std::size_t> rows(trials);
  parallel_for(trials, [&](std::size_t t) {
    const auto u = lu.solve(rhs[t]);
    mins[t] = std::numeric_limits<double>::infinity();
    scales[t] = 0.0;
    for (std::size_t i = 0; i < dof; ++i) {
      scales[t] = std::max(scales[t], std::abs(u[i]));
      if (u[i] < mins[t]) {
        mins[t] = u[i];
        rows[t] = i;
      }
    }
  });
  out.min_entry = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    const double rel = scales[t] > 0 ? mins[t] / scales[t] : 0.0;
    if (rel < out.min_entry) {
      out.min_entry = rel;
      out.witness_row = rows[t];
      out.witness_col = t;
      out.scale = 1.0;
    }
  }
  if (out.min_entry < -tol_op) out.inverse_positive = false;
  return out;
}

SubsolutionCheck verify_subsolution(const AssembledSystem& asys, std::span<const double> u,
                                    std::span<const double> g) {
  if (u.size() != asys.dof() || g.size() != asys.G.cols()) {
    throw Error(ErrorCode::dim_mismatch, "sub-solution check: field sizes do not match the system");
  }
  SubsolutionCheck out;
  out.residual = matvec(asys.A, u);
  const auto gg = matvec(asys.G, g);
  double fnorm = 0.0;
  for (double v : asys.f_vec) fnorm = std::max(fnorm, std::abs(v));
  out.max_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.residual.size(); ++i) {
    out.residual[i] += gg[i] - asys.f_vec[i];
    out.max_residual = std::max(out.max_residual, out.residual[i]);
  }
  out.is_subsolution = out.max_residual <= kSubsolutionTol * (1.0 + fnorm);
  return out;
}

std::vector<double> solve_system(const AssembledSystem& asys) {
  auto rhs = matvec(asys.G, asys.g_vec);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = asys.f_vec[i] - rhs[i];
  return lu_solve(asys.A, rhs);
}

}  // namespace elcomp
