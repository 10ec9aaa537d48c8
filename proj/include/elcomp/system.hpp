#pragma once

#include <cstddef>
#include <vector>

#include "elcomp/expr.hpp"
#include "elcomp/mesh.hpp"

namespace elcomp {

/// One scalar operator  -sum D_j(a^{ij} D_i u) + sum b^i D_i u + c u.
/// `a` is row-major dim x dim with a[i*dim + j] = a^{ij}.
struct ScalarOperatorSpec {
  std::vector<Expr> a;
  std::vector<Expr> b;
  Expr c;

  /// -Laplacian: a = I, b = 0, c = 0.
  static ScalarOperatorSpec laplacian(int dim);
};

/// Weakly coupled linear system L u + M u = f in the grid's rectangle with
/// Dirichlet data g. `m` is row-major N x N, m[k*N + l] = m_kl.
struct SystemSpec {
  Grid grid;
  std::vector<ScalarOperatorSpec> ops;
  std::vector<Expr> m;
  std::vector<Expr> f;
  std::vector<Expr> g;

  std::size_t species() const { return ops.size(); }
  const Expr& coupling(std::size_t k, std::size_t l) const { return m[k * species() + l]; }

  /// N copies of the -Laplacian with zero coupling, data and boundary values.
  static SystemSpec uniform(const Grid& grid, std::size_t species);
};

/// Throws Error(validation) on shape mismatches or variables the grid lacks.
void validate(const SystemSpec& spec);

struct SampledOperator {
  std::vector<SampledField> a;
  std::vector<SampledField> b;
  SampledField c;
};

/// Every coefficient of a system sampled on all grid nodes. This is the form
/// assembly and certification work with; linearized quasi-linear systems are
/// produced directly in this form.
struct SampledSystem {
  Grid grid;
  std::vector<SampledOperator> ops;
  std::vector<SampledField> m;
  std::vector<SampledField> f;
  std::vector<SampledField> g;

  std::size_t species() const { return ops.size(); }
  const SampledField& coupling(std::size_t k, std::size_t l) const { return m[k * species() + l]; }
};

SampledSystem sample_system(const SystemSpec& spec);

/// Species i of the result is species perm[i] of the input.
SampledSystem permute_species(const SampledSystem& sys, const std::vector<std::size_t>& perm);
SystemSpec permute_species(const SystemSpec& spec, const std::vector<std::size_t>& perm);

}  // namespace elcomp
