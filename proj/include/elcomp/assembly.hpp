#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "elcomp/sparse.hpp"
#include "elcomp/system.hpp"

namespace elcomp {

enum class CouplingMode { full, cooperative_only };

/// Discrete L + M over the interior unknowns of the selected species.
///
/// Unknowns are species-major: all nodes of the first selected species, then
/// the next. `g_map` maps boundary values (species-major, boundary order of the
/// grid) into the interior equations, so the discrete problem reads
///   A u + G g = f.
struct AssembledSystem {
  SparseMat A;
  SparseMat G;
  std::vector<double> f_vec;
  std::vector<double> g_vec;
  bool z_matrix = false;
  double offdiag_max = 0.0;

  std::vector<std::size_t> species_ids;
  /// Grid node of each unknown within one species block.
  std::vector<std::size_t> nodes;

  std::size_t species() const { return species_ids.size(); }
  std::size_t n_int() const { return nodes.size(); }
  std::size_t dof() const { return A.rows(); }
};

struct ScalarAssembly {
  SparseMat A;
  SparseMat G;
  std::vector<std::size_t> nodes;
};

/// Conservative flux form for the diffusion term with arithmetic-mean face
/// coefficients, centered cross derivatives, first-order upwind convection and
/// the reaction on the diagonal. With a mask, only masked nodes are unknowns
/// and the remaining interior nodes act as zero Dirichlet data.
ScalarAssembly assemble_scalar(const SampledOperator& op, const Grid& grid,
                               const SubdomainMask* mask = nullptr,
                               const SampledField* extra_reaction = nullptr);
ScalarAssembly assemble_scalar(const ScalarOperatorSpec& op, const Grid& grid,
                               const SubdomainMask* mask = nullptr);

struct SubsystemOptions {
  /// Species to include, in order; empty means all.
  std::vector<std::size_t> species;
  const SubdomainMask* mask = nullptr;
};

/// Assembles with an explicit N x N coupling (N = species of `sys`); only the
/// entries among the selected species are used.
AssembledSystem assemble_with_coupling(const SampledSystem& sys, const std::vector<SampledField>& m,
                                       const SubsystemOptions& opts = {});
AssembledSystem assemble_system(const SampledSystem& sys, CouplingMode mode,
                                const SubsystemOptions& opts = {});
AssembledSystem assemble_system(const SystemSpec& spec, CouplingMode mode);
AssembledSystem assemble_system(const SystemSpec& spec, const std::vector<Expr>& custom_m);

/// Pointwise M+ = max(m, 0) and M- = min(m, 0), so M+ + M- = m exactly.
struct CouplingSplit {
  std::vector<SampledField> plus;
  std::vector<SampledField> minus;
};

CouplingSplit split_coupling(const std::vector<SampledField>& m);
CouplingSplit split_coupling(const std::vector<Expr>& m, const Grid& grid);

struct EllipticityBounds {
  double lambda_min = 0.0;
  double Lambda_max = 0.0;
  /// Largest |a^{ij} - a^{ji}| seen; callers warn above 1e-10.
  double max_asymmetry = 0.0;
};

constexpr double kAsymmetryWarn = 1e-10;

/// Extreme eigenvalues of the symmetric part of a(x) over all grid nodes.
/// Throws Error(non_elliptic) when lambda_min <= 0.
EllipticityBounds check_ellipticity(const SampledOperator& op, const Grid& grid);
EllipticityBounds check_ellipticity(const ScalarOperatorSpec& op, const Grid& grid);

struct ZMatrixCheck {
  bool is_z = true;
  /// Largest off-diagonal entry and where it sits (row/col are global
  /// unknown indices; species/node split them by block).
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
  std::size_t row_species = 0;
  std::size_t col_species = 0;
};

/// Z-matrix iff every off-diagonal entry is <= 1e-14 * ||A||_inf.
ZMatrixCheck check_z_matrix(const SparseMat& a, std::size_t blocks, std::size_t n_int);

constexpr double kZeroTolFactor = 1e-14;

}  // namespace elcomp
