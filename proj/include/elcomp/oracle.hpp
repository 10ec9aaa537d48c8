#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "elcomp/assembly.hpp"

namespace elcomp {

constexpr double kOracleTol = 1e-9;

/// Discrete comparison principle: A nonsingular, A^{-1} >= 0 and
/// -A^{-1} G >= 0, optionally in the order given by a species sign gauge.
struct OracleReport {
  /// Undetermined for sampled reports that found no violation.
  std::optional<bool> inverse_positive;
  double min_entry = 0.0;
  double scale = 0.0;
  std::size_t witness_row = 0;
  std::size_t witness_col = 0;
  std::optional<bool> boundary_monotone;
  double min_boundary_entry = 0.0;
  std::optional<std::vector<int>> gauge;
  std::size_t dof = 0;
  bool sampled = false;
  std::size_t trials = 0;
};

/// Dense inversion of D A D with D = diag(sigma (x) 1). Throws TooLarge above
/// max_dof and SingularMatrix.
OracleReport inverse_positivity(const AssembledSystem& asys, const std::optional<std::vector<int>>& gauge = {},
                                std::size_t max_dof = kDefaultOracleMaxDof, double tol_op = kOracleTol);

/// Solves A u = f for `trials` random nonnegative sparse f. A negative entry
/// beyond tolerance refutes inverse positivity; otherwise the verdict stays
/// undetermined.
OracleReport random_probe(const AssembledSystem& asys, std::size_t trials, std::uint64_t seed,
                          const std::optional<std::vector<int>>& gauge = {}, double tol_op = kOracleTol);

struct SubsolutionCheck {
  bool is_subsolution = false;
  double max_residual = 0.0;
  std::vector<double> residual;
};

/// r = A u + G g - f; sub-solution iff max r <= 1e-8 (1 + ||f||_inf).
/// `u` holds the interior unknowns, `g` the boundary values (both species-major).
SubsolutionCheck verify_subsolution(const AssembledSystem& asys, std::span<const double> u,
                                    std::span<const double> g);

constexpr double kSubsolutionTol = 1e-8;

/// The discrete solution of A u = f - G g.
std::vector<double> solve_system(const AssembledSystem& asys);

}  // namespace elcomp
