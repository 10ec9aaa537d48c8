#pragma once

#include <cstddef>
#include <vector>

#include "elcomp/assembly.hpp"
#include "elcomp/sparse.hpp"
#include "elcomp/system.hpp"

namespace elcomp {

struct EigenOptions {
  double tol_eig = 1e-9;
  std::size_t max_iter = 200000;
};

/// Principal eigenpair of a Z-matrix: the eigenvalue of smallest real part
/// with positive right and left eigenvectors (both max-normalized).
struct EigenPair {
  double lambda = 0.0;
  std::vector<double> right;
  std::vector<double> left;
  Interval cw;
  std::size_t iterations = 0;
  double residual = 0.0;
  double shift = 0.0;
  /// Eigenvalue obtained from the transposed iteration.
  double lambda_left = 0.0;
};

/// Shift s above the Gershgorin bound so that B = sI - A is nonnegative with
/// positive diagonal; the Perron root of B gives lambda = s - rho(B).
/// Throws NotZMatrix or NotIrreducible before iterating.
EigenPair principal_eigenpair(const SparseMat& a, const EigenOptions& opts = {});

/// Discrete L + M^- on the whole grid or on a mask.
EigenPair cooperative_eigen(const SampledSystem& sys, const EigenOptions& opts = {},
                            const SubdomainMask* mask = nullptr);
EigenPair cooperative_eigen(const SystemSpec& spec, const EigenOptions& opts = {});

/// Discrete L_j + m_jj^- (j is zero-based).
EigenPair component_eigen(const SampledSystem& sys, std::size_t j, const EigenOptions& opts = {});
EigenPair component_eigen(const SystemSpec& spec, std::size_t j, const EigenOptions& opts = {});

/// Cooperative part restricted to a set of species.
EigenPair block_eigen(const SampledSystem& sys, const std::vector<std::size_t>& species,
                      const EigenOptions& opts = {});

struct ScanEntry {
  int level = 0;
  std::vector<double> lo;
  std::vector<double> hi;
  std::size_t nodes = 0;
  double lambda = 0.0;
};

struct SubdomainScan {
  std::vector<ScanEntry> entries;
  double full_lambda = 0.0;
  double min_lambda = 0.0;
  /// Every subdomain eigenvalue is >= the full-domain one up to tolerance.
  bool monotone = true;
};

/// Eigenvalues of the cooperative part on dyadic sub-rectangles. Level l uses
/// boxes of side L/2^l whose corners sit on multiples of L/2^(l+1); level 0 is
/// the whole domain. Boxes with no interior node are skipped.
SubdomainScan subdomain_scan(const SampledSystem& sys, int depth, const EigenOptions& opts = {});

}  // namespace elcomp
