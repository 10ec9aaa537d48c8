#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "elcomp/expr.hpp"
#include "elcomp/mesh.hpp"
#include "elcomp/system.hpp"

namespace elcomp::test {

inline constexpr double kPi = 3.14159265358979323846;

inline Grid line(double lo, double hi, int n) { return build_grid(1, {lo}, {hi}, {n}); }
inline Grid square(double lo, double hi, int n) { return build_grid(2, {lo, lo}, {hi, hi}, {n, n}); }

inline Expr ex(const std::string& s) { return parse_expr(s); }

/// N copies of -Laplacian with the given coupling entries (row-major strings).
inline SystemSpec coupled(const Grid& grid, std::size_t n, const std::vector<std::string>& m) {
  SystemSpec spec = SystemSpec::uniform(grid, n);
  for (std::size_t i = 0; i < m.size(); ++i) spec.m[i] = parse_expr(m[i]);
  return spec;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

/// Closed-form principal eigenvalue of the 3-point Dirichlet stencil on an
/// interval of length L with n cells: 4 h^-2 sin^2(pi h / (2 L)).
inline double discrete_dirichlet(double length, int n) {
  const double h = length / n;
  const double s = std::sin(kPi * h / (2.0 * length));
  return 4.0 / (h * h) * s * s;
}

}  // namespace elcomp::test
