#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace elcomp {

/// Compressed sparse row matrix. Column indices are strictly increasing within
/// each row; there are no duplicate entries.
class SparseMat {
 public:
  SparseMat() = default;
  SparseMat(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx, std::vector<double> vals);

  static SparseMat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return vals_.size(); }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& vals() const { return vals_; }

  /// Entry (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  /// Maximum absolute row sum.
  double norm_inf() const;

  friend bool operator==(const SparseMat& a, const SparseMat& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> vals_;
};

/// Collects (row, col, value) entries; duplicates are summed and entries that
/// sum to exactly zero are dropped on build.
class TripletBuilder {
 public:
  TripletBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  void add(std::size_t row, std::size_t col, double value);
  SparseMat build() const;

 private:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Entry> entries_;
};

std::vector<double> matvec(const SparseMat& a, std::span<const double> x);
SparseMat transpose(const SparseMat& a);

/// Row-major dense matrix, used for small inverses.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
};

/// Sparse LU factorization P*A = L*U with partial pivoting by magnitude
/// (left-looking, column by column). Immutable once built; concurrent solves
/// against one factor are safe.
class LuFactor {
 public:
  explicit LuFactor(const SparseMat& a);

  std::size_t size() const { return n_; }
  std::vector<double> solve(std::span<const double> b) const;

  std::size_t fill() const { return l_vals_.size() + u_vals_.size(); }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> l_ptr_, l_idx_;
  std::vector<double> l_vals_;
  std::vector<std::size_t> u_ptr_, u_idx_;
  std::vector<double> u_vals_;
  std::vector<std::size_t> pinv_;
};

constexpr double kLinearSolveTol = 1e-10;
constexpr std::size_t kDefaultOracleMaxDof = 2500;

std::vector<double> lu_solve(const SparseMat& a, std::span<const double> b);

/// Columns of A^{-1} via LU solves against unit vectors.
DenseMatrix dense_inverse(const SparseMat& a, std::size_t max_dof = kDefaultOracleMaxDof);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

struct PowerIterationOptions {
  double tol = 1e-9;
  std::size_t max_iter = 200000;
  /// When set, convergence is measured against |shift - rho| instead of rho;
  /// used when B = shift*I - A and the eigenvalue of interest is of A.
  std::optional<double> shift;
  /// Record the Collatz-Wielandt interval of every iterate.
  bool record_history = false;
};

struct PowerIterationResult {
  double rho = 0.0;
  std::vector<double> vector;
  Interval cw;
  std::size_t iterations = 0;
  std::vector<Interval> history;
};

/// Perron root of a nonnegative (irreducible, caller-checked) matrix by power
/// iteration from the all-ones vector. The returned vector is positive with
/// max-norm 1 and `cw` is its Collatz-Wielandt enclosure of rho.
PowerIterationResult power_iteration(const SparseMat& b, const PowerIterationOptions& opts = {});

}  // namespace elcomp
