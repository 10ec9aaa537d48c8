#include "elcomp/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "elcomp/error.hpp"
#include "elcomp/parallel.hpp"

namespace elcomp {

SparseMat::SparseMat(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> vals)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      vals_(std::move(vals)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 || row_ptr_.back() != vals_.size() ||
      col_idx_.size() != vals_.size()) {
    throw Error(ErrorCode::dim_mismatch, "inconsistent CSR arrays");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) throw Error(ErrorCode::validation, "row_ptr not monotone");
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] >= cols_) throw Error(ErrorCode::validation, "column index out of range");
      if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1]) {
        throw Error(ErrorCode::validation, "column indices must be strictly increasing");
      }
    }
  }
}

SparseMat SparseMat::identity(std::size_t n) {
  std::vector<std::size_t> ptr(n + 1);
  std::vector<std::size_t> idx(n);
  std::iota(ptr.begin(), ptr.end(), std::size_t{0});
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return SparseMat(n, n, std::move(ptr), std::move(idx), std::vector<double>(n, 1.0));
}

double SparseMat::at(std::size_t i, std::size_t j) const {
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return vals_[static_cast<std::size_t>(it - col_idx_.begin())];
}

double SparseMat::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += std::abs(vals_[p]);
    best = std::max(best, s);
  }
  return best;
}

void TripletBuilder::add(std::size_t row, std::size_t col, double value) {
  if (row >= rows_ || col >= cols_) throw Error(ErrorCode::dim_mismatch, "triplet out of range");
  entries_.push_back({row, col, value});
}

SparseMat TripletBuilder::build() const {
  std::vector<Entry> sorted = entries_;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> ptr(rows_ + 1, 0);
  std::vector<std::size_t> idx;
  std::vector<double> vals;
  idx.reserve(sorted.size());
  vals.reserve(sorted.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows_; ++i) {
    while (k < sorted.size() && sorted[k].row == i) {
      const std::size_t col = sorted[k].col;
      double sum = 0.0;
      while (k < sorted.size() && sorted[k].row == i && sorted[k].col == col) sum += sorted[k++].value;
      if (sum != 0.0) {
        idx.push_back(col);
        vals.push_back(sum);
      }
    }
    ptr[i + 1] = vals.size();
  }
  return SparseMat(rows_, cols_, std::move(ptr), std::move(idx), std::move(vals));
}

std::vector<double> matvec(const SparseMat& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    throw Error(ErrorCode::dim_mismatch, "matvec: vector length " + std::to_string(x.size()) +
                                             " does not match " + std::to_string(a.cols()) + " columns");
  }
  std::vector<double> y(a.rows(), 0.0);
  const auto& ptr = a.row_ptr();
  const auto& idx = a.col_idx();
  const auto& val = a.vals();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t p = ptr[i]; p < ptr[i + 1]; ++p) s += val[p] * x[idx[p]];
    y[i] = s;
  }
  return y;
}

SparseMat transpose(const SparseMat& a) {
  std::vector<std::size_t> count(a.cols() + 1, 0);
  for (auto j : a.col_idx()) ++count[j + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<std::size_t> idx(a.nnz());
  std::vector<double> vals(a.nnz());
  std::vector<std::size_t> next(count.begin(), count.end() - 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      const std::size_t q = next[a.col_idx()[p]]++;
      idx[q] = i;
      vals[q] = a.vals()[p];
    }
  }
  return SparseMat(a.cols(), a.rows(), std::move(count), std::move(idx), std::move(vals));
}

std::vector<double> lu_solve(const SparseMat& a, std::span<const double> b) {
  const LuFactor lu(a);
  return lu.solve(b);
}

DenseMatrix dense_inverse(const SparseMat& a, std::size_t max_dof) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::dim_mismatch, "dense_inverse needs a square matrix");
  if (a.rows() > max_dof) {
    throw Error(ErrorCode::too_large, "dense inverse of " + std::to_string(a.rows()) +
                                          " unknowns exceeds the limit of " + std::to_string(max_dof));
  }
  const std::size_t n = a.rows();
  const LuFactor lu(a);
  DenseMatrix inv{n, n, std::vector<double>(n * n, 0.0)};
  parallel_for(n, [&](std::size_t j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    const auto col = lu.solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  });
  return inv;
}

PowerIterationResult power_iteration(const SparseMat& b, const PowerIterationOptions& opts) {
  if (b.rows() != b.cols()) throw Error(ErrorCode::dim_mismatch, "power iteration needs a square matrix");
  if (b.rows() == 0) throw Error(ErrorCode::dim_mismatch, "power iteration on an empty matrix");
  for (double v : b.vals()) {
    if (v < 0.0) throw Error(ErrorCode::not_nonnegative, "power iteration input has a negative entry");
  }
  const std::size_t n = b.rows();
  PowerIterationResult out;
  std::vector<double> v(n, 1.0);
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    const auto w = matvec(b, v);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double num = 0.0;
    double den = 0.0;
    double wmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = w[i] / v[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      num += v[i] * w[i];
      den += v[i] * v[i];
      wmax = std::max(wmax, w[i]);
    }
    // Rayleigh quotient: a v_i^2-weighted mean of the ratios, so inside [lo, hi].
    const double rho = std::clamp(num / den, lo, hi);
    if (opts.record_history) out.history.push_back({lo, hi});
    const double ref = opts.shift ? std::abs(*opts.shift - rho) : std::abs(rho);
    if (hi - lo <= opts.tol * (1.0 + ref)) {
      out.rho = rho;
      out.vector = std::move(v);
      out.cw = {lo, hi};
      out.iterations = it;
      return out;
    }
    if (!(lo > 0.0) || !(wmax > 0.0)) {
      throw Error(ErrorCode::no_convergence,
                  "power iteration lost positivity (zero row reached); the matrix is reducible");
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wmax;
  }
  throw Error(ErrorCode::no_convergence,
              "power iteration did not converge in " + std::to_string(opts.max_iter) + " iterations");
}

}  // namespace elcomp
