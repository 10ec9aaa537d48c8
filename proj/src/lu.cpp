// Left-looking sparse LU with partial pivoting (Gilbert-Peierls). Each column
// k of A is solved against the columns of L computed so far; the nonzero
// pattern of that sparse triangular solve is found by a depth-first search
// over the graph of L, which keeps the work proportional to the flops.

#include <cmath>
#include <string>

#include "elcomp/error.hpp"
#include "elcomp/sparse.hpp"

namespace elcomp {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Nonzero pattern of L \ A(:,k) in topological order, written to
// xi[top..n). L's row indices are still in original numbering here.
std::size_t reach(const std::vector<std::size_t>& l_ptr, const std::vector<std::size_t>& l_idx,
                  const std::vector<std::size_t>& a_ptr, const std::vector<std::size_t>& a_idx,
                  std::size_t k, const std::vector<std::size_t>& pinv, std::vector<std::size_t>& xi,
                  std::vector<std::size_t>& mark, std::size_t stamp, std::vector<std::size_t>& stack,
                  std::vector<std::size_t>& child) {
  const std::size_t n = pinv.size();
  std::size_t top = n;
  for (std::size_t p = a_ptr[k]; p < a_ptr[k + 1]; ++p) {
    const std::size_t start = a_idx[p];
    if (mark[start] == stamp) continue;
    std::size_t head = 0;
    stack[0] = start;
    while (true) {
      const std::size_t j = stack[head];
      const std::size_t col = pinv[j];
      if (mark[j] != stamp) {
        mark[j] = stamp;
        // Skip the unit diagonal, stored first in each L column.
        child[head] = col == kNone ? 0 : l_ptr[col] + 1;
      }
      bool descended = false;
      if (col != kNone) {
        const std::size_t end = l_ptr[col + 1];
        for (std::size_t q = child[head]; q < end; ++q) {
          const std::size_t i = l_idx[q];
          if (mark[i] == stamp) continue;
          child[head] = q + 1;
          stack[++head] = i;
          descended = true;
          break;
        }
      }
      if (!descended) {
        xi[--top] = j;
        if (head == 0) break;
        --head;
      }
    }
  }
  return top;
}

}  // namespace

LuFactor::LuFactor(const SparseMat& a) : n_(a.rows()) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::dim_mismatch, "LU needs a square matrix");
  const std::size_t n = n_;
  // Column access to A is the row access of A^T.
  const SparseMat at = transpose(a);
  const auto& a_ptr = at.row_ptr();
  const auto& a_idx = at.col_idx();
  const auto& a_val = at.vals();
  const double pivot_floor = 1e-14 * a.norm_inf();

  pinv_.assign(n, kNone);
  l_ptr_.assign(n + 1, 0);
  u_ptr_.assign(n + 1, 0);
  l_idx_.reserve(4 * a.nnz() + n);
  l_vals_.reserve(4 * a.nnz() + n);
  u_idx_.reserve(4 * a.nnz() + n);
  u_vals_.reserve(4 * a.nnz() + n);

  std::vector<double> x(n, 0.0);
  std::vector<std::size_t> xi(n), mark(n, kNone), stack(n), child(n);

  for (std::size_t k = 0; k < n; ++k) {
    l_ptr_[k] = l_vals_.size();
    u_ptr_[k] = u_vals_.size();

    const std::size_t top = reach(l_ptr_, l_idx_, a_ptr, a_idx, k, pinv_, xi, mark, k, stack, child);
    for (std::size_t p = top; p < n; ++p) x[xi[p]] = 0.0;
    for (std::size_t p = a_ptr[k]; p < a_ptr[k + 1]; ++p) x[a_idx[p]] = a_val[p];
    for (std::size_t p = top; p < n; ++p) {
      const std::size_t j = xi[p];
      const std::size_t col = pinv_[j];
      if (col == kNone) continue;
      const double xj = x[j];
      for (std::size_t q = l_ptr_[col] + 1; q < l_ptr_[col + 1]; ++q) x[l_idx_[q]] -= l_vals_[q] * xj;
    }

    std::size_t ipiv = kNone;
    double best = -1.0;
    for (std::size_t p = top; p < n; ++p) {
      const std::size_t i = xi[p];
      if (pinv_[i] == kNone) {
        const double t = std::abs(x[i]);
        if (t > best) {
          best = t;
          ipiv = i;
        }
      } else {
        u_idx_.push_back(pinv_[i]);
        u_vals_.push_back(x[i]);
      }
    }
    // Prefer the diagonal on ties so M-matrices factor without row swaps.
    if (pinv_[k] == kNone && std::abs(x[k]) >= best) ipiv = k;
    if (ipiv == kNone || !(best > pivot_floor)) {
      throw Error(ErrorCode::singular_matrix,
                  "matrix is singular to working precision (pivot " + std::to_string(best < 0 ? 0.0 : best) +
                      " in column " + std::to_string(k) + ")");
    }
    const double pivot = x[ipiv];
    u_idx_.push_back(k);
    u_vals_.push_back(pivot);
    pinv_[ipiv] = k;
    l_idx_.push_back(ipiv);
    l_vals_.push_back(1.0);
    for (std::size_t p = top; p < n; ++p) {
      const std::size_t i = xi[p];
      if (pinv_[i] == kNone) {
        l_idx_.push_back(i);
        l_vals_.push_back(x[i] / pivot);
      }
      x[i] = 0.0;
    }
  }
  l_ptr_[n] = l_vals_.size();
  u_ptr_[n] = u_vals_.size();
  for (auto& i : l_idx_) i = pinv_[i];
}

std::vector<double> LuFactor::solve(std::span<const double> b) const {
  if (b.size() != n_) throw Error(ErrorCode::dim_mismatch, "LU solve: right-hand side length mismatch");
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[pinv_[i]] = b[i];
  for (std::size_t j = 0; j < n_; ++j) {
    const double xj = x[j];
    for (std::size_t p = l_ptr_[j] + 1; p < l_ptr_[j + 1]; ++p) x[l_idx_[p]] -= l_vals_[p] * xj;
  }
  for (std::size_t j = n_; j-- > 0;) {
    x[j] /= u_vals_[u_ptr_[j + 1] - 1];
    const double xj = x[j];
    for (std::size_t p = u_ptr_[j]; p + 1 < u_ptr_[j + 1]; ++p) x[u_idx_[p]] -= u_vals_[p] * xj;
  }
  return x;
}

}  // namespace elcomp
