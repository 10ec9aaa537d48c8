#include <catch_amalgamated.hpp>

#include <random>

#include "elcomp/error.hpp"
#include "elcomp/sparse.hpp"

using namespace elcomp;

namespace {

SparseMat dense(std::size_t r, std::size_t c, const std::vector<double>& v) {
  TripletBuilder b(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      if (v[i * c + j] != 0.0) b.add(i, j, v[i * c + j]);
    }
  }
  return b.build();
}

SparseMat random_sparse(std::mt19937_64& rng, std::size_t r, std::size_t c, double density) {
  std::uniform_real_distribution<double> u(-1, 1), coin(0, 1);
  TripletBuilder b(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      if (coin(rng) < density) b.add(i, j, u(rng));
    }
  }
  return b.build();
}

// Strictly diagonally dominant random matrix.
SparseMat random_dominant(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1, 1), coin(0, 1);
  TripletBuilder b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && coin(rng) < 0.1) {
        const double v = u(rng);
        b.add(i, j, v);
        row += std::abs(v);
      }
    }
    b.add(i, i, (row + 1.0) * (u(rng) < 0 ? -1 : 1));
  }
  return b.build();
}

SparseMat laplacian_1d(std::size_t m, double h) {
  TripletBuilder b(m, m);
  const double s = 1.0 / (h * h);
  for (std::size_t i = 0; i < m; ++i) {
    b.add(i, i, 2 * s);
    if (i > 0) b.add(i, i - 1, -s);
    if (i + 1 < m) b.add(i, i + 1, -s);
  }
  return b.build();
}

double norm_inf(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("csr invariants", "[sparse]") {
  TripletBuilder b(3, 3);
  b.add(0, 2, 1.0);
  b.add(0, 0, 2.0);
  b.add(0, 2, 3.0);
  b.add(1, 1, 1.0);
  b.add(1, 1, -1.0);
  const SparseMat a = b.build();
  CHECK(a.row_ptr() == std::vector<std::size_t>{0, 2, 2, 2});
  CHECK(a.col_idx() == std::vector<std::size_t>{0, 2});
  CHECK(a.at(0, 2) == 4.0);
  CHECK(a.at(1, 1) == 0.0);
  CHECK(a.norm_inf() == 6.0);
  CHECK_THROWS_AS(SparseMat(2, 2, {0, 2, 2}, {1, 0}, {1.0, 1.0}), Error);
}

TEST_CASE("matvec examples", "[sparse]") {
  const std::vector<double> x{1.5, -2, 3};
  CHECK(matvec(SparseMat::identity(3), x) == x);
  CHECK(matvec(dense(2, 2, {2, 1, 1, 2}), std::vector<double>{1, 1}) == std::vector<double>{3, 3});
  CHECK(matvec(TripletBuilder(3, 3).build(), x) == std::vector<double>{0, 0, 0});
  CHECK_THROWS_AS(matvec(SparseMat::identity(2), x), Error);
  try {
    matvec(SparseMat::identity(2), x);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::dim_mismatch);
  }
}

TEST_CASE("matvec is linear", "[sparse][property]") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    const SparseMat a = random_sparse(rng, 30, 25, 0.2);
    std::vector<double> x(25), y(25), z(25);
    const double al = u(rng), be = u(rng);
    for (std::size_t i = 0; i < 25; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      z[i] = al * x[i] + be * y[i];
    }
    const auto ax = matvec(a, x), ay = matvec(a, y), az = matvec(a, z);
    double scale = 1;
    for (std::size_t i = 0; i < 30; ++i) scale = std::max(scale, std::abs(az[i]));
    for (std::size_t i = 0; i < 30; ++i) CHECK(std::abs(az[i] - (al * ax[i] + be * ay[i])) <= 1e-12 * scale);
  }
}

TEST_CASE("transpose examples", "[sparse]") {
  const SparseMat up = dense(3, 3, {1, 2, 3, 0, 4, 5, 0, 0, 6});
  const SparseMat t = transpose(up);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) CHECK(t.at(i, j) == 0.0);
  }
  CHECK(t.at(2, 0) == 3.0);
  const SparseMat row = dense(1, 3, {1, 2, 3});
  const SparseMat col = transpose(row);
  CHECK(col.rows() == 3);
  CHECK(col.cols() == 1);
  CHECK(col.at(1, 0) == 2.0);
}

TEST_CASE("transpose is an adjoint involution", "[sparse][property]") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    const SparseMat a = random_sparse(rng, 17, 23, 0.25);
    CHECK(transpose(transpose(a)) == a);
    std::vector<double> x(17), y(23);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    const auto ay = matvec(a, y);
    const auto atx = matvec(transpose(a), x);
    double lhs = 0, rhs = 0, mag = 0;
    for (std::size_t i = 0; i < 23; ++i) lhs += atx[i] * y[i], mag += std::abs(atx[i] * y[i]);
    for (std::size_t i = 0; i < 17; ++i) rhs += x[i] * ay[i];
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, mag));
  }
}

TEST_CASE("lu_solve examples", "[sparse]") {
  const std::vector<double> b{3, -1, 2};
  CHECK(lu_solve(SparseMat::identity(3), b) == b);
  const auto x = lu_solve(dense(2, 2, {2, 0, 0, 4}), std::vector<double>{2, 4});
  CHECK(x == std::vector<double>{1, 1});
  CHECK_THROWS_AS(lu_solve(dense(2, 2, {1, 1, 1, 1}), std::vector<double>{1, 1}), Error);
  try {
    lu_solve(dense(2, 2, {1, 1, 1, 1}), std::vector<double>{1, 1});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_matrix);
  }
  // Needs a row swap.
  const auto y = lu_solve(dense(2, 2, {0, 1, 1, 0}), std::vector<double>{5, 7});
  CHECK(y == std::vector<double>{7, 5});
}

TEST_CASE("lu_solve residual bound on dominant matrices", "[sparse][property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 25; ++t) {
    const std::size_t n = 10 + static_cast<std::size_t>(t) * 7;
    const SparseMat a = random_dominant(rng, n);
    std::vector<double> b(n);
    for (auto& v : b) v = u(rng);
    const auto x = lu_solve(a, b);
    auto r = matvec(a, x);
    for (std::size_t i = 0; i < n; ++i) r[i] -= b[i];
    CHECK(norm_inf(r) <= kLinearSolveTol * (a.norm_inf() * norm_inf(x) + norm_inf(b)));
  }
}

TEST_CASE("one factor serves many right-hand sides", "[sparse]") {
  const SparseMat a = laplacian_1d(50, 0.02);
  const LuFactor lu(a);
  for (int k = 0; k < 5; ++k) {
    std::vector<double> b(50, static_cast<double>(k + 1));
    const auto x = lu.solve(b);
    auto r = matvec(a, x);
    for (std::size_t i = 0; i < 50; ++i) CHECK(std::abs(r[i] - b[i]) <= 1e-8 * (k + 1));
  }
}

TEST_CASE("dense inverse examples", "[sparse]") {
  const auto d = dense_inverse(dense(2, 2, {2, 0, 0, 4}));
  CHECK(d(0, 0) == 0.5);
  CHECK(d(1, 1) == 0.25);
  CHECK(d(0, 1) == 0.0);

  const auto l = dense_inverse(laplacian_1d(2, 1.0 / 3.0));
  CHECK(l(0, 0) == Catch::Approx(2.0 / 27).epsilon(1e-14));
  CHECK(l(0, 1) == Catch::Approx(1.0 / 27).epsilon(1e-14));
  CHECK(l(1, 0) == Catch::Approx(1.0 / 27).epsilon(1e-14));
  CHECK(l(1, 1) == Catch::Approx(2.0 / 27).epsilon(1e-14));

  CHECK_THROWS_AS(dense_inverse(dense(2, 2, {1, 2, 2, 4})), Error);
  try {
    dense_inverse(SparseMat::identity(30), 20);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::too_large);
  }
}

TEST_CASE("dense inverse matches the discrete Green's function", "[sparse][oracle]") {
  // A = h^-2 tridiag(-1, 2, -1) on (0,1): (A^-1)_ij = h min(x_i,x_j) (1 - max(x_i,x_j)).
  const int n = 40;
  const double h = 1.0 / n;
  const auto inv = dense_inverse(laplacian_1d(n - 1, h));
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      const double xi = i * h, xj = j * h;
      const double g = h * std::min(xi, xj) * (1 - std::max(xi, xj));
      CHECK(std::abs(inv(i - 1, j - 1) - g) <= 1e-10 * g);
    }
  }
}

TEST_CASE("power iteration examples", "[sparse]") {
  const auto r = power_iteration(dense(2, 2, {2, 1, 1, 2}));
  CHECK(r.rho == 3.0);
  CHECK(r.vector == std::vector<double>{1, 1});
  CHECK(r.cw.width() == 0.0);
  CHECK(r.iterations <= 1);

  const auto id = power_iteration(SparseMat::identity(4));
  CHECK(id.rho == 1.0);
  CHECK(id.vector == std::vector<double>(4, 1.0));

  try {
    power_iteration(dense(2, 2, {1, -1, 1, 1}));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_nonnegative);
  }
}

TEST_CASE("power iteration enclosure and convergence", "[sparse][property]") {
  // Shifted 1D Laplacian: nonnegative, irreducible, slow to converge.
  const std::size_t m = 30;
  TripletBuilder b(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    b.add(i, i, 2.0);
    if (i > 0) b.add(i, i - 1, 1.0);
    if (i + 1 < m) b.add(i, i + 1, 1.0);
  }
  PowerIterationOptions opts;
  opts.record_history = true;
  const auto r = power_iteration(b.build(), opts);
  const double exact = 2.0 + 2.0 * std::cos(3.14159265358979323846 / (m + 1));
  CHECK(r.cw.contains(r.rho));
  CHECK(r.cw.lo <= exact + 1e-12);
  CHECK(r.cw.hi >= exact - 1e-12);
  CHECK(r.cw.width() <= opts.tol * (1 + r.rho));
  REQUIRE(r.history.size() >= 2);
  for (std::size_t k = 1; k < r.history.size(); ++k) {
    CHECK(r.history[k].width() <= r.history[k - 1].width() * (1 + 1e-12) + 1e-15);
    CHECK(r.history[k].lo <= exact + 1e-12);
    CHECK(r.history[k].hi >= exact - 1e-12);
  }
  CHECK(*std::min_element(r.vector.begin(), r.vector.end()) > 0);
  CHECK(*std::max_element(r.vector.begin(), r.vector.end()) == 1.0);

  PowerIterationOptions tight;
  tight.max_iter = 3;
  try {
    power_iteration(b.build(), tight);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_convergence);
  }
}
