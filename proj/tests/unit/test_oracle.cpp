#include <catch_amalgamated.hpp>

#include "elcomp/error.hpp"
#include "elcomp/oracle.hpp"
#include "support.hpp"

using namespace elcomp;
using elcomp::test::ex;
using elcomp::test::kPi;

namespace {

AssembledSystem scalar(const Grid& g, const std::string& c = "0") {
  SystemSpec spec = SystemSpec::uniform(g, 1);
  spec.ops[0].c = ex(c);
  return assemble_system(spec, CouplingMode::full);
}

double dense_min(const DenseMatrix& m) { return *std::min_element(m.data.begin(), m.data.end()); }

}  // namespace

TEST_CASE("Laplacian is inverse positive", "[oracle]") {
  const auto r = inverse_positivity(scalar(test::line(0, 1, 32)));
  REQUIRE(r.inverse_positive);
  CHECK(*r.inverse_positive);
  REQUIRE(r.boundary_monotone);
  CHECK(*r.boundary_monotone);
  CHECK(r.min_entry > 0);
  CHECK(r.dof == 31);
  CHECK_FALSE(r.sampled);
  CHECK_FALSE(r.gauge);
}

TEST_CASE("assembled inverse equals the discrete Green's function", "[oracle]") {
  const int n = 32;
  const double h = 1.0 / n;
  const auto a = scalar(test::line(0, 1, n));
  const auto inv = dense_inverse(a.A);
  double largest = 0;
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      const double g = h * std::min(i * h, j * h) * (1 - std::max(i * h, j * h));
      CHECK(std::abs(inv(i - 1, j - 1) - g) <= 1e-10 * g);
      largest = std::max(largest, g);
    }
  const auto r = inverse_positivity(a);
  CHECK(r.scale == Catch::Approx(largest).epsilon(1e-10));
  // Smallest entry couples the two nodes next to opposite ends: h * h * h.
  CHECK(r.min_entry == Catch::Approx(h * h * h).epsilon(1e-10));
}

TEST_CASE("negative principal eigenvalue breaks inverse positivity", "[oracle]") {
  const auto r = inverse_positivity(scalar(test::line(0, kPi, 32), "-20"));
  REQUIRE(r.inverse_positive);
  CHECK_FALSE(*r.inverse_positive);
  CHECK(r.min_entry < -1e-9 * r.scale);
  const auto inv = dense_inverse(scalar(test::line(0, kPi, 32), "-20").A);
  CHECK(inv(r.witness_row, r.witness_col) == r.min_entry);
}

TEST_CASE("gauged competitive pair is inverse positive", "[oracle]") {
  const Grid g = test::square(0, kPi, 10);
  const auto a = assemble_system(test::coupled(g, 2, {"0", "0.5", "0.5", "0"}), CouplingMode::full);
  const auto gauged = inverse_positivity(a, std::vector<int>{1, -1});
  REQUIRE(gauged.inverse_positive);
  CHECK(*gauged.inverse_positive);
  CHECK(*gauged.boundary_monotone);
  CHECK(gauged.gauge == std::vector<int>{1, -1});
  const auto plain = inverse_positivity(a);
  CHECK_FALSE(*plain.inverse_positive);
}

TEST_CASE("gauge conjugation", "[oracle][property]") {
  const Grid g = test::line(0, 1, 12);
  const auto a = assemble_system(test::coupled(g, 3, {"1", "0.3", "-0.2", "0.3", "0", "0.1*x", "-0.2", "0.1", "2"}),
                                 CouplingMode::full);
  const std::vector<int> sigma{1, -1, 1};
  const std::size_t n = a.n_int();
  TripletBuilder b(a.dof(), a.dof());
  for (std::size_t i = 0; i < a.dof(); ++i)
    for (std::size_t k = a.A.row_ptr()[i]; k < a.A.row_ptr()[i + 1]; ++k) {
      const std::size_t j = a.A.col_idx()[k];
      b.add(i, j, sigma[i / n] * sigma[j / n] * a.A.vals()[k]);
    }
  const auto dad_inv = dense_inverse(b.build());
  const auto inv = dense_inverse(a.A);
  double scale = 0;
  for (double v : inv.data) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < a.dof(); ++i)
    for (std::size_t j = 0; j < a.dof(); ++j)
      CHECK(std::abs(dad_inv(i, j) - sigma[i / n] * sigma[j / n] * inv(i, j)) <= 1e-12 * scale);
  const auto r = inverse_positivity(a, sigma);
  CHECK(r.min_entry == Catch::Approx(dense_min(dad_inv)).epsilon(1e-12));
}

TEST_CASE("oracle size and singularity errors", "[oracle]") {
  const auto big = scalar(test::square(0, 1, 20));
  try {
    inverse_positivity(big, {}, 100);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::too_large);
  }
  // h = 1/3: A = 9 [[2,-1],[-1,2]] has eigenvalue 9, so c = -9 makes it exactly singular.
  try {
    inverse_positivity(scalar(test::line(0, 1, 3), "-9"));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_matrix);
  }
}

TEST_CASE("sub-solution checks", "[oracle]") {
  const Grid g = test::line(0, kPi, 24);
  SystemSpec spec = test::coupled(g, 2, {"1", "-0.5", "-0.25", "0"});
  spec.f = {ex("1 + x"), ex("sin(x)")};
  spec.g = {ex("0.5"), ex("x")};
  const auto a = assemble_system(spec, CouplingMode::full);

  const std::vector<double> zero_u(a.dof(), 0.0), zero_g(a.g_vec.size(), 0.0);
  const auto z = verify_subsolution(a, zero_u, zero_g);
  CHECK(z.is_subsolution);
  for (std::size_t i = 0; i < a.dof(); ++i) CHECK(z.residual[i] == -a.f_vec[i]);

  const auto u = solve_system(a);
  const auto exact = verify_subsolution(a, u, a.g_vec);
  CHECK(exact.is_subsolution);
  CHECK(std::abs(exact.max_residual) <= 1e-9 * (1 + a.A.norm_inf()));

  auto bumped = u;
  for (std::size_t i = 5; i < 9; ++i) bumped[i] += 0.1;
  const auto b = verify_subsolution(a, bumped, a.g_vec);
  CHECK_FALSE(b.is_subsolution);
  CHECK(b.max_residual > 0);

  try {
    verify_subsolution(a, std::vector<double>(3, 0.0), a.g_vec);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::dim_mismatch);
  }
}

TEST_CASE("random probes", "[oracle]") {
  const Grid g = test::line(0, kPi, 40);
  const auto mm = assemble_system(test::coupled(g, 2, {"0", "-0.5", "-0.5", "0"}), CouplingMode::full);
  const auto ok = random_probe(mm, 25, 42);
  CHECK_FALSE(ok.inverse_positive.has_value());
  CHECK(ok.sampled);
  CHECK(ok.trials == 25);
  CHECK(ok.min_entry >= 0);

  const auto bad = assemble_system(test::coupled(g, 2, {"-2", "0", "-1", "0"}), CouplingMode::full);
  const auto r = random_probe(bad, 25, 42);
  REQUIRE(r.inverse_positive);
  CHECK_FALSE(*r.inverse_positive);
  CHECK(r.min_entry < 0);

  const auto again = random_probe(bad, 25, 42);
  CHECK(again.min_entry == r.min_entry);
  CHECK(again.witness_row == r.witness_row);

  const auto none = random_probe(bad, 0, 42);
  CHECK(none.trials == 0);
  CHECK_FALSE(none.inverse_positive.has_value());
}
