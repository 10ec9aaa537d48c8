#include <catch_amalgamated.hpp>

#include <random>

#include "elcomp/certify.hpp"
#include "elcomp/error.hpp"
#include "support.hpp"

using namespace elcomp;
using elcomp::test::kPi;

namespace {

SampledSystem on_pi(std::size_t n, const std::vector<std::string>& m, int cells = 64) {
  return sample_system(test::coupled(test::line(0, kPi, cells), n, m));
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::io;
}

const Condition* find(const Verdict& v, const std::string& name, int species) {
  for (const auto& c : v.conditions)
    if (c.name == name && c.species == species) return &c;
  return nullptr;
}

void check_counterexample(const SampledSystem& sys, const Counterexample& ce) {
  const auto a = assemble_system(sys, CouplingMode::full);
  const auto aw = matvec(a.A, ce.w);
  CHECK(*std::min_element(ce.w.begin(), ce.w.end()) >= 0);
  CHECK(*std::max_element(ce.w.begin(), ce.w.end()) == Catch::Approx(1.0).margin(1e-12));
  CHECK(*std::max_element(aw.begin(), aw.end()) <= 1e-8 * a.A.norm_inf());
}

// Circulant 3-species system: m12 = m23 = m31 = -1 (cooperative cycle),
// m21 = m32 = m13 = comp, diagonal d.
std::vector<std::string> circulant(const std::string& d, const std::string& comp) {
  return {d, "-1", comp, comp, d, "-1", "-1", comp, d};
}

}  // namespace

TEST_CASE("principal eigenvalue criterion", "[certify]") {
  const auto sys = on_pi(2, {"0", "-0.5", "-0.5", "0"}, 128);
  const auto v = check_thm1(sys);
  CHECK(v.kind == VerdictKind::holds_thm1);
  REQUIRE(v.lambda);
  CHECK(*v.lambda == Catch::Approx(test::discrete_dirichlet(kPi, 128) - 0.5).margin(1e-8));

  const auto neg = on_pi(2, {"-3", "-0.5", "-0.5", "-3"}, 128);
  const auto f = check_thm1(neg);
  CHECK(f.kind == VerdictKind::fails_thm1);
  CHECK(*f.lambda == Catch::Approx(test::discrete_dirichlet(kPi, 128) - 3.5).margin(1e-8));
  REQUIRE(f.counterexample);
  CHECK(f.counterexample->verified);
  check_counterexample(neg, *f.counterexample);

  CHECK(code_of([&] { check_thm1(on_pi(2, {"0", "0.5", "-0.5", "0"})); }) == ErrorCode::structure_unsupported);
}

TEST_CASE("irreducible cooperative part, basic mode", "[certify]") {
  const auto coop = check_thm3(on_pi(2, {"0", "-0.5", "-0.5", "0"}));
  CHECK(coop.kind == VerdictKind::holds_thm3);
  CHECK(*coop.diagonal_margin == Catch::Approx(*coop.lambda).epsilon(1e-14));
  CHECK(*coop.column_sum_margin == Catch::Approx(*coop.lambda).epsilon(1e-14));
  CHECK(coop.label == "sufficient condition");

  // Cooperative cycle has Perron root 1: lambda = lambda_h - 0.25 - 1 < 0.
  const auto sys = on_pi(3, circulant("-0.25", "0.5"));
  const double lh = test::discrete_dirichlet(kPi, 64);
  const auto neg = check_thm3(sys);
  CHECK(*neg.lambda == Catch::Approx(lh - 1.25).margin(1e-8));
  CHECK(neg.kind == VerdictKind::inconclusive);
  const auto* d = find(neg, "diagonal", 0);
  REQUIRE(d);
  CHECK_FALSE(d->satisfied);
  CHECK(d->margin == Catch::Approx(lh - 1.25).margin(1e-8));
  // Column sums are lambda + 0.5 > 0, so only the diagonal condition fails.
  for (int j = 0; j < 3; ++j) CHECK(find(neg, "column_sum", j)->satisfied);

  // Positive diagonal 1 - lambda_h is split off as m_jj^+, so lambda + m_jj^+ = 0 exactly.
  char diag[64];
  std::snprintf(diag, sizeof diag, "%.17g", 1 - lh);
  const auto zero = check_thm3(on_pi(3, circulant(diag, "0.5")));
  CHECK(*zero.lambda == Catch::Approx(lh - 1).margin(1e-8));
  CHECK(std::abs(*zero.diagonal_margin) <= 1e-8);
  CHECK(*zero.column_sum_margin == Catch::Approx(0.5).margin(1e-8));
  CHECK(zero.kind == VerdictKind::holds_thm3);
  REQUIRE(zero.x0);

  CHECK(code_of([&] { check_thm3(on_pi(2, {"0", "1", "1", "0"})); }) == ErrorCode::structure_unsupported);
}

TEST_CASE("sharp mode uses the adjoint eigenfunction", "[certify]") {
  CertifyOptions opts;
  opts.mode = Mode::sharp;
  const auto sys = on_pi(3, circulant("-0.25", "0.5"));
  const auto v = check_thm3(sys, opts);
  // Rotation symmetry makes the three adjoint components equal, so the
  // weighted column sum is lambda + 0.5 at every node.
  REQUIRE(v.sharp_margin);
  const double lh = test::discrete_dirichlet(kPi, 64);
  CHECK(*v.sharp_margin == Catch::Approx(lh - 1.25 + 0.5).margin(1e-7));
  CHECK(v.kind == VerdictKind::holds_thm3);
  CHECK(v.mode == Mode::sharp);

  const auto basic = check_thm3(sys);
  CHECK(basic.kind == VerdictKind::inconclusive);
  CHECK_FALSE(basic.sharp_margin);
}

TEST_CASE("diagonal cooperative part", "[certify]") {
  const auto sys = sample_system(test::coupled(test::square(0, kPi, 16), 2, {"0", "0.5", "0.5", "0"}));
  const auto v = check_thm4(sys);
  const double h = kPi / 16;
  const double l2 = 2 * 4 / (h * h) * std::pow(std::sin(h / 2), 2);
  CHECK(v.kind == VerdictKind::holds_thm4);
  REQUIRE(v.lambdas.size() == 2);
  for (double l : v.lambdas) CHECK(l == Catch::Approx(l2).epsilon(1e-8));
  CHECK(*v.column_sum_margin == Catch::Approx(l2 + 0.5).epsilon(1e-8));
  CHECK(*v.diagonal_margin == Catch::Approx(l2).epsilon(1e-8));
  CHECK(std::abs(*v.column_sum_margin - 2.5) <= 0.02 * 2.5);
  CHECK(std::abs(*v.diagonal_margin - 2.0) <= 0.02 * 2.0);

  const auto shifted = check_thm4(
      sample_system(test::coupled(test::square(0, kPi, 16), 2, {"-5", "0.5", "0.5", "-5"})));
  CHECK(shifted.kind == VerdictKind::inconclusive);
  CHECK(shifted.lambdas[0] == Catch::Approx(l2 - 5).epsilon(1e-8));

  SystemSpec one = SystemSpec::uniform(test::line(0, kPi, 64), 1);
  one.ops[0].c = test::ex("1 + x");
  const auto s = check_thm4(sample_system(one));
  CHECK(s.kind == VerdictKind::holds_thm4);
  CHECK(s.lambdas[0] > 1);

  // Blocks: {1,2} coupled cooperatively, species 3 alone.
  const auto blk = check_thm4(on_pi(3, {"0", "-0.5", "0.2", "-0.5", "0", "0", "0.1", "0", "0"}));
  CHECK(blk.kind == VerdictKind::holds_thm4);
  CHECK(blk.lambdas[0] == blk.lambdas[1]);
  CHECK(blk.lambdas[0] == Catch::Approx(test::discrete_dirichlet(kPi, 64) - 0.5).margin(1e-8));

  CHECK(code_of([&] { check_thm4(on_pi(2, {"0", "1", "-1", "0"})); }) == ErrorCode::structure_unsupported);
}

TEST_CASE("triangular cooperative part", "[certify]") {
  const auto sys = on_pi(2, {"0", "1", "-1", "0"});
  const auto v = check_thm5(sys);
  CHECK(v.kind == VerdictKind::holds_thm5);
  const double lh = test::discrete_dirichlet(kPi, 64);
  REQUIRE(v.epsilon);
  // Slacks: lambda_2 on the diagonal, min(lambda_1 + 0, lambda_2 + 1) at the best node.
  CHECK(*v.epsilon == Catch::Approx(0.5 * lh).epsilon(1e-8));
  for (double l : v.lambdas) CHECK(l == Catch::Approx(lh).epsilon(1e-8));
  REQUIRE(v.wtilde.size() == 2);
  for (const auto& w : v.wtilde) CHECK(*std::min_element(w.begin(), w.end()) > 0);

  // w~_2 solves (A_2 - (lambda_2 - eps)) w = |m_21^-| w~_1.
  const auto a = assemble_system(sys, CouplingMode::cooperative_only);
  const std::size_t n = a.n_int();
  std::vector<double> w2(a.dof(), 0.0);
  std::copy(v.wtilde[1].begin(), v.wtilde[1].end(), w2.begin() + static_cast<std::ptrdiff_t>(n));
  const auto aw = matvec(a.A, w2);
  for (std::size_t q = 0; q < n; ++q) {
    const double lhs = aw[n + q] - (lh - *v.epsilon) * v.wtilde[1][q];
    CHECK(lhs == Catch::Approx(v.wtilde[0][q]).margin(1e-9));
  }

  CHECK(code_of([&] { check_thm5(on_pi(2, {"0", "1", "-1", "-2"})); }) == ErrorCode::infeasible_epsilon);
  CHECK(code_of([&] { check_thm5(on_pi(2, {"0", "-1", "-1", "0"})); }) == ErrorCode::structure_unsupported);

  // Reversed order: species 2 is upstream.
  const auto rev = check_thm5(on_pi(2, {"0", "-1", "1", "0"}));
  CHECK(rev.kind == VerdictKind::holds_thm5);
  CHECK(*rev.epsilon == Catch::Approx(*v.epsilon).epsilon(1e-10));
}

TEST_CASE("failure theorems", "[certify]") {
  const auto sys = on_pi(2, {"-2", "0", "-1", "0"});
  std::vector<std::string> notes;
  const auto f = check_failure(sys, {}, &notes);
  REQUIRE(f);
  CHECK(f->kind == VerdictKind::fails_thm6);
  CHECK(*f->failing_species == 0u);
  CHECK(*f->lambda == Catch::Approx(test::discrete_dirichlet(kPi, 64) - 2).margin(1e-8));
  REQUIRE(f->counterexample);
  CHECK(f->counterexample->verified);
  check_counterexample(sys, *f->counterexample);
  // Second block of w is zero.
  const std::size_t n = sys.grid.interior_count();
  for (std::size_t q = 0; q < n; ++q) CHECK(f->counterexample->w[n + q] == 0.0);

  const auto comp = on_pi(2, {"-2", "0", "1", "0"});
  notes.clear();
  CHECK_FALSE(check_failure(comp, {}, &notes));
  REQUIRE(notes.size() == 1);
  CHECK(notes[0].rfind("FailureCandidate", 0) == 0);
  const auto ce = build_counterexample(comp, 0, FailureKind::thm6);
  CHECK_FALSE(ce.verified);
  // Row 2 of A w is m21 w1 = +w1, peaking at 1.
  CHECK(ce.residual_max == Catch::Approx(1.0).margin(1e-3));

  CHECK_FALSE(check_failure(on_pi(2, {"0", "-0.5", "-0.5", "0"})));
  const auto misuse = build_counterexample(on_pi(2, {"0", "0", "0", "0"}), 1, FailureKind::thm6);
  CHECK_FALSE(misuse.verified);
  CHECK(misuse.residual_max > 0.9);

  // Irreducible version.
  const auto irr = on_pi(2, {"-3", "-0.5", "-0.5", "-3"});
  const auto g = check_failure(irr);
  REQUIRE(g);
  CHECK(g->kind == VerdictKind::fails_thm7);
  check_counterexample(irr, *g->counterexample);
}

TEST_CASE("certify pipeline", "[certify]") {
  const auto coop = certify(on_pi(2, {"0", "-0.5", "-0.5", "0"}, 32));
  CHECK(coop.kind == VerdictKind::holds_thm1);
  REQUIRE(coop.oracle);
  CHECK(*coop.oracle->inverse_positive);
  CHECK_FALSE(coop.gauged_oracle);

  const auto comp = certify(sample_system(test::coupled(test::square(0, kPi, 12), 2, {"0", "0.5", "0.5", "0"})));
  CHECK(comp.kind == VerdictKind::holds_thm4);
  REQUIRE(comp.gauge);
  REQUIRE(comp.gauge->sigma);
  CHECK(*comp.gauge->sigma == std::vector<int>{1, -1});
  REQUIRE(comp.gauged_oracle);
  CHECK(*comp.gauged_oracle->inverse_positive);

  const auto fail = certify(on_pi(2, {"-2", "0", "-1", "0"}));
  CHECK(fail.kind == VerdictKind::fails_thm6);
  CHECK_FALSE(*fail.oracle->inverse_positive);

  const auto pp = certify(on_pi(2, {"0", "1", "-1", "0"}));
  CHECK(pp.kind == VerdictKind::holds_thm5);

  // Infeasible epsilon becomes an inconclusive verdict with the error recorded.
  const auto inf = certify(on_pi(2, {"0", "1", "-1", "-2"}));
  CHECK(inf.kind == VerdictKind::inconclusive);
  REQUIRE(inf.errors.size() == 1);
  CHECK(inf.errors[0].rfind("InfeasibleEpsilon", 0) == 0);

  const auto general = certify(on_pi(4, {"0", "-1", "0", "0", "-1", "0", "0", "0", "0", "-1", "0", "-1", "0", "0", "-1", "0"}, 16));
  CHECK(general.kind == VerdictKind::inconclusive);
  CHECK_FALSE(general.reason.empty());

  CertifyOptions small;
  small.oracle_max_dof = 10;
  const auto skipped = certify(on_pi(2, {"0", "-0.5", "-0.5", "0"}, 32), small);
  CHECK_FALSE(skipped.oracle);
  CHECK(skipped.notes.back().rfind("oracle skipped", 0) == 0);
}

TEST_CASE("margins are monotone in the competitive part", "[certify][property]") {
  const Grid g = test::square(0, kPi, 10);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const double a = u(rng), b = u(rng), d = u(rng);
    auto text = [](double v) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    const auto base = check_thm4(sample_system(test::coupled(g, 2, {"0", text(a), text(b), "0"})));
    const auto more =
        check_thm4(sample_system(test::coupled(g, 2, {"0", text(a + d), text(b + d), "0"})));
    CHECK(*more.column_sum_margin >= *base.column_sum_margin - 1e-12);
    CHECK(*more.diagonal_margin >= *base.diagonal_margin - 1e-12);

    const auto c0 = check_thm3(on_pi(3, circulant("-0.25", text(a)), 24));
    const auto c1 = check_thm3(on_pi(3, circulant("-0.25", text(a + d)), 24));
    CHECK(*c1.column_sum_margin >= *c0.column_sum_margin - 1e-12);
  }
}

TEST_CASE("cooperative verdict agrees with the oracle", "[certify][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int compared = 0;
  for (int t = 0; t < 24; ++t) {
    const std::size_t n = 2 + rng() % 2;
    const Grid g = t % 2 ? test::line(0, kPi, 24) : test::square(0, kPi, 8);
    SystemSpec spec = SystemSpec::uniform(g, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        char buf[96];
        if (k == l) {
          std::snprintf(buf, sizeof buf, "%.6f + %.6f*sin(x)", -4 * u(rng) + 1, u(rng));
        } else {
          std::snprintf(buf, sizeof buf, "-%.6f - 0.1*cos(x)^2", 0.05 + u(rng));
        }
        spec.m[k * n + l] = test::ex(buf);
      }
    const auto sys = sample_system(spec);
    const auto v = certify(sys);
    const auto full = assemble_system(sys, CouplingMode::full);
    const double lambda = principal_eigenpair(full.A).lambda;
    if (std::abs(lambda) <= 1e-6) continue;
    ++compared;
    REQUIRE(v.oracle);
    CHECK((v.kind == VerdictKind::holds_thm1) == *v.oracle->inverse_positive);
    CHECK((v.kind == VerdictKind::holds_thm1) == (lambda > 0));
  }
  CHECK(compared >= 20);
}
