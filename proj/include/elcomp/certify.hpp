#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "elcomp/oracle.hpp"
#include "elcomp/spectral.hpp"
#include "elcomp/structure.hpp"
#include "elcomp/system.hpp"

namespace elcomp {

enum class Mode { basic, sharp };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

enum class VerdictKind {
  holds_thm1,
  holds_thm3,
  holds_thm4,
  holds_thm5,
  holds_thm8,
  fails_thm1,
  fails_thm6,
  fails_thm7,
  inconclusive,
};

std::string to_string(VerdictKind k);
/// Theorem number of a verdict kind, or 0 for inconclusive.
int theorem_of(VerdictKind k);
bool is_holds(VerdictKind k);
bool is_fails(VerdictKind k);

struct CertifyOptions {
  EigenOptions eig;
  /// Relative tolerance: comparisons use tol_cond * (1 + |lambda|).
  double tol_cond = 1e-8;
  Mode mode = Mode::basic;
  bool run_oracle = true;
  std::size_t oracle_max_dof = kDefaultOracleMaxDof;
  double tol_op = kOracleTol;
};

/// One evaluated inequality. `strict` comparisons need margin > tol, slack
/// ones margin >= -tol.
struct Condition {
  std::string name;
  /// Zero-based species, or -1 for a condition over all species.
  int species = -1;
  double margin = 0.0;
  bool strict = false;
  bool satisfied = false;
  std::optional<std::size_t> node;
};

struct EigenSummary {
  std::string label;
  double lambda = 0.0;
  Interval cw;
  std::size_t iterations = 0;
  double residual = 0.0;
  double min_right = 0.0;
  double min_left = 0.0;
};

EigenSummary summarize(const std::string& label, const EigenPair& e);

/// Interior values of each species block, species-major.
struct Counterexample {
  std::size_t species = 0;
  std::vector<double> w;
  bool verified = false;
  double residual_max = 0.0;
  double norm_a = 0.0;
  double min_w = 0.0;
  double max_w = 0.0;
};

enum class FailureKind { thm6, thm7 };

struct Witness {
  std::size_t node = 0;
  std::vector<double> point;
};

struct Verdict {
  VerdictKind kind = VerdictKind::inconclusive;
  /// For holds_thm8: the linear theorem the linearization satisfied.
  std::optional<VerdictKind> via;
  Mode mode = Mode::basic;
  std::string label;
  std::string reason;
  StructureClass structure;

  std::optional<double> lambda;
  std::optional<Interval> cw;
  /// Per-species eigenvalues in the original species order (Theorems 4, 5).
  std::vector<double> lambdas;
  std::vector<EigenSummary> eigen;
  std::vector<Condition> conditions;
  /// Headline margins: "column_sum" (strict, at x0) and "diagonal" (slack).
  std::optional<double> column_sum_margin;
  std::optional<double> diagonal_margin;
  std::optional<double> sharp_margin;
  std::optional<Witness> x0;
  std::optional<double> epsilon;
  std::optional<std::size_t> failing_species;
  std::optional<Counterexample> counterexample;
  /// Constructed positive functions, in the original species order.
  std::vector<std::vector<double>> wtilde;

  std::optional<GaugeResult> gauge;
  std::optional<OracleReport> oracle;
  std::optional<OracleReport> gauged_oracle;
  std::vector<std::string> notes;
  std::vector<std::string> errors;
};

Verdict check_thm1(const SampledSystem& sys, const CertifyOptions& opts = {});
Verdict check_thm3(const SampledSystem& sys, const CertifyOptions& opts = {});
Verdict check_thm4(const SampledSystem& sys, const CertifyOptions& opts = {});
/// Throws Error(infeasible_epsilon) when no positive epsilon satisfies the
/// strict conditions.
Verdict check_thm5(const SampledSystem& sys, const CertifyOptions& opts = {});

/// Failure theorems; absent when no verified counterexample exists. Unverified
/// candidates are appended to `notes` when given.
std::optional<Verdict> check_failure(const SampledSystem& sys, const CertifyOptions& opts = {},
                                     std::vector<std::string>* notes = nullptr);

/// thm6: w = e_j (x) eigenfunction of L_j + m_jj^-; thm7: w = eigenfunction of
/// L + M^-. Verified iff w >= 0, max w = 1 and max(A w) <= 1e-8 ||A||_inf.
Counterexample build_counterexample(const SampledSystem& sys, std::size_t j, FailureKind which,
                                    const EigenOptions& opts = {});

constexpr double kCounterexampleTol = 1e-8;

/// Full pipeline: ellipticity and Z gates, classification, failure theorems,
/// then the sufficient condition matching the structure; attaches the sign
/// gauge and the oracle reports.
Verdict certify(const SampledSystem& sys, const CertifyOptions& opts = {});
Verdict certify(const SystemSpec& spec, const CertifyOptions& opts = {});

}  // namespace elcomp
