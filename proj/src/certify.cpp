#include "elcomp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "elcomp/error.hpp"

namespace elcomp {

std::string to_string(Mode m) { return m == Mode::sharp ? "sharp" : "basic"; }

Mode parse_mode(const std::string& s) {
  if (s == "basic") return Mode::basic;
  if (s == "sharp") return Mode::sharp;
  throw Error(ErrorCode::validation, "mode must be basic or sharp, got '" + s + "'");
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::holds_thm1: return "HoldsThm1";
    case VerdictKind::holds_thm3: return "HoldsThm3";
    case VerdictKind::holds_thm4: return "HoldsThm4";
    case VerdictKind::holds_thm5: return "HoldsThm5";
    case VerdictKind::holds_thm8: return "HoldsThm8";
    case VerdictKind::fails_thm1: return "FailsThm1";
    case VerdictKind::fails_thm6: return "FailsThm6";
    case VerdictKind::fails_thm7: return "FailsThm7";
    case VerdictKind::inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

int theorem_of(VerdictKind k) {
  switch (k) {
    case VerdictKind::holds_thm1:
    case VerdictKind::fails_thm1: return 1;
    case VerdictKind::holds_thm3: return 3;
    case VerdictKind::holds_thm4: return 4;
    case VerdictKind::holds_thm5: return 5;
    case VerdictKind::fails_thm6: return 6;
    case VerdictKind::fails_thm7: return 7;
    case VerdictKind::holds_thm8: return 8;
    case VerdictKind::inconclusive: return 0;
  }
  return 0;
}

bool is_holds(VerdictKind k) {
  return k == VerdictKind::holds_thm1 || k == VerdictKind::holds_thm3 || k == VerdictKind::holds_thm4 ||
         k == VerdictKind::holds_thm5 || k == VerdictKind::holds_thm8;
}

bool is_fails(VerdictKind k) {
  return k == VerdictKind::fails_thm1 || k == VerdictKind::fails_thm6 || k == VerdictKind::fails_thm7;
}

EigenSummary summarize(const std::string& label, const EigenPair& e) {
  EigenSummary s;
  s.label = label;
  s.lambda = e.lambda;
  s.cw = e.cw;
  s.iterations = e.iterations;
  s.residual = e.residual;
  s.min_right = *std::min_element(e.right.begin(), e.right.end());
  s.min_left = *std::min_element(e.left.begin(), e.left.end());
  return s;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tolerance(const CertifyOptions& opts, double lambda_scale) {
  return opts.tol_cond * (1.0 + std::abs(lambda_scale));
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool satisfied(double margin, bool strict, double tol) { return strict ? margin > tol : margin >= -tol; }

Witness witness_at(const Grid& grid, std::size_t node) {
  Witness w;
  w.node = node;
  const auto p = grid.point(node);
  w.point.assign(p.begin(), p.begin() + grid.dim());
  return w;
}

double plus_at(const SampledSystem& sys, std::size_t k, std::size_t l, std::size_t node) {
  return std::max(sys.coupling(k, l).values[node], 0.0);
}

// Evaluates  lambda_j - eps_j + m_jj^+(x) (pointwise, all x)  and
// lambda_j - eps_j + sum_k m_kj^+(x0) (at one x0 for all j), the shared shape
// of the sufficient conditions. Species with strict_col[j] need > tol at x0,
// the rest >= -tol; the diagonal test is strict where strict_diag[j].
struct ConditionScan {
  std::vector<Condition> conditions;
  double diagonal_margin = kInf;
  double column_margin = -kInf;
  std::optional<std::size_t> x0;
  bool holds = false;
};

ConditionScan scan_conditions(const SampledSystem& sys, const std::vector<double>& lam,
                              const std::vector<bool>& strict_diag, const std::vector<bool>& strict_col,
                              double tol) {
  const std::size_t n = sys.species();
  const auto& nodes = sys.grid.interior_nodes();
  ConditionScan out;
  bool all = true;
  for (std::size_t j = 0; j < n; ++j) {
    double worst = kInf;
    std::size_t at = nodes.front();
    for (auto node : nodes) {
      const double v = lam[j] + plus_at(sys, j, j, node);
      if (v < worst) {
        worst = v;
        at = node;
      }
    }
    const bool ok = satisfied(worst, strict_diag[j], tol);
    all = all && ok;
    out.diagonal_margin = std::min(out.diagonal_margin, worst);
    out.conditions.push_back({"diagonal", static_cast<int>(j), worst, strict_diag[j], ok, at});
  }

  const bool any_strict = std::any_of(strict_col.begin(), strict_col.end(), [](bool b) { return b; });
  std::vector<double> col(n);
  for (auto node : nodes) {
    bool slack_ok = true;
    double score = kInf;
    for (std::size_t j = 0; j < n; ++j) {
      double c = lam[j];
      for (std::size_t k = 0; k < n; ++k) c += plus_at(sys, k, j, node);
      if (strict_col[j] || !any_strict) score = std::min(score, c);
      if (!strict_col[j] && c < -tol) slack_ok = false;
    }
    if (slack_ok && score > out.column_margin) {
      out.column_margin = score;
      out.x0 = node;
    }
  }
  if (!out.x0) {
    out.x0 = nodes.front();
    out.column_margin = -kInf;
  }
  bool col_ok = true;
  for (std::size_t j = 0; j < n; ++j) {
    double c = lam[j];
    for (std::size_t k = 0; k < n; ++k) c += plus_at(sys, k, j, *out.x0);
    const bool ok = satisfied(c, strict_col[j], tol);
    col_ok = col_ok && ok;
    out.conditions.push_back({"column_sum", static_cast<int>(j), c, strict_col[j], ok, *out.x0});
  }
  out.holds = all && col_ok;
  return out;
}

// min over x, j of sum_k (delta_jk lambda_k + m_kj^+(x)) w_k(x) / max_k w_k(x),
// with w_k the positive adjoint eigenfunctions (interior values per species).
double sharp_margin(const SampledSystem& sys, const std::vector<double>& lam,
                    const std::vector<std::vector<double>>& w) {
  const std::size_t n = sys.species();
  const auto& nodes = sys.grid.interior_nodes();
  double worst = kInf;
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    double wmax = 0.0;
    for (std::size_t k = 0; k < n; ++k) wmax = std::max(wmax, w[k][q]);
    for (std::size_t j = 0; j < n; ++j) {
      double s = lam[j] * w[j][q];
      for (std::size_t k = 0; k < n; ++k) s += plus_at(sys, k, j, nodes[q]) * w[k][q];
      worst = std::min(worst, s / wmax);
    }
  }
  return worst;
}

std::vector<std::vector<double>> split_blocks(const std::vector<double>& v, std::size_t blocks) {
  const std::size_t per = v.size() / blocks;
  std::vector<std::vector<double>> out(blocks);
  for (std::size_t b = 0; b < blocks; ++b) out[b].assign(v.begin() + b * per, v.begin() + (b + 1) * per);
  return out;
}

void apply_scan(Verdict& v, const ConditionScan& scan, const Grid& grid) {
  v.conditions = scan.conditions;
  v.diagonal_margin = scan.diagonal_margin;
  v.column_sum_margin = scan.column_margin;
  if (scan.x0) v.x0 = witness_at(grid, *scan.x0);
}

bool offdiag_plus_present(const SampledSystem& sys) {
  for (std::size_t k = 0; k < sys.species(); ++k) {
    for (std::size_t l = 0; l < sys.species(); ++l) {
      if (k != l && plus_present(sys.coupling(k, l))) return true;
    }
  }
  return false;
}

constexpr const char* kSufficientLabel = "sufficient condition";

}  // namespace

Verdict check_thm1(const SampledSystem& sys, const CertifyOptions& opts) {
  if (offdiag_plus_present(sys)) {
    throw Error(ErrorCode::structure_unsupported, "principal eigenvalue criterion needs cooperative coupling");
  }
  Verdict v;
  v.mode = opts.mode;
  v.structure = classify_structure(sys);
  v.label = "principal eigenvalue criterion";
  const AssembledSystem full = assemble_system(sys, CouplingMode::full);
  const EigenPair e = principal_eigenpair(full.A, opts.eig);
  v.lambda = e.lambda;
  v.cw = e.cw;
  v.eigen.push_back(summarize("L+M", e));
  const double tol = tolerance(opts, e.lambda);
  v.conditions.push_back({"principal_eigenvalue", -1, e.lambda, true, e.lambda > tol, std::nullopt});
  if (e.lambda > tol) {
    v.kind = VerdictKind::holds_thm1;
    return v;
  }
  if (e.lambda >= -tol) {
    v.kind = VerdictKind::inconclusive;
    v.reason = "principal eigenvalue is zero within tolerance";
    return v;
  }
  Counterexample ce;
  ce.w = e.right;
  const auto aw = matvec(full.A, ce.w);
  ce.norm_a = full.A.norm_inf();
  ce.residual_max = *std::max_element(aw.begin(), aw.end());
  ce.min_w = *std::min_element(ce.w.begin(), ce.w.end());
  ce.max_w = *std::max_element(ce.w.begin(), ce.w.end());
  ce.verified = ce.min_w >= 0.0 && std::abs(ce.max_w - 1.0) <= 1e-12 &&
                ce.residual_max <= kCounterexampleTol * ce.norm_a;
  if (ce.verified) {
    v.kind = VerdictKind::fails_thm1;
    v.label = "principal eigenvalue is negative";
    v.counterexample = std::move(ce);
  } else {
    v.kind = VerdictKind::inconclusive;
    v.reason = "negative principal eigenvalue but the eigenfunction counterexample did not verify";
  }
  return v;
}

Verdict check_thm3(const SampledSystem& sys, const CertifyOptions& opts) {
  const std::size_t n = sys.species();
  Verdict v;
  v.mode = opts.mode;
  v.structure = classify_structure(sys);
  if (v.structure.kind != StructureKind::irreducible_cooperative_part) {
    throw Error(ErrorCode::structure_unsupported, "irreducible cooperative part required");
  }
  v.label = kSufficientLabel;
  const EigenPair e = cooperative_eigen(sys, opts.eig);
  v.lambda = e.lambda;
  v.cw = e.cw;
  v.eigen.push_back(summarize("L+M-", e));
  const double tol = tolerance(opts, e.lambda);
  const std::vector<double> lam(n, e.lambda);
  const auto scan = scan_conditions(sys, lam, std::vector<bool>(n, false), std::vector<bool>(n, true), tol);
  apply_scan(v, scan, sys.grid);
  bool holds = scan.holds;
  if (opts.mode == Mode::sharp) {
    const double s = sharp_margin(sys, lam, split_blocks(e.left, n));
    v.sharp_margin = s;
    v.conditions.push_back({"sharp", -1, s, true, s > tol, std::nullopt});
    holds = holds || s > tol;
  }
  v.kind = holds ? VerdictKind::holds_thm3 : VerdictKind::inconclusive;
  if (!holds) v.reason = "sufficient conditions are not met";
  return v;
}

Verdict check_thm4(const SampledSystem& sys, const CertifyOptions& opts) {
  const std::size_t n = sys.species();
  Verdict v;
  v.mode = opts.mode;
  v.structure = classify_structure(sys);
  std::vector<std::vector<std::size_t>> blocks = v.structure.blocks;
  if (v.structure.kind == StructureKind::irreducible_cooperative_part && n == 1) blocks = {{0}};
  if (blocks.empty()) {
    throw Error(ErrorCode::structure_unsupported,
                "block-wise eigenvalue conditions need a block-diagonal cooperative part");
  }
  v.label = kSufficientLabel;
  std::vector<double> lam(n);
  std::vector<std::vector<double>> left(n);
  double scale = 0.0;
  for (const auto& block : blocks) {
    const EigenPair e = block_eigen(sys, block, opts.eig);
    std::string label = "L_" + std::to_string(block.front() + 1);
    if (block.size() > 1) {
      label = "block";
      for (auto s : block) label += " " + std::to_string(s + 1);
    }
    v.eigen.push_back(summarize(label, e));
    const auto parts = split_blocks(e.left, block.size());
    for (std::size_t b = 0; b < block.size(); ++b) {
      lam[block[b]] = e.lambda;
      left[block[b]] = parts[b];
    }
    scale = std::max(scale, std::abs(e.lambda));
  }
  v.lambdas = lam;
  const double tol = tolerance(opts, scale);
  const auto scan = scan_conditions(sys, lam, std::vector<bool>(n, false), std::vector<bool>(n, true), tol);
  apply_scan(v, scan, sys.grid);
  bool holds = scan.holds;
  if (opts.mode == Mode::sharp) {
    const double s = sharp_margin(sys, lam, left);
    v.sharp_margin = s;
    v.conditions.push_back({"sharp", -1, s, true, s > tol, std::nullopt});
    holds = holds || s > tol;
  }
  v.kind = holds ? VerdictKind::holds_thm4 : VerdictKind::inconclusive;
  if (!holds) v.reason = "sufficient conditions are not met";
  return v;
}

Verdict check_thm5(const SampledSystem& sys, const CertifyOptions& opts) {
  const std::size_t n = sys.species();
  Verdict v;
  v.mode = opts.mode;
  v.structure = classify_structure(sys);
  std::vector<std::size_t> order = v.structure.order;
  if (v.structure.kind == StructureKind::diagonal_minus || n == 1) {
    order.resize(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
  } else if (v.structure.kind != StructureKind::triangular_minus) {
    throw Error(ErrorCode::structure_unsupported, "triangular cooperative part required");
  }
  v.label = kSufficientLabel;
  if (opts.mode == Mode::sharp) v.notes.push_back("sharp mode has no separate form here; basic conditions used");
  const SampledSystem p = permute_species(sys, order);
  const auto& nodes = p.grid.interior_nodes();

  std::vector<double> lam(n);
  std::vector<EigenPair> eig;
  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    eig.push_back(component_eigen(p, j, opts.eig));
    lam[j] = eig.back().lambda;
    scale = std::max(scale, std::abs(lam[j]));
  }
  const double tol = tolerance(opts, scale);

  // Feasibility with epsilon -> 0+: the first species may sit at zero margin,
  // the others need strict slack that epsilon then takes half of.
  std::vector<bool> strict(n, true);
  strict[0] = false;
  const auto limit = scan_conditions(p, lam, strict, strict, tol);
  std::vector<double> diag(n, kInf);
  for (const auto& c : limit.conditions) {
    if (c.name == "diagonal") diag[static_cast<std::size_t>(c.species)] = c.margin;
  }
  std::vector<double> slacks;
  std::string why;
  if (diag[0] < -tol) why = "species " + std::to_string(order[0] + 1) + " has a negative diagonal margin";
  for (std::size_t j = 1; j < n && why.empty(); ++j) {
    if (diag[j] > tol) {
      slacks.push_back(diag[j]);
    } else {
      why = "species " + std::to_string(order[j] + 1) + " has no strict diagonal slack";
    }
  }
  if (why.empty()) {
    if (n == 1) {
      if (limit.column_margin < -tol) why = "column-sum condition fails";
      slacks.push_back(std::max(limit.column_margin, diag[0]));
    } else if (limit.column_margin > tol) {
      slacks.push_back(limit.column_margin);
    } else {
      why = "no node has strict column-sum margins for all species";
    }
  }
  if (!why.empty()) throw Error(ErrorCode::infeasible_epsilon, "no positive epsilon: " + why);
  double eps = 0.5 * *std::min_element(slacks.begin(), slacks.end());
  if (!(eps > 0.0)) {
    if (n == 1) {
      eps = 0.5 * tol;
    } else {
      throw Error(ErrorCode::infeasible_epsilon, "no positive epsilon: zero slack");
    }
  }

  std::vector<double> lam_eps = lam;
  for (std::size_t j = 1; j < n; ++j) lam_eps[j] -= eps;
  const auto scan = scan_conditions(p, lam_eps, strict, strict, tol);

  // Inductive positive functions.
  const std::size_t n_int = nodes.size();
  std::vector<std::vector<double>> wt(n);
  wt[0] = eig[0].right;
  bool positive = *std::min_element(wt[0].begin(), wt[0].end()) > 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<double> rhs(n_int, 0.0);
    for (std::size_t i = 0; i < j; ++i) {
      const auto& mji = p.coupling(j, i).values;
      for (std::size_t q = 0; q < n_int; ++q) rhs[q] += std::abs(std::min(mji[nodes[q]], 0.0)) * wt[i][q];
    }
    if (max_abs(rhs) == 0.0) {
      wt[j] = eig[j].right;
    } else {
      SubsystemOptions so;
      so.species = {j};
      const SparseMat a = assemble_system(p, CouplingMode::cooperative_only, so).A;
      TripletBuilder tb(n_int, n_int);
      for (std::size_t i = 0; i < n_int; ++i) {
        for (std::size_t q = a.row_ptr()[i]; q < a.row_ptr()[i + 1]; ++q) tb.add(i, a.col_idx()[q], a.vals()[q]);
        tb.add(i, i, -(lam[j] - eps));
      }
      wt[j] = lu_solve(tb.build(), rhs);
    }
    positive = positive && *std::min_element(wt[j].begin(), wt[j].end()) > 0.0;
  }

  // Report in the caller's species order.
  v.epsilon = eps;
  v.lambdas.assign(n, 0.0);
  v.wtilde.assign(n, {});
  for (std::size_t j = 0; j < n; ++j) {
    v.lambdas[order[j]] = lam[j];
    v.wtilde[order[j]] = wt[j];
    v.eigen.push_back(summarize("L_" + std::to_string(order[j] + 1), eig[j]));
  }
  v.conditions = scan.conditions;
  for (auto& c : v.conditions) c.species = static_cast<int>(order[static_cast<std::size_t>(c.species)]);
  v.diagonal_margin = scan.diagonal_margin;
  v.column_sum_margin = scan.column_margin;
  if (scan.x0) v.x0 = witness_at(p.grid, *scan.x0);
  if (!scan.holds) {
    v.kind = VerdictKind::inconclusive;
    v.reason = "conditions fail at the chosen epsilon";
  } else if (!positive) {
    v.kind = VerdictKind::inconclusive;
    v.reason = "constructed function is not strictly positive";
  } else {
    v.kind = VerdictKind::holds_thm5;
  }
  return v;
}

Counterexample build_counterexample(const SampledSystem& sys, std::size_t j, FailureKind which,
                                    const EigenOptions& opts) {
  if (j >= sys.species()) throw Error(ErrorCode::validation, "species index out of range");
  const AssembledSystem full = assemble_system(sys, CouplingMode::full);
  const std::size_t n_int = full.n_int();
  Counterexample ce;
  ce.species = j;
  if (which == FailureKind::thm6) {
    const EigenPair e = component_eigen(sys, j, opts);
    ce.w.assign(full.dof(), 0.0);
    std::copy(e.right.begin(), e.right.end(), ce.w.begin() + static_cast<std::ptrdiff_t>(j * n_int));
  } else {
    ce.w = cooperative_eigen(sys, opts).right;
  }
  const auto aw = matvec(full.A, ce.w);
  ce.norm_a = full.A.norm_inf();
  ce.residual_max = *std::max_element(aw.begin(), aw.end());
  ce.min_w = *std::min_element(ce.w.begin(), ce.w.end());
  ce.max_w = *std::max_element(ce.w.begin(), ce.w.end());
  ce.verified = ce.min_w >= 0.0 && std::abs(ce.max_w - 1.0) <= 1e-12 &&
                ce.residual_max <= kCounterexampleTol * ce.norm_a;
  return ce;
}

std::optional<Verdict> check_failure(const SampledSystem& sys, const CertifyOptions& opts,
                                     std::vector<std::string>* notes) {
  const std::size_t n = sys.species();
  const StructureClass cls = classify_structure(sys);
  const bool irreducible = cls.kind == StructureKind::irreducible_cooperative_part;
  const auto& nodes = sys.grid.interior_nodes();
  auto note = [&](const std::string& s) {
    if (notes) notes->push_back(s);
  };

  std::optional<EigenPair> system_eig;
  if (irreducible) {
    try {
      system_eig = cooperative_eigen(sys, opts.eig);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::not_irreducible) throw;
      note(std::string("failure check skipped: ") + e.what());
      return std::nullopt;
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    const EigenPair e = irreducible ? *system_eig : component_eigen(sys, j, opts.eig);
    const double tol = tolerance(opts, e.lambda);
    double worst = -kInf;
    for (auto node : nodes) worst = std::max(worst, e.lambda + plus_at(sys, j, j, node));
    if (!(worst < -tol)) continue;

    bool gate = true;
    for (std::size_t k = 0; k < n && gate; ++k) {
      for (std::size_t l = 0; l < n && gate; ++l) {
        if (k == l && k == j) continue;
        if (irreducible) {
          if (plus_present(sys.coupling(k, l))) gate = false;
        } else if (k != l && (k == j || l == j) && plus_present(sys.coupling(k, l))) {
          gate = false;
        }
      }
    }
    const FailureKind which = irreducible ? FailureKind::thm7 : FailureKind::thm6;
    Counterexample ce = build_counterexample(sys, j, which, opts.eig);
    const std::string tag = irreducible ? "Theorem 7" : "Theorem 6";
    if (!gate || !ce.verified) {
      note("FailureCandidate: species " + std::to_string(j + 1) + " meets the " + tag +
           " eigenvalue test but " +
           (!gate ? std::string("M+ has competitive entries in its row or column")
                  : std::string("the counterexample did not verify")) +
           " (max A w = " + std::to_string(ce.residual_max) + ")");
      continue;
    }
    Verdict v;
    v.kind = irreducible ? VerdictKind::fails_thm7 : VerdictKind::fails_thm6;
    v.mode = opts.mode;
    v.structure = cls;
    v.label = "verified counterexample";
    v.lambda = e.lambda;
    v.cw = e.cw;
    v.eigen.push_back(summarize(irreducible ? "L+M-" : "L_" + std::to_string(j + 1), e));
    v.failing_species = j;
    v.conditions.push_back({"negative_diagonal", static_cast<int>(j), worst, true, true, std::nullopt});
    v.counterexample = std::move(ce);
    if (!irreducible) {
      v.notes.push_back("competitive part required to vanish in both row and column of the failing species");
    }
    return v;
  }
  return std::nullopt;
}

Verdict certify(const SampledSystem& sys, const CertifyOptions& opts) {
  std::vector<std::string> notes;
  for (std::size_t k = 0; k < sys.species(); ++k) {
    const auto bounds = check_ellipticity(sys.ops[k], sys.grid);
    if (bounds.max_asymmetry > kAsymmetryWarn) {
      notes.push_back("species " + std::to_string(k + 1) + ": diffusion tensor asymmetric by " +
                      std::to_string(bounds.max_asymmetry));
    }
  }
  {
    const AssembledSystem coop = assemble_system(sys, CouplingMode::cooperative_only);
    if (!coop.z_matrix) {
      const auto z = check_z_matrix(coop.A, coop.species(), coop.n_int());
      throw Error(ErrorCode::structure_unsupported,
                  "discrete cooperative operator is not a Z-matrix (entry " + std::to_string(z.value) +
                      " in species block " + std::to_string(z.row_species + 1) + "," +
                      std::to_string(z.col_species + 1) + "); cross-derivative terms too large for this grid");
    }
  }
  const StructureClass cls = classify_structure(sys);
  const GaugeResult gauge = find_gauge(sys);

  Verdict v;
  std::optional<Verdict> failure = check_failure(sys, opts, &notes);
  if (failure) {
    v = std::move(*failure);
  } else {
    try {
      if (cls.cooperative &&
          (cls.kind == StructureKind::irreducible_cooperative_part || sys.species() == 1)) {
        v = check_thm1(sys, opts);
      } else if (cls.kind == StructureKind::irreducible_cooperative_part) {
        v = check_thm3(sys, opts);
      } else if (cls.kind == StructureKind::diagonal_minus || cls.kind == StructureKind::block_diagonal_minus) {
        v = check_thm4(sys, opts);
      } else if (cls.kind == StructureKind::triangular_minus) {
        v = check_thm5(sys, opts);
      } else {
        v.kind = VerdictKind::inconclusive;
        v.reason = "no applicable theorem: the cooperative part is block triangular with coupled blocks";
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::infeasible_epsilon && e.code() != ErrorCode::not_irreducible) throw;
      v = Verdict{};
      v.kind = VerdictKind::inconclusive;
      v.reason = e.what();
      v.errors.push_back(std::string(to_string(e.code())) + ": " + e.what());
    }
  }
  v.mode = opts.mode;
  v.structure = cls;
  v.gauge = gauge;
  v.notes.insert(v.notes.begin(), notes.begin(), notes.end());

  if (opts.run_oracle) {
    const AssembledSystem full = assemble_system(sys, CouplingMode::full);
    if (full.dof() <= opts.oracle_max_dof) {
      try {
        v.oracle = inverse_positivity(full, std::nullopt, opts.oracle_max_dof, opts.tol_op);
        if (gauge.sigma &&
            std::any_of(gauge.sigma->begin(), gauge.sigma->end(), [](int s) { return s < 0; })) {
          v.gauged_oracle = inverse_positivity(full, gauge.sigma, opts.oracle_max_dof, opts.tol_op);
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::singular_matrix) throw;
        v.errors.push_back(std::string(to_string(e.code())) + ": oracle: " + e.what());
      }
    } else {
      v.notes.push_back("oracle skipped: " + std::to_string(full.dof()) + " unknowns exceed the dense budget");
    }
  }
  return v;
}

Verdict certify(const SystemSpec& spec, const CertifyOptions& opts) { return certify(sample_system(spec), opts); }

}  // namespace elcomp
