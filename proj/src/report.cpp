#include "elcomp/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "elcomp/assembly.hpp"
#include "elcomp/problem_file.hpp"
#include "elcomp/quasilinear.hpp"
#include "elcomp/structure.hpp"

namespace elcomp {

std::string tool_version() { return ELCOMP_VERSION; }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse:
    case ErrorCode::validation:
    case ErrorCode::eval_domain:
    case ErrorCode::bad_grid:
    case ErrorCode::empty_subdomain:
    case ErrorCode::dim_mismatch:
    case ErrorCode::non_elliptic:
    case ErrorCode::non_elliptic_linearization:
    case ErrorCode::io:
      return exit_input;
    case ErrorCode::singular_matrix:
    case ErrorCode::no_convergence:
    case ErrorCode::too_large:
    case ErrorCode::not_nonnegative:
    case ErrorCode::infeasible_epsilon:
      return exit_numerical;
    case ErrorCode::not_z_matrix:
    case ErrorCode::not_irreducible:
    case ErrorCode::structure_unsupported:
      return exit_structure;
  }
  return exit_input;
}

namespace {

Json interval(const Interval& i) { return Json::array({i.lo, i.hi}); }

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

double min_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end()); }

std::string error_text(const Error& e) { return std::string(to_string(e.code())) + ": " + e.what(); }

}  // namespace

Json to_json(const EigenSummary& e) {
  return {{"label", e.label},         {"lambda", e.lambda},       {"cw", interval(e.cw)},
          {"iterations", e.iterations}, {"residual", e.residual}, {"min_right", e.min_right},
          {"min_left", e.min_left}};
}

Json to_json(const StructureClass& s) {
  Json blocks = Json::array();
  for (const auto& b : s.blocks) {
    Json one = Json::array();
    for (auto k : b) one.push_back(k + 1);
    blocks.push_back(one);
  }
  Json order = Json::array();
  for (auto k : s.order) order.push_back(k + 1);
  return {{"kind", to_string(s.kind)}, {"cooperative", s.cooperative}, {"blocks", blocks}, {"order", order}};
}

Json to_json(const GaugeResult& g) {
  Json j;
  j["sigma"] = g.sigma ? Json(*g.sigma) : Json(nullptr);
  if (!g.reason.empty()) {
    j["reason"] = g.reason;
    j["species"] = Json::array({*g.species_a + 1, *g.species_b + 1});
  }
  return j;
}

Json to_json(const OracleReport& r) {
  Json j;
  j["inverse_positive"] = r.inverse_positive ? Json(*r.inverse_positive) : Json(nullptr);
  j["min_entry"] = std::isfinite(r.min_entry) ? Json(r.min_entry) : Json(nullptr);
  j["scale"] = r.scale;
  j["witness"] = Json::array({r.witness_row, r.witness_col});
  j["boundary_monotone"] = r.boundary_monotone ? Json(*r.boundary_monotone) : Json(nullptr);
  j["min_boundary_entry"] = r.min_boundary_entry;
  j["gauge"] = r.gauge ? Json(*r.gauge) : Json(nullptr);
  j["dof"] = r.dof;
  j["sampled"] = r.sampled;
  if (r.sampled) j["trials"] = r.trials;
  return j;
}

Json to_json(const Verdict& v, const Grid& grid) {
  Json j;
  j["verdict"] = to_string(v.kind);
  const int thm = theorem_of(v.kind);
  j["theorem"] = thm ? Json(thm) : Json(nullptr);
  if (v.via) j["via"] = to_string(*v.via);
  j["label"] = v.label;
  j["reason"] = v.reason;
  j["mode"] = to_string(v.mode);
  j["structure"] = to_json(v.structure);
  j["lambda"] = optional_number(v.lambda);
  j["cw"] = v.cw ? interval(*v.cw) : Json(nullptr);
  j["lambdas"] = v.lambdas;

  Json margins = Json::object();
  if (v.column_sum_margin) margins["column_sum"] = std::isfinite(*v.column_sum_margin) ? Json(*v.column_sum_margin) : Json(nullptr);
  if (v.diagonal_margin) margins["diagonal"] = *v.diagonal_margin;
  if (v.sharp_margin) margins["sharp"] = *v.sharp_margin;
  for (const auto& c : v.conditions) {
    if (c.name == "principal_eigenvalue" || c.name == "negative_diagonal") margins[c.name] = c.margin;
  }
  j["margins"] = margins;

  Json conds = Json::array();
  for (const auto& c : v.conditions) {
    Json cj = {{"name", c.name},         {"margin", std::isfinite(c.margin) ? Json(c.margin) : Json(nullptr)},
               {"strict", c.strict},     {"satisfied", c.satisfied},
               {"species", c.species >= 0 ? Json(c.species + 1) : Json(nullptr)}};
    cj["node"] = c.node ? Json(*c.node) : Json(nullptr);
    conds.push_back(cj);
  }
  j["conditions"] = conds;
  if (v.x0) j["x0"] = {{"node", v.x0->node}, {"point", v.x0->point}};
  if (v.epsilon) j["epsilon"] = *v.epsilon;
  if (v.failing_species) j["failing_species"] = *v.failing_species + 1;
  if (v.counterexample) {
    const auto& ce = *v.counterexample;
    j["counterexample"] = {{"species", ce.species + 1}, {"verified", ce.verified},  {"residual_max", ce.residual_max},
                           {"norm_a", ce.norm_a},       {"min_w", ce.min_w},        {"max_w", ce.max_w}};
  }
  if (!v.wtilde.empty()) {
    Json mins = Json::array();
    for (const auto& w : v.wtilde) mins.push_back(min_of(w));
    j["wtilde_min"] = mins;
  }
  Json eig = Json::array();
  for (const auto& e : v.eigen) eig.push_back(to_json(e));
  j["eigen"] = eig;
  if (v.gauge) j["gauge"] = to_json(*v.gauge);
  if (v.oracle) j["oracle"] = to_json(*v.oracle);
  if (v.gauged_oracle) j["gauged_oracle"] = to_json(*v.gauged_oracle);
  j["notes"] = v.notes;
  j["errors"] = v.errors;
  (void)grid;
  return j;
}

std::string describe(const Verdict& v) {
  std::ostringstream os;
  os << "verdict: " << to_string(v.kind);
  if (v.via) os << " (via " << to_string(*v.via) << ")";
  if (!v.label.empty()) os << " [" << v.label << "]";
  os << "\nstructure: " << to_string(v.structure.kind) << (v.structure.cooperative ? " (cooperative)" : "") << "\n";
  if (v.lambda) os << "lambda: " << format_double(*v.lambda) << "\n";
  if (!v.lambdas.empty()) {
    os << "lambda_j:";
    for (double l : v.lambdas) os << " " << format_double(l);
    os << "\n";
  }
  for (const auto& c : v.conditions) {
    os << "  " << c.name;
    if (c.species >= 0) os << "[" << c.species + 1 << "]";
    os << " margin " << format_double(c.margin) << (c.strict ? " (strict)" : " (slack)")
       << (c.satisfied ? " ok" : " FAILS") << "\n";
  }
  if (v.epsilon) os << "epsilon: " << format_double(*v.epsilon) << "\n";
  if (v.counterexample) {
    os << "counterexample: species " << v.counterexample->species + 1 << ", max(Aw) "
       << format_double(v.counterexample->residual_max) << (v.counterexample->verified ? ", verified" : ", NOT verified")
       << "\n";
  }
  if (v.gauge) {
    if (v.gauge->sigma) {
      os << "gauge:";
      for (int s : *v.gauge->sigma) os << (s > 0 ? " +1" : " -1");
      os << "\n";
    } else {
      os << "gauge: none (" << v.gauge->reason << ")\n";
    }
  }
  auto oracle_line = [&](const char* name, const OracleReport& r) {
    os << name << ": inverse_positive="
       << (r.inverse_positive ? (*r.inverse_positive ? "true" : "false") : "undetermined")
       << " min_entry=" << format_double(r.min_entry) << " dof=" << r.dof << "\n";
  };
  if (v.oracle) oracle_line("oracle", *v.oracle);
  if (v.gauged_oracle) oracle_line("gauged oracle", *v.gauged_oracle);
  if (!v.reason.empty()) os << "reason: " << v.reason << "\n";
  for (const auto& n : v.notes) os << "note: " << n << "\n";
  for (const auto& e : v.errors) os << "error: " << e << "\n";
  return os.str();
}

std::string canonical_dump(const Json& report) {
  Json copy = report;
  copy.erase("timings");
  return copy.dump(2);
}

namespace {

Json envelope(const std::string& command, const CommandArgs& args) {
  Json j;
  j["command"] = command;
  j["tool_version"] = tool_version();
  j["errors"] = Json::array();
  j["settings"] = {{"tol_eig", args.certify.eig.tol_eig},
                   {"tol_cond", args.certify.tol_cond},
                   {"max_iter", args.certify.eig.max_iter},
                   {"oracle_max_dof", args.certify.oracle_max_dof},
                   {"mode", to_string(args.certify.mode)},
                   {"seed", args.seed}};
  return j;
}

// Fills verdict-shaped keys so every report carries them.
void default_verdict_keys(Json& j) {
  for (const char* k : {"verdict", "theorem", "lambda", "cw"}) {
    if (!j.contains(k)) j[k] = nullptr;
  }
  if (!j.contains("margins")) j["margins"] = Json::object();
}

void merge(Json& dst, const Json& src) {
  for (auto it = src.begin(); it != src.end(); ++it) {
    if (it.key() == "errors") {
      for (const auto& e : it.value()) dst["errors"].push_back(e);
    } else {
      dst[it.key()] = it.value();
    }
  }
}

const SystemSpec& need_linear(const Problem& p, const std::string& command) {
  if (!p.linear) throw Error(ErrorCode::validation, command + " needs a linear problem; use thm8 or linearize");
  return *p.linear;
}

const QuasiSpec& need_quasi(const Problem& p, const std::string& command) {
  if (!p.quasi) throw Error(ErrorCode::validation, command + " needs a [quasilinear] problem");
  return *p.quasi;
}

std::vector<NamedField> named_block(const std::string& prefix, const std::vector<std::vector<double>>& interior,
                                    const std::vector<std::vector<double>>& boundary, const Grid& grid) {
  std::vector<NamedField> out;
  for (std::size_t k = 0; k < interior.size(); ++k) {
    SampledField f{grid.id(), std::vector<double>(grid.node_count(), 0.0)};
    for (std::size_t q = 0; q < grid.interior_count(); ++q) f.values[grid.interior_nodes()[q]] = interior[k][q];
    if (!boundary.empty()) {
      for (std::size_t b = 0; b < grid.boundary_count(); ++b) f.values[grid.boundary_nodes()[b]] = boundary[k][b];
    }
    out.push_back({prefix + std::to_string(k + 1), std::move(f)});
  }
  return out;
}

std::vector<std::vector<double>> split(const std::vector<double>& v, std::size_t parts) {
  std::vector<std::vector<double>> out(parts);
  const std::size_t per = v.size() / parts;
  for (std::size_t k = 0; k < parts; ++k) out[k].assign(v.begin() + k * per, v.begin() + (k + 1) * per);
  return out;
}

Json eigen_json(const EigenPair& e) {
  return {{"lambda", e.lambda},
          {"cw", interval(e.cw)},
          {"iterations", e.iterations},
          {"residual", e.residual},
          {"lambda_left", e.lambda_left},
          {"shift", e.shift},
          {"min_right", min_of(e.right)},
          {"min_left", min_of(e.left)}};
}

Json field_stats(const SampledField& f) {
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  return {{"min", *lo}, {"max", *hi}};
}

Json run_inner(const std::string& command, const CommandArgs& args, const Problem& problem, std::string& text) {
  Json j;
  std::ostringstream os;
  const Grid& grid = problem.grid();
  if (command == "certify" && problem.quasi) {
    // A quasi-linear problem certifies through its linearization.
    return run_inner("thm8", args, problem, text);
  } else if (command == "certify") {
    const Verdict v = certify(need_linear(problem, command), args.certify);
    j = to_json(v, grid);
    os << describe(v);
  } else if (command == "eigen") {
    const SampledSystem sys = sample_system(need_linear(problem, command));
    EigenPair e;
    std::string which;
    if (args.component) {
      if (*args.component == 0 || *args.component > sys.species()) {
        throw Error(ErrorCode::validation, "--component must be in 1.." + std::to_string(sys.species()));
      }
      e = component_eigen(sys, *args.component - 1, args.certify.eig);
      which = "L_" + std::to_string(*args.component) + " + m_jj^-";
    } else {
      e = cooperative_eigen(sys, args.certify.eig);
      which = "L + M^-";
    }
    j = eigen_json(e);
    j["operator"] = which;
    os << "operator: " << which << "\nlambda: " << format_double(e.lambda) << "\ncw: [" << format_double(e.cw.lo)
       << ", " << format_double(e.cw.hi) << "]\niterations: " << e.iterations << "\n";
  } else if (command == "oracle") {
    const SampledSystem sys = sample_system(need_linear(problem, command));
    const AssembledSystem full = assemble_system(sys, CouplingMode::full);
    std::optional<std::vector<int>> sigma;
    if (args.gauge) {
      const GaugeResult g = find_gauge(sys);
      j["gauge"] = to_json(g);
      if (!g.sigma) throw Error(ErrorCode::structure_unsupported, "no sign gauge exists (" + g.reason + ")");
      sigma = g.sigma;
    }
    const OracleReport r = args.probe ? random_probe(full, *args.probe, args.seed, sigma, args.certify.tol_op)
                                      : inverse_positivity(full, sigma, args.certify.oracle_max_dof, args.certify.tol_op);
    j["oracle"] = to_json(r);
    os << "inverse_positive: "
       << (r.inverse_positive ? (*r.inverse_positive ? "true" : "false") : "undetermined")
       << "\nmin_entry: " << format_double(r.min_entry) << "\ndof: " << r.dof << "\n";
  } else if (command == "solve") {
    SystemSpec spec = need_linear(problem, command);
    SampledSystem sys = sample_system(spec);
    if (args.rhs_file) {
      sys.f = read_block_field(*args.rhs_file, grid, sys.species());
    } else if (!args.builtin) {
      throw Error(ErrorCode::validation, "solve needs --rhs-from-file FILE or --builtin");
    }
    const AssembledSystem full = assemble_system(sys, CouplingMode::full);
    const auto u = solve_system(full);
    const auto check = verify_subsolution(full, u, full.g_vec);
    const auto fields = named_block("u", split(u, sys.species()), split(full.g_vec, sys.species()), grid);
    Json stats = Json::array();
    for (const auto& f : fields) stats.push_back(field_stats(f.field));
    j["solution"] = stats;
    j["residual_max"] = check.max_residual;
    j["dof"] = full.dof();
    if (args.out) {
      write_file(*args.out, format_fields(fields, grid));
      j["out"] = *args.out;
    }
    os << "solved " << full.dof() << " unknowns, max residual " << format_double(check.max_residual) << "\n";
  } else if (command == "counterexample") {
    const SampledSystem sys = sample_system(need_linear(problem, command));
    std::vector<std::string> notes;
    const auto v = check_failure(sys, args.certify, &notes);
    if (v) {
      j = to_json(*v, grid);
      os << describe(*v);
      if (args.out) {
        write_file(*args.out, format_fields(named_block("w", split(v->counterexample->w, sys.species()), {}, grid), grid));
        j["out"] = *args.out;
      }
    } else {
      j["verdict"] = nullptr;
      j["reason"] = "no failure theorem applies";
      os << "no verified counterexample\n";
    }
    j["notes"] = j.contains("notes") ? j["notes"] : Json::array();
    for (const auto& n : notes) {
      j["notes"].push_back(n);
      os << "note: " << n << "\n";
    }
  } else if (command == "gauge") {
    const GaugeResult g = find_gauge(sample_system(need_linear(problem, command)));
    j["gauge"] = to_json(g);
    if (g.sigma) {
      os << "sigma:";
      for (int s : *g.sigma) os << (s > 0 ? " +1" : " -1");
      os << "\n";
    } else {
      os << "no gauge (" << g.reason << ")\n";
    }
  } else if (command == "linearize" || command == "thm8") {
    const QuasiSpec& qs = need_quasi(problem, command);
    if (!args.sub || !args.super) throw Error(ErrorCode::validation, "a quasi-linear problem needs --sub FILE and --super FILE");
    const BlockField u = read_block_field(*args.sub, grid, qs.species());
    const BlockField v = read_block_field(*args.super, grid, qs.species());
    const LinearizedSystem lin = linearize(qs, u, v);
    if (command == "linearize") {
      const std::size_t n = qs.species();
      const auto d = static_cast<std::size_t>(grid.dim());
      Json coeff;
      std::vector<NamedField> dump;
      for (std::size_t l = 0; l < n; ++l) {
        const std::string sl = std::to_string(l + 1);
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t jj = 0; jj < d; ++jj) {
            const std::string name = "B" + sl + "_" + std::to_string(i + 1) + "_" + std::to_string(jj + 1);
            coeff[name] = field_stats(lin.B[l][i * d + jj]);
            dump.push_back({name, lin.B[l][i * d + jj]});
          }
          const std::string b0 = "B0" + sl + "_" + std::to_string(i + 1);
          const std::string h = "H" + sl + "_" + std::to_string(i + 1);
          coeff[b0] = field_stats(lin.B0[l][i]);
          coeff[h] = field_stats(lin.H[l][i]);
          dump.push_back({b0, lin.B0[l][i]});
          dump.push_back({h, lin.H[l][i]});
        }
        for (std::size_t k = 0; k < n; ++k) {
          const std::string name = "E" + sl + "_" + std::to_string(k + 1);
          coeff[name] = field_stats(lin.E[l][k]);
          dump.push_back({name, lin.E[l][k]});
        }
      }
      j["coefficients"] = coeff;
      j["quadrature"] = {{"rule", lin.rule}, {"points", lin.points}};
      j["min_ellipticity"] = lin.min_ellipticity;
      j["structure"] = to_json(classify_structure(lin.system));
      if (args.out) {
        write_file(*args.out, format_fields(dump, grid));
        j["out"] = *args.out;
      }
      os << "linearized " << n << " species with " << lin.rule << "; min ellipticity "
         << format_double(lin.min_ellipticity) << "\n";
    } else {
      const Verdict verdict = check_thm8(lin, args.certify);
      j = to_json(verdict, grid);
      os << describe(verdict);
    }
  } else {
    throw Error(ErrorCode::validation, "unknown command '" + command + "'");
  }
  text = os.str();
  return j;
}

}  // namespace

CommandResult run_command(const std::string& command, const CommandArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  CommandResult out;
  out.report = envelope(command, args);
  out.report["problem"] = args.problem;
  try {
    const std::string source = read_file(args.problem);
    out.report["input_digest"] = hex64(fnv1a64(source));
    const Problem problem = parse_problem(source, args.problem);
    merge(out.report, run_inner(command, args, problem, out.text));
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e.code());
    out.report["errors"].push_back(error_text(e));
    out.text += "error: " + error_text(e) + "\n";
  }
  if (!out.report.contains("input_digest")) out.report["input_digest"] = nullptr;
  default_verdict_keys(out.report);
  const auto t1 = std::chrono::steady_clock::now();
  out.report["timings"] = {{"total_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()}};
  return out;
}

}  // namespace elcomp
