#include "elcomp/system.hpp"

#include <string>

#include "elcomp/error.hpp"

namespace elcomp {

ScalarOperatorSpec ScalarOperatorSpec::laplacian(int dim) {
  ScalarOperatorSpec op;
  const auto d = static_cast<std::size_t>(dim);
  op.a.assign(d * d, Expr::constant(0.0));
  for (std::size_t i = 0; i < d; ++i) op.a[i * d + i] = Expr::constant(1.0);
  op.b.assign(d, Expr::constant(0.0));
  op.c = Expr::constant(0.0);
  return op;
}

SystemSpec SystemSpec::uniform(const Grid& grid, std::size_t species) {
  SystemSpec spec;
  spec.grid = grid;
  spec.ops.assign(species, ScalarOperatorSpec::laplacian(grid.dim()));
  spec.m.assign(species * species, Expr::constant(0.0));
  spec.f.assign(species, Expr::constant(0.0));
  spec.g.assign(species, Expr::constant(0.0));
  return spec;
}

void validate(const SystemSpec& spec) {
  const std::size_t n = spec.species();
  const int dim = spec.grid.dim();
  const auto d = static_cast<std::size_t>(dim);
  if (n == 0) throw Error(ErrorCode::validation, "system has no species");
  if (spec.m.size() != n * n || spec.f.size() != n || spec.g.size() != n) {
    throw Error(ErrorCode::validation, "coupling, rhs and boundary data must match the species count");
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto& op = spec.ops[k];
    if (op.a.size() != d * d || op.b.size() != d) {
      throw Error(ErrorCode::validation, "species " + std::to_string(k + 1) +
                                             ": diffusion/convection shape does not match dimension");
    }
    for (const auto& e : op.a) validate_spatial(e, dim);
    for (const auto& e : op.b) validate_spatial(e, dim);
    validate_spatial(op.c, dim);
    validate_spatial(spec.f[k], dim);
    validate_spatial(spec.g[k], dim);
  }
  for (const auto& e : spec.m) validate_spatial(e, dim);
}

SampledSystem sample_system(const SystemSpec& spec) {
  validate(spec);
  SampledSystem sys;
  sys.grid = spec.grid;
  for (const auto& op : spec.ops) {
    SampledOperator s;
    for (const auto& e : op.a) s.a.push_back(sample_field(e, spec.grid));
    for (const auto& e : op.b) s.b.push_back(sample_field(e, spec.grid));
    s.c = sample_field(op.c, spec.grid);
    sys.ops.push_back(std::move(s));
  }
  for (const auto& e : spec.m) sys.m.push_back(sample_field(e, spec.grid));
  for (const auto& e : spec.f) sys.f.push_back(sample_field(e, spec.grid));
  for (const auto& e : spec.g) sys.g.push_back(sample_field(e, spec.grid));
  return sys;
}

namespace {

template <typename System>
System permute_impl(const System& sys, const std::vector<std::size_t>& perm) {
  const std::size_t n = sys.species();
  if (perm.size() != n) throw Error(ErrorCode::dim_mismatch, "permutation length does not match species count");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) throw Error(ErrorCode::validation, "not a permutation");
    seen[p] = true;
  }
  System out = sys;
  for (std::size_t i = 0; i < n; ++i) {
    out.ops[i] = sys.ops[perm[i]];
    out.f[i] = sys.f[perm[i]];
    out.g[i] = sys.g[perm[i]];
    for (std::size_t j = 0; j < n; ++j) out.m[i * n + j] = sys.m[perm[i] * n + perm[j]];
  }
  return out;
}

}  // namespace

SampledSystem permute_species(const SampledSystem& sys, const std::vector<std::size_t>& perm) {
  return permute_impl(sys, perm);
}

SystemSpec permute_species(const SystemSpec& spec, const std::vector<std::size_t>& perm) {
  return permute_impl(spec, perm);
}

}  // namespace elcomp
