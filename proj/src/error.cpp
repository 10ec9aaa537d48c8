#include "elcomp/error.hpp"

namespace elcomp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::validation: return "ValidationError";
    case ErrorCode::eval_domain: return "EvalDomainError";
    case ErrorCode::bad_grid: return "BadGridSpec";
    case ErrorCode::empty_subdomain: return "EmptySubdomain";
    case ErrorCode::dim_mismatch: return "DimMismatch";
    case ErrorCode::singular_matrix: return "SingularMatrix";
    case ErrorCode::too_large: return "TooLarge";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::not_nonnegative: return "NotNonnegative";
    case ErrorCode::not_z_matrix: return "NotZMatrix";
    case ErrorCode::not_irreducible: return "NotIrreducible";
    case ErrorCode::non_elliptic: return "NonEllipticCoefficient";
    case ErrorCode::non_elliptic_linearization: return "NonEllipticLinearization";
    case ErrorCode::structure_unsupported: return "StructureUnsupported";
    case ErrorCode::infeasible_epsilon: return "InfeasibleEpsilon";
    case ErrorCode::io: return "IoError";
  }
  return "Error";
}

}  // namespace elcomp
