#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace elcomp {

enum class ErrorCode {
  parse,
  validation,
  eval_domain,
  bad_grid,
  empty_subdomain,
  dim_mismatch,
  singular_matrix,
  too_large,
  no_convergence,
  not_nonnegative,
  not_z_matrix,
  not_irreducible,
  non_elliptic,
  non_elliptic_linearization,
  structure_unsupported,
  infeasible_epsilon,
  io,
};

std::string_view to_string(ErrorCode code);

/// Base of every error raised by the library. The code drives CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error in an expression or problem file.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected,
             const std::string& message)
      : Error(ErrorCode::parse, message),
        offset_(offset),
        expected_(std::move(expected)) {}

  /// Byte offset into the parsed text.
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class EvalDomainError : public Error {
 public:
  explicit EvalDomainError(const std::string& message)
      : Error(ErrorCode::eval_domain, message) {}
};

}  // namespace elcomp
