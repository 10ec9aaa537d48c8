#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elcomp/quasilinear.hpp"
#include "elcomp/system.hpp"

namespace elcomp {

/// A parsed problem file: exactly one of `linear` / `quasi` is set.
struct Problem {
  std::string name;
  std::optional<SystemSpec> linear;
  std::optional<QuasiSpec> quasi;
  std::string source;

  const Grid& grid() const { return linear ? linear->grid : quasi->grid; }
  std::size_t species() const { return linear ? linear->species() : quasi->species(); }
};

/// Throws ParseError / ValidationError with "name:line:column: message" text.
Problem parse_problem(std::string_view text, const std::string& name = "<input>");
/// Throws IoError when the file cannot be read.
Problem load_problem(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

struct NamedField {
  std::string name;
  SampledField field;
};

/// Field files: "# field <name> <grid id>" followed by one value per node in
/// canonical order; several fields may follow each other in one file.
std::vector<NamedField> parse_fields(std::string_view text, const Grid& grid, const std::string& name = "<fields>");
std::vector<NamedField> read_fields(const std::string& path, const Grid& grid);
std::string format_fields(const std::vector<NamedField>& fields, const Grid& grid);

/// Fields of a block (one per species) from a field file, in file order.
BlockField read_block_field(const std::string& path, const Grid& grid, std::size_t species);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace elcomp
