#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vcsp/core.hpp"
#include "vcsp/lp.hpp"
#include "vcsp/operation.hpp"
#include "vcsp/sherali_adams.hpp"

namespace vcsp::io {

/// Reads a whole file; throws InputError if it cannot be opened.
std::string read_file(const std::string& path);
/// Writes a whole file; throws InputError if it cannot be opened.
void write_file(const std::string& path, const std::string& text);

/// Instance format: `vcsp <d> <n>`, relation blocks, constraint lines. `source` prefixes error messages.
Instance parse_instance(const std::string& text, const std::string& source = "<input>");
/// Canonical form: the most frequent value of each relation becomes its default.
/// Constraints with multiplicity m > 1 are written with a trailing `* m`.
std::string format_instance(const Instance& instance);

struct NamedOperation {
  std::string name;
  Operation op;
};

/// One or more `op <name> <arity> <d>` blocks listing every tuple, each closed by `end`.
std::vector<NamedOperation> parse_operations(const std::string& text, const std::string& source = "<input>");
std::string format_operation(const std::string& name, const Operation& op);

/// `sa <d>` followed by `lambda <vars…> | <labels…> = p/q` lines for the non-zero entries.
sa::SaSolution parse_solution(const std::string& text, const std::string& source = "<input>");
void write_solution(std::ostream& os, const sa::SaSolution& lambda);
std::string format_solution(const sa::SaSolution& lambda);

/// `lp <n>`, `min c…`, `row a… <=|=|>= b`, optional `bound j lo hi` (`-inf`/`inf`, `free`), `end`.
lp::LinearProgram parse_lp(const std::string& text, const std::string& source = "<input>");
std::string format_lp(const lp::LinearProgram& lp);

std::string format_tuple(const Tuple& t);

}  // namespace vcsp::io
