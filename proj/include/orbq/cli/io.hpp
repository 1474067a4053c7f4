#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "orbq/lattice/gram_lattice.hpp"

namespace orbq::cli
{

// "d" then d rows; '#' starts a comment.  ParseError carries file:line:column.
GramLattice parse_gram_text(const std::string &text, const std::string &origin = "<text>");
GramLattice parse_gram_file(const std::filesystem::path &path);
IntMatrix parse_matrix_text(const std::string &text, const std::string &origin = "<text>");
IntMatrix parse_matrix_file(const std::filesystem::path &path);

std::string write_gram(const GramLattice &L);
std::string write_matrix(const IntMatrix &A);
// temp file then rename
void write_file_atomic(const std::filesystem::path &path, const std::string &content);
std::string read_file(const std::filesystem::path &path);

// "fixture:Leech", "fixture:E8^3", or a path relative to `base`.
GramLattice resolve_lattice(const std::string &ref, const std::filesystem::path &base = {});
// "identity", "minus_identity", or a path relative to `base`.
IntMatrix resolve_automorphism(const std::string &ref, std::size_t dim, const std::filesystem::path &base = {});

std::vector<Rational> parse_rational_list(const std::vector<std::string> &items);

} // namespace orbq::cli
