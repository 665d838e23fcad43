#pragma once

// Headerless CSV of decimal floats, one matrix row per line. Dimensions are
// inferred from the file; ragged rows are rejected.

#include "pregols/linalg.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace pregols::csv {

Matrix parse_matrix(std::istream& in, const std::string& source = "<stream>");
Matrix read_matrix(const std::filesystem::path& path);

/// Reads a vector stored either as a single column or as a single row.
Vector read_vector(const std::filesystem::path& path);

/// Full round-trip precision (17 significant digits).
void write_matrix(std::ostream& out, const Eigen::Ref<const Matrix>& m);
void write_matrix(const std::filesystem::path& path, const Eigen::Ref<const Matrix>& m);

}  // namespace pregols::csv
