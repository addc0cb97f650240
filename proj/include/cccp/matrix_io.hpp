#pragma once

// Shared matrix text format: first line `d`, then d lines of d
// whitespace-separated decimals. Written with 17 significant digits.

#include <filesystem>
#include <iosfwd>

#include "cccp/pdcore.hpp"

namespace cccp {

/// Reads a square matrix as stored (no symmetrization).
Matrix read_matrix(std::istream& in);
/// Reads a matrix and averages it with its transpose before validation.
SpdMatrix read_spd(std::istream& in);
void write_matrix(std::ostream& out, const Matrix& m);

Matrix read_matrix_file(const std::filesystem::path& path);
SpdMatrix read_spd_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const Matrix& m);

/// Reads whitespace-separated rows of equal length (one observation per
/// non-empty line). Returns an n x d matrix.
Matrix read_rows(std::istream& in);
Matrix read_rows_file(const std::filesystem::path& path);
void write_rows(std::ostream& out, const Matrix& rows);

/// Formats with 17 significant digits.
std::string format_double(double v);

}  // namespace cccp
