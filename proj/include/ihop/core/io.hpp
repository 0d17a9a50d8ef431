#pragma once

#include <filesystem>
#include <iosfwd>

#include "ihop/core/types.hpp"

namespace ihop::io {

// Collection text format: a header line `n=<count> N_d=<count>` followed by
// one line per document holding its space-separated keyword indices.
void write_collection(std::ostream& out, const DocumentCollection& docs);
DocumentCollection read_collection(std::istream& in);
void save_collection(const std::filesystem::path& path, const DocumentCollection& docs);
DocumentCollection load_collection(const std::filesystem::path& path);

// Vectors: header `value`, one entry per line. Matrices: header `c0,...,c{k-1}`,
// one row per line. Values are written with 17 significant digits.
void write_vector_csv(std::ostream& out, const Vector& v);
Vector read_vector_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const Matrix& m);
Matrix read_matrix_csv(std::istream& in);

}  // namespace ihop::io
