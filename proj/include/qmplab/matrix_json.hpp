#pragma once

#include <string>

#include "json.hpp"

#include "qmplab/complex_matrix.hpp"

namespace qmplab {

// Decimal form with 17 significant digits, enough for an exact double
// round-trip. Shared by every writer so identical values always serialize
// to identical bytes.
std::string format_double(double x);

// Interchange form {"rows":n,"cols":m,"re":[...],"im":[...]} with row-major
// coefficient order. Rejects non-finite entries.
std::string matrix_to_json(const ComplexMatrix& m);

// Parses the object produced by matrix_to_json, checking shape, array
// lengths, and finiteness.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

// Whole-file helpers for the CLI and model persistence.
std::string read_text_file(const std::string& path);

// Writes to a sibling temp file first and renames into place, so a failed
// write never leaves a truncated file at the target path.
void write_text_file_atomic(const std::string& path, const std::string& content);

} // namespace qmplab
