#pragma once

#include <string>

#include "sqdkrylov/csr.hpp"

namespace sqd {

// Reads a Matrix Market coordinate file (real, general or symmetric,
// 1-based indices, '%' comments). Duplicate entries are summed; symmetric
// storage is expanded to the full pattern. Throws FormatError for
// unsupported headers and malformed or out-of-bounds entries (with the
// offending line number).
CsrMatrix read_matrix_market(const std::string& path);

} // namespace sqd
