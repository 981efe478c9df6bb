#include "sqdkrylov/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include "sqdkrylov/errors.hpp"

namespace sqd {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& why) {
    throw FormatError(path + ":" + std::to_string(line_no) + ": " + why);
}

} // namespace

CsrMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open matrix file: " + path);

    std::string header;
    if (!std::getline(in, header)) throw FormatError(path + ": empty file");
    std::istringstream hs(header);
    std::string banner, object, fmt, field, qualifier;
    hs >> banner >> object >> fmt >> field >> qualifier;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(fmt) != "coordinate" ||
        lower(field) != "real")
        throw FormatError(path + ": unsupported Matrix Market header: " + header);
    qualifier = lower(qualifier);
    const bool symmetric = qualifier == "symmetric";
    if (!symmetric && qualifier != "general")
        throw FormatError(path + ": unsupported qualifier '" + qualifier + "' in: " + header);

    std::string line;
    std::size_t line_no = 1;
    std::size_t nrows = 0, ncols = 0, nnz = 0;
    bool have_size = false;
    std::vector<CsrMatrix::Triplet> entries;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        if (!have_size) {
            if (!(ls >> nrows >> ncols >> nnz)) parse_fail(path, line_no, "malformed size line");
            if (nrows == 0 || ncols == 0) parse_fail(path, line_no, "zero matrix dimension");
            entries.reserve(symmetric ? 2 * nnz : nnz);
            have_size = true;
            continue;
        }
        long long i = 0, j = 0;
        double v = 0.0;
        if (!(ls >> i >> j >> v)) parse_fail(path, line_no, "malformed entry");
        if (i < 1 || j < 1 || static_cast<std::size_t>(i) > nrows ||
            static_cast<std::size_t>(j) > ncols)
            parse_fail(path, line_no, "index out of declared bounds");
        const std::size_t r = static_cast<std::size_t>(i - 1), c = static_cast<std::size_t>(j - 1);
        entries.push_back({r, c, v});
        if (symmetric && r != c) entries.push_back({c, r, v});
    }
    if (!have_size) throw FormatError(path + ": missing size line");
    if (symmetric && nrows != ncols)
        throw FormatError(path + ": symmetric qualifier on a rectangular matrix");
    return CsrMatrix::from_triplets(nrows, ncols, std::move(entries));
}

} // namespace sqd
