#include "rnla/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "rnla/error.hpp"

namespace rnla {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& msg) {
    throw Error("parse", path + ":" + std::to_string(line) + ": " + msg);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

struct Header {
    bool coordinate = false;
    bool symmetric = false;
};

Header parse_header(const std::string& path, const std::string& text,
                    std::size_t line_no) {
    std::istringstream hs(text);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket")
        parse_fail(path, line_no, "missing %%MatrixMarket banner");
    if (lower(object) != "matrix")
        parse_fail(path, line_no, "unsupported object: " + object);
    Header h;
    const std::string fmt = lower(format);
    if (fmt == "coordinate")
        h.coordinate = true;
    else if (fmt != "array")
        parse_fail(path, line_no, "unsupported format: " + format);
    const std::string fld = lower(field);
    if (fld != "real" && fld != "integer")
        parse_fail(path, line_no, "unsupported field: " + field);
    const std::string sym = lower(symmetry);
    if (sym == "symmetric")
        h.symmetric = true;
    else if (sym != "general")
        parse_fail(path, line_no, "unsupported symmetry: " + symmetry);
    return h;
}

bool next_data_line(std::istream& in, std::string& out, std::size_t& line_no) {
    while (std::getline(in, out)) {
        ++line_no;
        const std::size_t pos = out.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;     // blank
        if (out[pos] == '%') continue;              // comment
        return true;
    }
    return false;
}

}  // namespace

MtxMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "io", "cannot open " + path);

    std::size_t line_no = 0;
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "parse",
            path + ":1: empty file");
    ++line_no;
    const Header h = parse_header(path, line, line_no);

    if (!next_data_line(in, line, line_no))
        parse_fail(path, line_no, "missing size line");

    MtxMatrix out;
    std::istringstream sz(line);
    if (h.coordinate) {
        std::size_t n = 0, d = 0, nnz = 0;
        if (!(sz >> n >> d >> nnz) || n == 0 || d == 0)
            parse_fail(path, line_no, "bad coordinate size line");
        std::vector<std::size_t> ri, ci;
        std::vector<double> vv;
        ri.reserve(nnz);
        for (std::size_t k = 0; k < nnz; ++k) {
            if (!next_data_line(in, line, line_no))
                parse_fail(path, line_no, "unexpected end of file");
            std::istringstream es(line);
            std::size_t i = 0, j = 0;
            double v = 0.0;
            if (!(es >> i >> j >> v))
                parse_fail(path, line_no, "bad coordinate entry");
            if (i < 1 || i > n || j < 1 || j > d)
                parse_fail(path, line_no, "index out of range");
            ri.push_back(i - 1);
            ci.push_back(j - 1);
            vv.push_back(v);
            if (h.symmetric && i != j) {
                ri.push_back(j - 1);
                ci.push_back(i - 1);
                vv.push_back(v);
            }
        }
        out.sparse_mat = SparseMatrix::from_triplets(n, d, std::move(ri),
                                                     std::move(ci), std::move(vv));
        return out;
    }

    std::size_t n = 0, d = 0;
    if (!(sz >> n >> d) || n == 0 || d == 0)
        parse_fail(path, line_no, "bad array size line");
    require(!h.symmetric || n == d, "parse",
            path + ": symmetric array matrix must be square");
    out.dense = true;
    out.dense_mat = DenseMatrix(n, d);
    // Array format is column-major, one value per line.
    const std::size_t count = h.symmetric ? n * (n + 1) / 2 : n * d;
    std::size_t col = 0, row = 0;
    for (std::size_t k = 0; k < count; ++k) {
        if (!next_data_line(in, line, line_no))
            parse_fail(path, line_no, "unexpected end of file");
        std::istringstream es(line);
        double v = 0.0;
        if (!(es >> v)) parse_fail(path, line_no, "bad array entry");
        out.dense_mat(row, col) = v;
        if (h.symmetric) out.dense_mat(col, row) = v;
        ++row;
        if (row == n) {
            ++col;
            row = h.symmetric ? col : 0;
        }
    }
    return out;
}

std::vector<double> read_matrix_market_vector(const std::string& path) {
    const MtxMatrix m = read_matrix_market(path);
    require(m.cols() == 1, "shape", path + ": expected a single-column matrix");
    return m.to_dense().col(0);
}

void write_matrix_market(const std::string& path, const DenseMatrix& a) {
    std::ofstream out(path);
    require(out.good(), "io", "cannot write " + path);
    out << "%%MatrixMarket matrix array real general\n";
    out << a.rows() << " " << a.cols() << "\n";
    out.precision(17);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out << a(i, j) << "\n";
    require(out.good(), "io", "write failed for " + path);
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
    std::ofstream out(path);
    require(out.good(), "io", "cannot write " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows() << " " << a.cols() << " " << a.nnz() << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
            out << i + 1 << " " << a.col_idx()[k] + 1 << " " << a.values()[k]
                << "\n";
    require(out.good(), "io", "write failed for " + path);
}

}  // namespace rnla
