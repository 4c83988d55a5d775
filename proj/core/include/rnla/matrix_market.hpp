#pragma once

#include <string>
#include <vector>

#include "rnla/dense_matrix.hpp"
#include "rnla/sparse_matrix.hpp"

namespace rnla {

// Matrix Market I/O: coordinate (sparse) and array (dense) formats,
// real/integer fields, general symmetry. Parse failures throw
// Error("parse") with the offending line number in the message.

struct MtxMatrix {
    bool dense = false;
    DenseMatrix dense_mat;   // valid when dense
    SparseMatrix sparse_mat; // valid when !dense
    std::size_t rows() const { return dense ? dense_mat.rows() : sparse_mat.rows(); }
    std::size_t cols() const { return dense ? dense_mat.cols() : sparse_mat.cols(); }
    DenseMatrix to_dense() const { return dense ? dense_mat : sparse_mat.to_dense(); }
};

MtxMatrix read_matrix_market(const std::string& path);

// Reads an n x 1 matrix (either format) as a vector.
std::vector<double> read_matrix_market_vector(const std::string& path);

void write_matrix_market(const std::string& path, const DenseMatrix& a);
void write_matrix_market(const std::string& path, const SparseMatrix& a);

}  // namespace rnla
