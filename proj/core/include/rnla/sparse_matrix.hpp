#pragma once

#include <cstddef>
#include <vector>

#include "rnla/dense_matrix.hpp"

namespace rnla {

// Compressed sparse row matrix for inputs with nnz far below rows*cols.
// Within each row, column indices are strictly increasing; stored values
// are finite and nonzero.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols,
                 std::vector<std::size_t> row_ptr,
                 std::vector<std::size_t> col_idx,
                 std::vector<double> values);

    // Builds from (row, col, value) triplets; duplicates are summed and
    // resulting zeros dropped.
    static SparseMatrix from_triplets(
        std::size_t rows, std::size_t cols,
        std::vector<std::size_t> rows_idx,
        std::vector<std::size_t> cols_idx,
        std::vector<double> vals);

    static SparseMatrix from_dense(const DenseMatrix& a, double drop_tol = 0.0);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
    const std::vector<std::size_t>& col_idx() const noexcept { return col_idx_; }
    const std::vector<double>& values() const noexcept { return values_; }

    DenseMatrix to_dense() const;

private:
    void validate() const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_ = {0};
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
};

}  // namespace rnla
