#include "rnla/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rnla/error.hpp"

namespace rnla {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx,
                           std::vector<double> values)
    : rows_(rows), cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    validate();
}

void SparseMatrix::validate() const {
    require(row_ptr_.size() == rows_ + 1, "shape", "row_ptr length");
    require(row_ptr_.front() == 0, "shape", "row_ptr[0] != 0");
    require(row_ptr_.back() == values_.size(), "shape", "row_ptr[rows] != nnz");
    require(col_idx_.size() == values_.size(), "shape", "col_idx/values length");
    for (std::size_t i = 0; i < rows_; ++i) {
        require(row_ptr_[i] <= row_ptr_[i + 1], "shape", "row_ptr not nondecreasing");
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            require(col_idx_[k] < cols_, "shape", "column index out of range");
            if (k > row_ptr_[i])
                require(col_idx_[k - 1] < col_idx_[k], "shape",
                        "column indices not strictly increasing within row");
            require(std::isfinite(values_[k]) && values_[k] != 0.0, "finite",
                    "sparse value must be finite and nonzero");
        }
    }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<std::size_t> rows_idx,
                                         std::vector<std::size_t> cols_idx,
                                         std::vector<double> vals) {
    require(rows_idx.size() == cols_idx.size() && rows_idx.size() == vals.size(),
            "shape", "triplet arrays must have equal length");
    std::vector<std::size_t> order(vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows_idx[a] != rows_idx[b]) return rows_idx[a] < rows_idx[b];
        return cols_idx[a] < cols_idx[b];
    });

    // Sum duplicates, then lay out CSR, dropping zeros from cancellation.
    std::vector<std::size_t> ri, ci;
    std::vector<double> vv;
    for (std::size_t k : order) {
        require(rows_idx[k] < rows && cols_idx[k] < cols, "shape",
                "triplet index out of range");
        if (!ri.empty() && ri.back() == rows_idx[k] && ci.back() == cols_idx[k]) {
            vv.back() += vals[k];
        } else {
            ri.push_back(rows_idx[k]);
            ci.push_back(cols_idx[k]);
            vv.push_back(vals[k]);
        }
    }

    std::vector<std::size_t> rp(rows + 1, 0), ci2;
    std::vector<double> vv2;
    std::size_t k = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        while (k < ri.size() && ri[k] == i) {
            if (vv[k] != 0.0) {
                ci2.push_back(ci[k]);
                vv2.push_back(vv[k]);
            }
            ++k;
        }
        rp[i + 1] = ci2.size();
    }
    return SparseMatrix(rows, cols, std::move(rp), std::move(ci2), std::move(vv2));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& a, double drop_tol) {
    std::vector<std::size_t> rp(a.rows() + 1, 0), ci;
    std::vector<double> vv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (std::abs(a(i, j)) > drop_tol) {
                ci.push_back(j);
                vv.push_back(a(i, j));
            }
        }
        rp[i + 1] = ci.size();
    }
    return SparseMatrix(a.rows(), a.cols(), std::move(rp), std::move(ci), std::move(vv));
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            d(i, col_idx_[k]) = values_[k];
    return d;
}

}  // namespace rnla
