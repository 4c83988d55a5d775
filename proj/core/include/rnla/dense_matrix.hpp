#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace rnla {

// Row-major dense matrix of doubles. The workhorse container for all
// post-sketch computation; immutable use is thread-safe.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix zeros(std::size_t rows, std::size_t cols);
    static DenseMatrix column(const std::vector<double>& v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }
    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    DenseMatrix transposed() const;
    DenseMatrix row_block(const std::vector<std::size_t>& indices) const;
    std::vector<double> row(std::size_t i) const;
    std::vector<double> col(std::size_t j) const;

    double frobenius_norm() const;
    double row_sq_norm(std::size_t i) const;

    // Throws Error("finite") if any entry is non-finite.
    void check_finite() const;

    bool operator==(const DenseMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Vector helpers shared across modules.
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);

}  // namespace rnla
