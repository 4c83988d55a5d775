#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "rnla/dense_matrix.hpp"
#include "rnla/sparse_matrix.hpp"

namespace rnla {

// Seeded, deterministic linear sketch operators applied by
// left-multiplication. Operators are immutable after construction and
// safe to share across threads.

enum class SketchKind { Osnap, StackedSrht, UniformSample, DiagonalWeights, Composite };

// In-place unnormalized fast Walsh-Hadamard transform; length must be a
// power of two.
void fwht_inplace(std::vector<double>& v);
std::vector<double> fwht(std::vector<double> v);

class SketchOperator {
public:
    // Empty placeholder; usable only after assignment from a builder.
    // Defined out of line: the variant needs the complete nested types
    // before it can default-construct.
    SketchOperator();

    SketchKind kind() const noexcept { return kind_; }
    std::size_t in_dim() const noexcept { return in_dim_; }
    std::size_t out_dim() const noexcept { return out_dim_; }
    std::uint64_t seed() const noexcept { return seed_; }

    std::vector<double> apply(const std::vector<double>& x) const;
    DenseMatrix apply(const DenseMatrix& a) const;
    DenseMatrix apply(const SparseMatrix& a) const;

    // Explicit out_dim x in_dim matrix; intended for tests and small dims.
    DenseMatrix materialize() const;
    // OSNAP only: the operator as a CSR matrix with s nonzeros per column.
    SparseMatrix materialize_sparse() const;

    // UniformSample only: the sampled source-row indices.
    const std::vector<std::size_t>& sampled_indices() const;

    // StackedSrht only: block count and padded length.
    std::size_t srht_blocks() const;
    std::size_t srht_padded_len() const;
    // StackedSrht only: one unscaled operator row (sign pattern times the
    // block's Gaussian diagonal), truncated to the true input length.
    std::vector<double> srht_row_unscaled(std::size_t row_index) const;

    // Composite only.
    const std::vector<SketchOperator>& components() const;

    friend SketchOperator osnap_build(std::size_t n, std::size_t rows,
                                      std::size_t s, std::uint64_t seed);
    friend SketchOperator srht_build(std::size_t ell, std::size_t m,
                                     std::uint64_t seed);
    friend SketchOperator uniform_sample_build(std::size_t source_rows,
                                               std::size_t p, std::uint64_t seed);
    friend SketchOperator diagonal_weights_build(std::vector<double> weights);
    friend SketchOperator composite_build(std::vector<SketchOperator> ops);

private:
    // No default member initializers here: NSDMIs of nested classes are
    // parsed only once the enclosing class is complete, which would leave
    // the variant member without a default constructor. Builders assign
    // every scalar field explicitly.
    struct OsnapData {
        std::size_t s;
        // Per input column: s target rows and the matching signed values.
        std::vector<std::uint32_t> target_rows;
        std::vector<double> values;
    };
    struct SrhtData {
        std::size_t ell;     // true input length
        std::size_t m;       // block count
        std::size_t padded;  // next power of two >= ell
        std::vector<double> diag;  // m * padded Gaussian diagonal entries
    };
    struct UniformData {
        std::vector<std::size_t> indices;
    };
    struct DiagData {
        std::vector<double> weights;
    };
    struct CompositeData {
        std::vector<SketchOperator> ops;  // in application order
    };

    SketchKind kind_ = SketchKind::DiagonalWeights;
    std::size_t in_dim_ = 0;
    std::size_t out_dim_ = 0;
    std::uint64_t seed_ = 0;
    std::variant<OsnapData, SrhtData, UniformData, DiagData, CompositeData> data_;
};

// OSNAP: each input coordinate maps to s distinct output rows with values
// +-1/sqrt(s); column streams are derived from (seed, column) so columns
// are independently reproducible.
SketchOperator osnap_build(std::size_t n, std::size_t rows, std::size_t s,
                           std::uint64_t seed);

// Stacked SRHT: pads to the next power of two, applies m independent
// Gaussian diagonals followed by the Hadamard butterfly, and scales the
// stacked result by 1/sqrt(m * padded).
SketchOperator srht_build(std::size_t ell, std::size_t m, std::uint64_t seed);

// p rows, each an elementary row vector with index i.i.d. uniform over the
// source rows (with replacement).
SketchOperator uniform_sample_build(std::size_t source_rows, std::size_t p,
                                    std::uint64_t seed);

SketchOperator diagonal_weights_build(std::vector<double> weights);

// Operators listed in application order (first element touches the input).
SketchOperator composite_build(std::vector<SketchOperator> ops);

DenseMatrix apply_sketch(const SketchOperator& op, const DenseMatrix& a);
DenseMatrix apply_sketch(const SketchOperator& op, const SparseMatrix& a);

}  // namespace rnla
