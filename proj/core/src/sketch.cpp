#include "rnla/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "rnla/error.hpp"
#include "rnla/rng.hpp"

namespace rnla {

namespace {

bool is_pow2(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::size_t next_pow2(std::size_t x) {
    std::size_t p = 1;
    while (p < x) p <<= 1;
    return p;
}

}  // namespace

SketchOperator::SketchOperator() = default;

void fwht_inplace(std::vector<double>& v) {
    require(is_pow2(v.size()), "length", "fwht: length must be a power of two");
    const std::size_t n = v.size();
    for (std::size_t half = 1; half < n; half <<= 1) {
        for (std::size_t base = 0; base < n; base += half << 1) {
            for (std::size_t i = base; i < base + half; ++i) {
                const double a = v[i];
                const double b = v[i + half];
                v[i] = a + b;
                v[i + half] = a - b;
            }
        }
    }
}

std::vector<double> fwht(std::vector<double> v) {
    fwht_inplace(v);
    return v;
}

SketchOperator osnap_build(std::size_t n, std::size_t rows, std::size_t s,
                           std::uint64_t seed) {
    require(rows >= 1 && n >= 1, "shape", "osnap: empty dimensions");
    require(s >= 1 && s <= rows, "sparsity", "osnap: need 1 <= s <= rows");

    SketchOperator op;
    op.kind_ = SketchKind::Osnap;
    op.in_dim_ = n;
    op.out_dim_ = rows;
    op.seed_ = seed;

    SketchOperator::OsnapData d;
    d.s = s;
    d.target_rows.resize(n * s);
    d.values.resize(n * s);
    const double mag = 1.0 / std::sqrt(static_cast<double>(s));
    for (std::size_t col = 0; col < n; ++col) {
        RngStream rng(seed, ModuleId::Osnap, col);
        // s distinct rows per column, chosen by rejection.
        std::uint32_t* tr = d.target_rows.data() + col * s;
        for (std::size_t t = 0; t < s; ++t) {
            std::uint32_t r;
            bool fresh;
            do {
                r = static_cast<std::uint32_t>(rng.next_below(rows));
                fresh = true;
                for (std::size_t u = 0; u < t; ++u)
                    if (tr[u] == r) { fresh = false; break; }
            } while (!fresh);
            tr[t] = r;
            d.values[col * s + t] = rng.next_signed_unit() * mag;
        }
    }
    op.data_ = std::move(d);
    return op;
}

SketchOperator srht_build(std::size_t ell, std::size_t m, std::uint64_t seed) {
    require(ell >= 1 && m >= 1, "shape", "srht: need ell >= 1 and m >= 1");
    SketchOperator op;
    op.kind_ = SketchKind::StackedSrht;
    op.in_dim_ = ell;
    op.seed_ = seed;

    SketchOperator::SrhtData d;
    d.ell = ell;
    d.m = m;
    d.padded = next_pow2(ell);
    d.diag.resize(m * d.padded);
    for (std::size_t blk = 0; blk < m; ++blk) {
        RngStream rng(seed, ModuleId::Srht, blk);
        for (std::size_t i = 0; i < d.padded; ++i)
            d.diag[blk * d.padded + i] = rng.next_gaussian();
    }
    op.out_dim_ = m * d.padded;
    op.data_ = std::move(d);
    return op;
}

SketchOperator uniform_sample_build(std::size_t source_rows, std::size_t p,
                                    std::uint64_t seed) {
    require(source_rows >= 1 && p >= 1, "shape", "uniform_sample: empty dims");
    SketchOperator op;
    op.kind_ = SketchKind::UniformSample;
    op.in_dim_ = source_rows;
    op.out_dim_ = p;
    op.seed_ = seed;

    SketchOperator::UniformData d;
    d.indices.resize(p);
    RngStream rng(seed, ModuleId::UniformSample, 0);
    for (std::size_t i = 0; i < p; ++i) d.indices[i] = rng.next_below(source_rows);
    op.data_ = std::move(d);
    return op;
}

SketchOperator diagonal_weights_build(std::vector<double> weights) {
    require(!weights.empty(), "shape", "diagonal_weights: empty weight list");
    SketchOperator op;
    op.kind_ = SketchKind::DiagonalWeights;
    op.in_dim_ = op.out_dim_ = weights.size();
    op.data_ = SketchOperator::DiagData{std::move(weights)};
    return op;
}

SketchOperator composite_build(std::vector<SketchOperator> ops) {
    require(!ops.empty(), "shape", "composite: empty operator list");
    for (std::size_t i = 1; i < ops.size(); ++i)
        require(ops[i].in_dim() == ops[i - 1].out_dim(), "shape",
                "composite: inner dimensions do not chain");
    SketchOperator op;
    op.kind_ = SketchKind::Composite;
    op.in_dim_ = ops.front().in_dim();
    op.out_dim_ = ops.back().out_dim();
    op.seed_ = ops.front().seed();
    op.data_ = SketchOperator::CompositeData{std::move(ops)};
    return op;
}

DenseMatrix SketchOperator::apply(const DenseMatrix& a) const {
    require(a.rows() == in_dim_, "shape", "apply_sketch: operator/input mismatch");
    switch (kind_) {
        case SketchKind::Osnap: {
            const auto& d = std::get<OsnapData>(data_);
            DenseMatrix out(out_dim_, a.cols());
            for (std::size_t col = 0; col < in_dim_; ++col) {
                const double* arow = a.row_ptr(col);
                for (std::size_t t = 0; t < d.s; ++t) {
                    const double v = d.values[col * d.s + t];
                    double* orow = out.row_ptr(d.target_rows[col * d.s + t]);
                    for (std::size_t j = 0; j < a.cols(); ++j) orow[j] += v * arow[j];
                }
            }
            return out;
        }
        case SketchKind::StackedSrht: {
            const auto& d = std::get<SrhtData>(data_);
            DenseMatrix out(out_dim_, a.cols());
            const double scale =
                1.0 / std::sqrt(static_cast<double>(d.m * d.padded));
            std::vector<double> buf(d.padded);
            for (std::size_t j = 0; j < a.cols(); ++j) {
                for (std::size_t blk = 0; blk < d.m; ++blk) {
                    const double* diag = d.diag.data() + blk * d.padded;
                    for (std::size_t i = 0; i < d.ell; ++i)
                        buf[i] = diag[i] * a(i, j);
                    std::fill(buf.begin() + d.ell, buf.end(), 0.0);
                    fwht_inplace(buf);
                    for (std::size_t i = 0; i < d.padded; ++i)
                        out(blk * d.padded + i, j) = scale * buf[i];
                }
            }
            return out;
        }
        case SketchKind::UniformSample: {
            const auto& d = std::get<UniformData>(data_);
            return a.row_block(d.indices);
        }
        case SketchKind::DiagonalWeights: {
            const auto& d = std::get<DiagData>(data_);
            DenseMatrix out = a;
            for (std::size_t i = 0; i < out.rows(); ++i) {
                double* r = out.row_ptr(i);
                for (std::size_t j = 0; j < out.cols(); ++j) r[j] *= d.weights[i];
            }
            return out;
        }
        case SketchKind::Composite: {
            const auto& d = std::get<CompositeData>(data_);
            DenseMatrix cur = d.ops.front().apply(a);
            for (std::size_t i = 1; i < d.ops.size(); ++i)
                cur = d.ops[i].apply(cur);
            return cur;
        }
    }
    throw Error("internal", "unknown sketch kind");
}

DenseMatrix SketchOperator::apply(const SparseMatrix& a) const {
    if (kind_ == SketchKind::Osnap) {
        require(a.rows() == in_dim_, "shape", "apply_sketch: operator/input mismatch");
        // nnz-proportional path: scatter each sparse row into s output rows.
        const auto& d = std::get<OsnapData>(data_);
        DenseMatrix out(out_dim_, a.cols());
        for (std::size_t row = 0; row < a.rows(); ++row) {
            for (std::size_t t = 0; t < d.s; ++t) {
                const double v = d.values[row * d.s + t];
                double* orow = out.row_ptr(d.target_rows[row * d.s + t]);
                for (std::size_t k = a.row_ptr()[row]; k < a.row_ptr()[row + 1]; ++k)
                    orow[a.col_idx()[k]] += v * a.values()[k];
            }
        }
        return out;
    }
    if (kind_ == SketchKind::Composite) {
        const auto& d = std::get<CompositeData>(data_);
        DenseMatrix cur = d.ops.front().apply(a);
        for (std::size_t i = 1; i < d.ops.size(); ++i) cur = d.ops[i].apply(cur);
        return cur;
    }
    return apply(a.to_dense());
}

std::vector<double> SketchOperator::apply(const std::vector<double>& x) const {
    DenseMatrix out = apply(DenseMatrix::column(x));
    return out.col(0);
}

DenseMatrix SketchOperator::materialize() const {
    return apply(DenseMatrix::identity(in_dim_));
}

SparseMatrix SketchOperator::materialize_sparse() const {
    require(kind_ == SketchKind::Osnap, "kind",
            "materialize_sparse: OSNAP operators only");
    const auto& d = std::get<OsnapData>(data_);
    std::vector<std::size_t> ri, ci;
    std::vector<double> vv;
    ri.reserve(in_dim_ * d.s);
    for (std::size_t col = 0; col < in_dim_; ++col) {
        for (std::size_t t = 0; t < d.s; ++t) {
            ri.push_back(d.target_rows[col * d.s + t]);
            ci.push_back(col);
            vv.push_back(d.values[col * d.s + t]);
        }
    }
    return SparseMatrix::from_triplets(out_dim_, in_dim_, std::move(ri),
                                       std::move(ci), std::move(vv));
}

const std::vector<std::size_t>& SketchOperator::sampled_indices() const {
    require(kind_ == SketchKind::UniformSample, "kind",
            "sampled_indices: UniformSample operators only");
    return std::get<UniformData>(data_).indices;
}

std::size_t SketchOperator::srht_blocks() const {
    require(kind_ == SketchKind::StackedSrht, "kind", "srht_blocks: SRHT only");
    return std::get<SrhtData>(data_).m;
}

std::size_t SketchOperator::srht_padded_len() const {
    require(kind_ == SketchKind::StackedSrht, "kind", "srht_padded_len: SRHT only");
    return std::get<SrhtData>(data_).padded;
}

std::vector<double> SketchOperator::srht_row_unscaled(std::size_t row_index) const {
    require(kind_ == SketchKind::StackedSrht, "kind", "srht_row_unscaled: SRHT only");
    const auto& d = std::get<SrhtData>(data_);
    require(row_index < out_dim_, "shape", "srht_row_unscaled: row out of range");
    const std::size_t blk = row_index / d.padded;
    const std::size_t r = row_index % d.padded;
    std::vector<double> row(d.ell);
    for (std::size_t c = 0; c < d.ell; ++c) {
        // H[r,c] = (-1)^popcount(r & c) for the unnormalized Hadamard matrix.
        const int sign = std::popcount(r & c) & 1 ? -1 : 1;
        row[c] = sign * d.diag[blk * d.padded + c];
    }
    return row;
}

const std::vector<SketchOperator>& SketchOperator::components() const {
    require(kind_ == SketchKind::Composite, "kind", "components: Composite only");
    return std::get<CompositeData>(data_).ops;
}

DenseMatrix apply_sketch(const SketchOperator& op, const DenseMatrix& a) {
    return op.apply(a);
}

DenseMatrix apply_sketch(const SketchOperator& op, const SparseMatrix& a) {
    return op.apply(a);
}

}  // namespace rnla
