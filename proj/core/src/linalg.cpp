#include "rnla/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "rnla/error.hpp"
#include "rnla/rng.hpp"

namespace rnla {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EigenMap = Eigen::Map<const EigenRowMajor>;

EigenMap as_eigen(const DenseMatrix& m) {
    return EigenMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                    static_cast<Eigen::Index>(m.cols()));
}

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
    DenseMatrix out(static_cast<std::size_t>(m.rows()),
                    static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
    return out;
}

double rank_threshold(const DenseMatrix& a, double sigma_max, double tol_factor) {
    const double eps = std::numeric_limits<double>::epsilon();
    return tol_factor * static_cast<double>(std::max(a.rows(), a.cols())) * eps *
           sigma_max;
}

}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.cols() == b.rows(), "shape", "matmul: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    // i-k-j loop order: fixed reduction order over k so results are
    // bit-reproducible, with contiguous access on b and c.
    const std::size_t n = a.rows(), m = b.cols(), kk = a.cols();
    for (std::size_t i = 0; i < n; ++i) {
        double* ci = c.row_ptr(i);
        const double* ai = a.row_ptr(i);
        for (std::size_t k = 0; k < kk; ++k) {
            const double aik = ai[k];
            if (aik == 0.0) continue;
            const double* bk = b.row_ptr(k);
            for (std::size_t j = 0; j < m; ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

DenseMatrix matmul(const SparseMatrix& a, const DenseMatrix& b) {
    require(a.cols() == b.rows(), "shape", "matmul: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    const std::size_t m = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row_ptr(i);
        for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
            const double v = a.values()[k];
            const double* bk = b.row_ptr(a.col_idx()[k]);
            for (std::size_t j = 0; j < m; ++j) ci[j] += v * bk[j];
        }
    }
    return c;
}

SvdFactors svd_thin(const DenseMatrix& a, double tol_factor) {
    a.check_finite();
    if (a.rows() == 0 || a.cols() == 0)
        return {DenseMatrix(a.rows(), 0), {}, DenseMatrix(a.cols(), 0)};

    // JacobiSVD rather than BDCSVD: the divide-and-conquer kernel can emit
    // NaN factors on projector-like inputs with clustered singular values.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        as_eigen(a), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double thresh = rank_threshold(a, s.size() ? s(0) : 0.0, tol_factor);

    Eigen::Index k = 0;
    while (k < s.size() && s(k) > thresh) ++k;

    SvdFactors f;
    f.u = from_eigen(svd.matrixU().leftCols(k));
    f.v = from_eigen(svd.matrixV().leftCols(k));
    f.sigma.assign(s.data(), s.data() + k);
    return f;
}

QrPreconditioner qr_preconditioner(const DenseMatrix& m) {
    require(m.rows() >= m.cols(), "shape", "qr_preconditioner: need p >= d");
    const std::size_t d = m.cols();
    require(numerical_rank(m) == d, "rank-deficient",
            "qr_preconditioner: input does not have full column rank");

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(as_eigen(m));
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(
                            static_cast<Eigen::Index>(m.rows()),
                            static_cast<Eigen::Index>(d));
    Eigen::MatrixXd t = qr.matrixQR()
                            .topRows(static_cast<Eigen::Index>(d))
                            .triangularView<Eigen::Upper>();
    // R is the inverse of the triangular factor, so M * R = Q.
    Eigen::MatrixXd rinv =
        t.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(
            static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
    return {from_eigen(q), from_eigen(rinv)};
}

std::vector<double> exact_leverage_scores(const DenseMatrix& a) {
    const SvdFactors f = svd_thin(a);
    std::vector<double> scores(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = std::min(1.0, f.u.row_sq_norm(i));
        scores[i] = s;
    }
    return scores;
}

std::size_t numerical_rank(const DenseMatrix& a, double tol_factor) {
    require(tol_factor > 0.0, "param", "numerical_rank: tol_factor must be > 0");
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_eigen(a));
    const Eigen::VectorXd& s = svd.singularValues();
    const double thresh = rank_threshold(a, s.size() ? s(0) : 0.0, tol_factor);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > thresh) ++rank;
    return rank;
}

std::size_t rank_above(const DenseMatrix& a, double abs_threshold) {
    require(abs_threshold > 0.0, "param", "rank_above: threshold must be > 0");
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_eigen(a));
    const Eigen::VectorXd& s = svd.singularValues();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > abs_threshold) ++rank;
    return rank;
}

SpectralEstimate spectral_norm(const DenseMatrix& a, double tol,
                               std::size_t max_iter, std::uint64_t seed) {
    require(tol > 0.0, "param", "spectral_norm: tol must be > 0");
    SpectralEstimate est;
    if (a.rows() == 0 || a.cols() == 0) return est;

    RngStream rng(seed, ModuleId::SpectralNorm, 0);
    std::vector<double> v(a.cols());
    for (double& x : v) x = rng.next_gaussian();
    double nv = norm2(v);
    if (nv == 0.0) v[0] = nv = 1.0;
    for (double& x : v) x /= nv;

    // Power iteration on A^T A; the estimate is ||Av|| at the current vector.
    double prev = 0.0;
    std::vector<double> av(a.rows()), atav(a.cols());
    for (std::size_t it = 1; it <= max_iter; ++it) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const double* ai = a.row_ptr(i);
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols(); ++j) s += ai[j] * v[j];
            av[i] = s;
        }
        const double cur = norm2(av);
        est.value = cur;
        est.iterations = it;
        if (cur == 0.0) {  // v in the null space; A may still be zero
            est.converged = true;
            return est;
        }
        if (it > 1 && std::abs(cur - prev) <= tol * cur) {
            est.converged = true;
            return est;
        }
        prev = cur;

        std::fill(atav.begin(), atav.end(), 0.0);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const double* ai = a.row_ptr(i);
            for (std::size_t j = 0; j < a.cols(); ++j) atav[j] += ai[j] * av[i];
        }
        const double na = norm2(atav);
        if (na == 0.0) {
            est.converged = true;
            return est;
        }
        for (std::size_t j = 0; j < a.cols(); ++j) v[j] = atav[j] / na;
    }
    est.converged = false;
    return est;
}

double distortion(const DenseMatrix& sketched_basis) {
    if (sketched_basis.rows() == 0 || sketched_basis.cols() == 0)
        return kInfDistortion;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_eigen(sketched_basis));
    const Eigen::VectorXd& s = svd.singularValues();
    const Eigen::Index k = std::min<Eigen::Index>(
        s.size(), static_cast<Eigen::Index>(sketched_basis.cols()));
    const double smax = s(0);
    const double smin = s(k - 1);
    const double thresh = rank_threshold(sketched_basis, smax, 10.0);
    if (smin <= thresh) return kInfDistortion;
    return smax / smin;
}

std::vector<double> pseudo_inverse_apply(const DenseMatrix& m,
                                         const std::vector<double>& v) {
    require(m.rows() == v.size(), "shape", "pseudo_inverse_apply: length mismatch");
    require(m.rows() >= m.cols(), "shape", "pseudo_inverse_apply: need p >= d");
    const SvdFactors f = svd_thin(m);
    std::vector<double> x(m.cols(), 0.0);
    for (std::size_t r = 0; r < f.rank(); ++r) {
        double c = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) c += f.u(i, r) * v[i];
        c /= f.sigma[r];
        for (std::size_t j = 0; j < m.cols(); ++j) x[j] += c * f.v(j, r);
    }
    return x;
}

DenseMatrix column_basis(const DenseMatrix& a) { return svd_thin(a).u; }

}  // namespace rnla
