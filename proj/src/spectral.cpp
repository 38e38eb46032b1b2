#include "asln/spectral.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace asln::spectral {

namespace {

// Flip column signs so the largest-magnitude entry of each column is
// positive. When U and V must stay paired (SVD), flip both together.
void fix_column_signs(Matrix& u, Matrix* v = nullptr) {
    for (Index j = 0; j < u.cols(); ++j) {
        Index imax = 0;
        double best = -1.0;
        for (Index i = 0; i < u.rows(); ++i) {
            const double a = std::abs(u(i, j));
            if (a > best) {
                best = a;
                imax = i;
            }
        }
        if (u(imax, j) < 0.0) {
            u.col(j) = -u.col(j);
            if (v) v->col(j) = -v->col(j);
        }
    }
}

}  // namespace

SpectralDecomposition sym_eig(const Matrix& m, std::optional<Index> k) {
    if (m.rows() != m.cols()) throw dimension_error("sym_eig: matrix must be square");
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * std::max(scale, 1e-300))
        throw dimension_error("sym_eig: matrix is not symmetric within 1e-10 relative");
    if (k && (*k < 1 || *k > m.rows())) throw dimension_error("sym_eig: k out of range");

    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const Index n = m.rows();

    // Eigen returns ascending order; reverse to descending. The reversal is
    // stable, which together with the sign rule fixes degenerate ties.
    SpectralDecomposition out;
    out.eigenvalues = es.eigenvalues().reverse();
    out.eigenvectors = es.eigenvectors().rowwise().reverse();
    fix_column_signs(out.eigenvectors);

    if (k && *k < n) {
        out.eigenvalues.conservativeResize(*k);
        out.eigenvectors.conservativeResize(n, *k);
    }
    return out;
}

SvdDecomposition svd_thin(const Matrix& m) {
    if (m.rows() < 1 || m.cols() < 1) throw dimension_error("svd_thin: empty matrix");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdDecomposition out;
    out.u = svd.matrixU();
    out.singular_values = svd.singularValues();
    out.v = svd.matrixV();
    fix_column_signs(out.u, &out.v);
    return out;
}

Matrix pinv(const Matrix& m, double tol) {
    if (tol <= 0.0 || tol >= 1.0) throw dimension_error("pinv: tol must be in (0,1)");
    const SvdDecomposition svd = svd_thin(m);
    const double cutoff = tol * svd.singular_values(0);
    Vector inv = Vector::Zero(svd.singular_values.size());
    for (Index i = 0; i < inv.size(); ++i)
        if (svd.singular_values(i) > cutoff) inv(i) = 1.0 / svd.singular_values(i);
    return svd.v * inv.asDiagonal() * svd.u.transpose();
}

Matrix hadamard_pow(const Matrix& m, int n) {
    if (n < 1) throw dimension_error("hadamard_pow: n must be >= 1");
    Matrix out = m;
    for (int i = 1; i < n; ++i) out = out.cwiseProduct(m);
    return out;
}

}  // namespace asln::spectral
