#include "asln/theory.hpp"

#include "asln/hermite.hpp"
#include "asln/spectral.hpp"

#include <cmath>
#include <limits>

namespace asln::theory {

namespace {

void check_orthonormal(const Matrix& u, const char* who) {
    const Matrix gram = u.transpose() * u;
    const double dev = (gram - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-8) throw dimension_error(std::string(who) + ": columns are not orthonormal");
}

}  // namespace

GaussianCoefficients gaussian_coefficients(Nonlinearity nl) {
    GaussianCoefficients c;
    c.f_prime = hermite::expect_he(nl, 1);
    c.f_sq = hermite::expect_sq(nl);
    c.f_third = hermite::expect_he(nl, 3);
    c.odd = is_odd(nl);
    return c;
}

Matrix anisotropy_delta(const Matrix& B, const Matrix& U_A) {
    if (B.cols() != U_A.rows())
        throw dimension_error("anisotropy_delta: B and U_A shapes do not match");
    check_orthonormal(U_A, "anisotropy_delta");
    Matrix dev = B.transpose() * B;
    dev.diagonal().array() -= 1.0;
    const Matrix proj = dev * U_A;  // (B^T B - I) U_A
    Matrix delta = proj.transpose() * proj;
    return 0.5 * (delta + delta.transpose());
}

ErrorPrediction error_cov_general(const Matrix& BH, const Matrix& B, const Matrix& Sigma) {
    if (B.rows() != BH.rows() || Sigma.rows() != Sigma.cols() || Sigma.rows() != B.cols())
        throw dimension_error("error_cov_general: inconsistent shapes");
    const auto svd = spectral::svd_thin(BH);
    if (svd.singular_values(svd.singular_values.size() - 1) <=
        1e-12 * svd.singular_values(0))
        throw singularity_error("error_cov_general: BH is rank deficient");

    const Matrix w = spectral::pinv(BH);  // ns x nx
    const Matrix wb = w * B;              // ns x nf
    Matrix cov = wb * Sigma * wb.transpose();
    cov = 0.5 * (cov + cov.transpose());

    ErrorPrediction out;
    out.cov_eps = cov;
    out.per_element_mse = cov.trace() / static_cast<double>(cov.rows());
    out.finite_width_term = out.per_element_mse;
    out.finite_source_term = 0.0;
    return out;
}

ErrorPrediction error_cov_asymptotic(Index ns, Index nf, const GaussianCoefficients& coeffs,
                                     const Matrix& delta) {
    if (!coeffs.odd)
        throw config_error(
            "error_cov_asymptotic: closed form requires an odd basis function; "
            "use error_cov_general");
    if (coeffs.f_prime == 0.0)
        throw singularity_error("error_cov_asymptotic: E[f'] vanishes");
    if (delta.rows() != ns || delta.cols() != ns)
        throw dimension_error("error_cov_asymptotic: delta must be ns x ns");

    const double fp2 = coeffs.f_prime * coeffs.f_prime;
    const double width = static_cast<double>(ns) / static_cast<double>(nf) *
                         (coeffs.f_sq / fp2 - 1.0);
    const double source =
        coeffs.f_third * coeffs.f_third / (2.0 * static_cast<double>(ns) * fp2);

    ErrorPrediction out;
    out.cov_eps = width * (Matrix::Identity(ns, ns) + delta) +
                  source * Matrix::Identity(ns, ns);
    out.per_element_mse = out.cov_eps.trace() / static_cast<double>(ns);
    out.finite_width_term = width * (1.0 + delta.trace() / static_cast<double>(ns));
    out.finite_source_term = source;
    return out;
}

double eigenvalue_ratio(const Matrix& BH, const Matrix& B, const Matrix& Sigma) {
    if (B.rows() != BH.rows() || Sigma.rows() != B.cols())
        throw dimension_error("eigenvalue_ratio: inconsistent shapes");
    Matrix noise = B * Sigma * B.transpose();
    noise = 0.5 * (noise + noise.transpose());
    const double max_noise = spectral::sym_eig(noise).eigenvalues(0);

    const auto svd = spectral::svd_thin(BH);
    const double s_min = svd.singular_values(svd.singular_values.size() - 1);
    if (s_min * s_min <= 0.0) return std::numeric_limits<double>::infinity();
    return max_noise / (s_min * s_min);
}

PerturbationReport perturbation_correction(const Matrix& U_L, const Vector& S_L,
                                           const Matrix& noise_cov) {
    const Index nx = U_L.rows();
    const Index k = U_L.cols();
    if (S_L.size() != k || noise_cov.rows() != nx || noise_cov.cols() != nx)
        throw dimension_error("perturbation_correction: inconsistent shapes");
    check_orthonormal(U_L, "perturbation_correction");
    if (S_L.minCoeff() <= 0.0)
        throw singularity_error("perturbation_correction: S_L has non-positive entries");
    const double asym = (noise_cov - noise_cov.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * std::max(noise_cov.cwiseAbs().maxCoeff(), 1e-300))
        throw dimension_error("perturbation_correction: noise covariance not symmetric");

    // Complete U_L to a full orthonormal basis, then rotate the complement so
    // the projected noise covariance is diagonal with descending entries.
    Eigen::HouseholderQR<Matrix> qr(U_L);
    const Matrix q = qr.householderQ() * Matrix::Identity(nx, nx);
    const Matrix q_rest = q.rightCols(nx - k);
    Matrix projected = q_rest.transpose() * noise_cov * q_rest;
    projected = 0.5 * (projected + projected.transpose());
    const auto rot = spectral::sym_eig(projected);
    const Matrix u_n = q_rest * rot.eigenvectors;

    const Matrix x_ll = U_L.transpose() * noise_cov * U_L;
    const Matrix x_nl = u_n.transpose() * noise_cov * U_L;

    const Vector inv_s2 = S_L.array().square().inverse();
    PerturbationReport out;
    out.correction = x_nl * inv_s2.asDiagonal();
    out.corrected_major_eigenvalues = S_L.array().square().matrix() + x_ll.diagonal();
    out.corrected_major_vectors = U_L + u_n * out.correction;
    out.subspace_error_estimate = out.correction.squaredNorm() / static_cast<double>(k);
    return out;
}

double subspace_error_estimate(const Matrix& U_L, const Vector& S_L, const Matrix& noise_cov) {
    const Index k = U_L.cols();
    if (S_L.size() != k || noise_cov.rows() != U_L.rows())
        throw dimension_error("subspace_error_estimate: inconsistent shapes");
    if (S_L.minCoeff() <= 0.0)
        throw singularity_error("subspace_error_estimate: S_L has non-positive entries");
    const Matrix nu = noise_cov * U_L;                      // nx x k
    const Matrix cross = nu - U_L * (U_L.transpose() * nu);  // (I - U_L U_L^T) N U_L
    const Matrix e_t_e = nu.transpose() * cross;            // X_NL^T X_NL
    const Vector inv_s2 = S_L.array().square().inverse();
    return (inv_s2.asDiagonal() * e_t_e * inv_s2.asDiagonal()).trace() /
           static_cast<double>(k);
}

}  // namespace asln::theory
