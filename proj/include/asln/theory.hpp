#pragma once

#include "asln/nonlinearity.hpp"
#include "asln/types.hpp"

namespace asln::theory {

/// Gaussian moments of a basis function f: fp = E[f'(xi)], fsq = E[f(xi)^2],
/// fthird = E[f'''(xi)] for xi ~ N(0,1). Derivatives are never taken:
/// E[f'] = E[f(xi) xi] and E[f'''] = E[f(xi)(xi^3 - 3 xi)], which is exact
/// for the distributional derivatives of sign and relu.
struct GaussianCoefficients {
    double f_prime;
    double f_sq;
    double f_third;
    bool odd;  // whether the originating function is odd
};

GaussianCoefficients gaussian_coefficients(Nonlinearity nl);

/// Delta = U_A^T (B^T B - I)^2 U_A: the anisotropy of B^T B in the
/// source-mixing directions. Zero when B has orthonormal columns.
Matrix anisotropy_delta(const Matrix& B, const Matrix& U_A);

/// A predicted source-estimate error covariance and its per-element trace
/// average. The asymptotic form splits into a finite-width term
/// (proportional to N_s/N_f) and a finite-source term (proportional to
/// 1/N_s); the general form reports everything under finite_width_term.
struct ErrorPrediction {
    Matrix cov_eps;
    double per_element_mse;
    double finite_width_term;
    double finite_source_term;
};

/// Exact prediction from a measured decomposition:
/// Cov[eps] = (BH)^+ B Sigma B^T (BH)^{+T}.
ErrorPrediction error_cov_general(const Matrix& BH, const Matrix& B, const Matrix& Sigma);

/// Closed-form asymptotic prediction for odd basis functions:
/// Cov[eps] = (N_s/N_f)(fsq/fp^2 - 1)(I + Delta) + fthird^2/(2 N_s fp^2) I.
/// Rejects coefficients of non-odd functions; use error_cov_general there.
ErrorPrediction error_cov_asymptotic(Index ns, Index nf, const GaussianCoefficients& coeffs,
                                     const Matrix& delta);

/// max eig[B Sigma B^T] / min eig[H^T B^T B H]; +inf when the signal spectrum
/// hits zero. Small values certify that the major eigenspace of Cov[x] is
/// the signal subspace.
double eigenvalue_ratio(const Matrix& BH, const Matrix& B, const Matrix& Sigma);

/// First-order eigenpair correction of the signal eigenmodes under the noise
/// covariance. U_N is the orthonormal complement of U_L rotated so the
/// projected noise covariance is diagonal descending; E = X_NL S_L^{-2}.
struct PerturbationReport {
    Matrix correction;                   // E, (N_x - N_s) x N_s
    Vector corrected_major_eigenvalues;  // S_L^2 + diag(X_LL)
    Matrix corrected_major_vectors;      // U_L + U_N E
    double subspace_error_estimate;      // trace(E^T E) / N_s
};

PerturbationReport perturbation_correction(const Matrix& U_L, const Vector& S_L,
                                           const Matrix& noise_cov);

/// Same trace(E^T E)/N_s as perturbation_correction without constructing the
/// complement basis: tr[S_L^-2 U_L^T N (I - U_L U_L^T) N U_L S_L^-2] / N_s.
double subspace_error_estimate(const Matrix& U_L, const Vector& S_L, const Matrix& noise_cov);

}  // namespace asln::theory
