#pragma once

#include "asln/types.hpp"

#include <optional>

namespace asln::spectral {

/// Eigenpairs of a symmetric matrix, eigenvalues descending, eigenvectors
/// column-orthonormal with a deterministic sign convention (the
/// largest-magnitude component of each eigenvector is positive; ties go to
/// the lowest row index).
struct SpectralDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;
};

/// Thin SVD, singular values descending and non-negative. U and V carry the
/// same sign convention as sym_eig, applied to the columns of U.
struct SvdDecomposition {
    Matrix u;
    Vector singular_values;
    Matrix v;
};

/// Full symmetric eigendecomposition, or the top-k eigenpairs when k is
/// given. The input must be square and symmetric within 1e-10 relative to
/// its largest entry; violations raise dimension_error.
SpectralDecomposition sym_eig(const Matrix& m, std::optional<Index> k = std::nullopt);

SvdDecomposition svd_thin(const Matrix& m);

/// Moore-Penrose pseudo-inverse via SVD; singular values below
/// tol * s_max are treated as zero.
Matrix pinv(const Matrix& m, double tol = 1e-12);

/// Element-wise n-th power (n >= 1).
Matrix hadamard_pow(const Matrix& m, int n);

}  // namespace asln::spectral
