#pragma once

#include "asln/types.hpp"

#include <vector>

namespace asln::metrics {

/// 1 - tr[P^T U U^T P] / k for column-orthonormal P and U of equal shape.
/// 0 iff the spans coincide, 1 iff they are orthogonal; symmetric in P, U.
double subspace_error(const Matrix& P, const Matrix& U);

/// Permutation and sign flips matching estimate columns to source columns:
/// u_hat.col(permutation[i]) * signs[i] estimates s.col(i). score is the
/// attained sum of absolute correlations.
struct Alignment {
    std::vector<Index> permutation;
    std::vector<int> signs;
    double score;
};

/// Optimal assignment on the absolute correlation matrix (Hungarian
/// algorithm). Throws alignment_error on zero-variance columns.
Alignment align_sources(const Matrix& u_hat, const Matrix& s);

Matrix apply_alignment(const Matrix& u_hat, const Alignment& alignment);

/// E[|s - u|^2] / k for already-aligned estimates.
double bss_mse(const Matrix& u_aligned, const Matrix& s);

/// k x k empirical covariance Cov[u_hat, s]; entries replaced by their
/// absolute values when absolute is set.
Matrix source_encoder_cov(const Matrix& u_hat, const Matrix& s, bool absolute = false);

struct MetricsRecord {
    double subspace_error;
    double bss_mse;
    double diag_cov_min;
    double offdiag_cov_max;
};

/// Minimum-cost assignment for a square cost matrix; returns col_of_row.
/// Exposed for testing against exhaustive search.
std::vector<Index> solve_assignment(const Matrix& cost);

}  // namespace asln::metrics
