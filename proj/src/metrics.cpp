#include "asln/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace asln::metrics {

namespace {

void check_orthonormal(const Matrix& u, const char* who) {
    const Matrix gram = u.transpose() * u;
    const double dev = (gram - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-6) throw dimension_error(std::string(who) + ": columns are not orthonormal");
}

}  // namespace

double subspace_error(const Matrix& P, const Matrix& U) {
    if (P.rows() != U.rows() || P.cols() != U.cols())
        throw dimension_error("subspace_error: shape mismatch");
    check_orthonormal(P, "subspace_error");
    check_orthonormal(U, "subspace_error");
    const double overlap = (P.transpose() * U).squaredNorm() / static_cast<double>(P.cols());
    return std::clamp(1.0 - overlap, 0.0, 1.0);
}

std::vector<Index> solve_assignment(const Matrix& cost) {
    // Hungarian algorithm, shortest augmenting path formulation with row
    // and column potentials; O(n^3).
    const Index n = cost.rows();
    std::vector<double> pot_row(n + 1, 0.0), pot_col(n + 1, 0.0);
    std::vector<Index> matched_row(n + 1, n);  // matched_row[col] = row
    std::vector<Index> prev_col(n + 1, n);

    for (Index row = 0; row < n; ++row) {
        matched_row[n] = row;
        Index cur_col = n;
        std::vector<double> min_dist(n + 1, std::numeric_limits<double>::infinity());
        std::vector<bool> used(n + 1, false);
        do {
            used[cur_col] = true;
            const Index cur_row = matched_row[cur_col];
            double best = std::numeric_limits<double>::infinity();
            Index best_col = n;
            for (Index col = 0; col < n; ++col) {
                if (used[col]) continue;
                const double slack = cost(cur_row, col) - pot_row[cur_row] - pot_col[col];
                if (slack < min_dist[col]) {
                    min_dist[col] = slack;
                    prev_col[col] = cur_col;
                }
                if (min_dist[col] < best) {
                    best = min_dist[col];
                    best_col = col;
                }
            }
            for (Index col = 0; col <= n; ++col) {
                if (used[col]) {
                    pot_row[matched_row[col]] += best;
                    pot_col[col] -= best;
                } else {
                    min_dist[col] -= best;
                }
            }
            cur_col = best_col;
        } while (matched_row[cur_col] != n);
        while (cur_col != n) {
            const Index col = prev_col[cur_col];
            matched_row[cur_col] = matched_row[col];
            cur_col = col;
        }
    }

    std::vector<Index> col_of_row(n);
    for (Index col = 0; col < n; ++col)
        if (matched_row[col] < n) col_of_row[matched_row[col]] = col;
    return col_of_row;
}

Alignment align_sources(const Matrix& u_hat, const Matrix& s) {
    if (u_hat.rows() != s.rows() || u_hat.cols() != s.cols())
        throw dimension_error("align_sources: shape mismatch");
    const Index T = u_hat.rows();
    const Index k = u_hat.cols();
    if (T < 2) throw dimension_error("align_sources: need at least 2 rows");

    const Vector mu = u_hat.colwise().mean().transpose();
    const Vector ms = s.colwise().mean().transpose();
    Vector sd_u(k), sd_s(k);
    for (Index j = 0; j < k; ++j) {
        sd_u(j) = std::sqrt((u_hat.col(j).array() - mu(j)).square().mean());
        sd_s(j) = std::sqrt((s.col(j).array() - ms(j)).square().mean());
        if (sd_u(j) == 0.0 || sd_s(j) == 0.0)
            throw alignment_error("align_sources: zero-variance column");
    }

    // corr(i, j) = correlation between source column i and estimate column j
    Matrix corr(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
            const double cov =
                ((s.col(i).array() - ms(i)) * (u_hat.col(j).array() - mu(j))).mean();
            corr(i, j) = cov / (sd_s(i) * sd_u(j));
        }

    const auto assignment = solve_assignment(-corr.cwiseAbs());

    Alignment out;
    out.permutation.resize(k);
    out.signs.resize(k);
    out.score = 0.0;
    for (Index i = 0; i < k; ++i) {
        out.permutation[i] = assignment[i];
        out.signs[i] = corr(i, assignment[i]) >= 0.0 ? 1 : -1;
        out.score += std::abs(corr(i, assignment[i]));
    }
    return out;
}

Matrix apply_alignment(const Matrix& u_hat, const Alignment& alignment) {
    const Index k = u_hat.cols();
    if (static_cast<Index>(alignment.permutation.size()) != k)
        throw dimension_error("apply_alignment: alignment does not match columns");
    Matrix out(u_hat.rows(), k);
    for (Index i = 0; i < k; ++i)
        out.col(i) = alignment.signs[i] * u_hat.col(alignment.permutation[i]);
    return out;
}

double bss_mse(const Matrix& u_aligned, const Matrix& s) {
    if (u_aligned.rows() != s.rows() || u_aligned.cols() != s.cols())
        throw dimension_error("bss_mse: shape mismatch");
    return (s - u_aligned).squaredNorm() /
           static_cast<double>(s.rows() * s.cols());
}

Matrix source_encoder_cov(const Matrix& u_hat, const Matrix& s, bool absolute) {
    if (u_hat.rows() != s.rows()) throw dimension_error("source_encoder_cov: shape mismatch");
    const Index T = u_hat.rows();
    const Vector mu = u_hat.colwise().mean().transpose();
    const Vector ms = s.colwise().mean().transpose();
    Matrix cov = (u_hat.rowwise() - mu.transpose()).transpose() *
                 (s.rowwise() - ms.transpose()) / static_cast<double>(T);
    if (absolute) cov = cov.cwiseAbs();
    return cov;
}

}  // namespace asln::metrics
