#include "asln/encoders.hpp"

#include "asln/metrics.hpp"
#include "asln/rng.hpp"
#include "asln/spectral.hpp"

#include <cmath>

namespace asln::encoders {

namespace {

Matrix random_weights(Index rows, Index cols, std::uint64_t seed, const char* tag) {
    Rng rng(seed, tag);
    Matrix w(rows, cols);
    const double stddev = 1.0 / std::sqrt(static_cast<double>(cols));
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) w(i, j) = stddev * rng.gaussian();
    return w;
}

// Orthonormal basis of the row space of W.
Matrix row_space_basis(const Matrix& w) {
    Eigen::HouseholderQR<Matrix> qr(w.transpose());
    return qr.householderQ() * Matrix::Identity(w.cols(), w.rows());
}

void fix_sign_pair(Matrix& p, Matrix& w) {
    for (Index j = 0; j < p.cols(); ++j) {
        Index imax = 0;
        double best = -1.0;
        for (Index i = 0; i < p.rows(); ++i) {
            const double a = std::abs(p(i, j));
            if (a > best) {
                best = a;
                imax = i;
            }
        }
        if (p(imax, j) < 0.0) {
            p.col(j) = -p.col(j);
            w.row(j) = -w.row(j);
        }
    }
}

}  // namespace

PcaEncoder pca_whiten_batch(const Matrix& X, Index k) {
    const Index T = X.rows();
    const Index nx = X.cols();
    if (T < 2) throw dimension_error("pca_whiten_batch: need at least 2 samples");
    if (k < 1 || k > nx) throw dimension_error("pca_whiten_batch: k out of range");

    PcaEncoder enc;
    enc.input_mean = X.colwise().mean().transpose();
    Matrix cov = X.transpose() * X / static_cast<double>(T) -
                 enc.input_mean * enc.input_mean.transpose();
    cov = 0.5 * (cov + cov.transpose());

    const auto eig = spectral::sym_eig(cov, k);
    if (eig.eigenvalues(k - 1) <= 1e-12 * eig.eigenvalues(0))
        throw singularity_error("pca_whiten_batch: covariance is rank deficient at k");

    enc.principal_vectors = eig.eigenvectors;
    enc.eigenvalues = eig.eigenvalues;
    enc.whitening = eig.eigenvalues.array().rsqrt().matrix().asDiagonal() *
                    eig.eigenvectors.transpose();
    return enc;
}

Matrix oja_expected_update(const Matrix& W, const Matrix& X_centered) {
    const double inv_b = 1.0 / static_cast<double>(X_centered.rows());
    const Matrix u = X_centered * W.transpose();  // b x k
    return inv_b * (u.transpose() * X_centered - (u.transpose() * u) * W);
}

std::pair<PcaEncoder, TrainLog> oja_train(const Matrix& X, Index k, const OjaConfig& cfg,
                                          const Matrix* reference_subspace) {
    const Index T = X.rows();
    const Index nx = X.cols();
    if (T < 2) throw dimension_error("oja_train: need at least 2 samples");
    if (k < 1 || k > nx) throw dimension_error("oja_train: k out of range");
    if (cfg.eta <= 0.0) throw config_error("oja_train: eta must be positive");

    const Vector mean = X.colwise().mean().transpose();
    Matrix w = random_weights(k, nx, cfg.seed, "oja-init");
    TrainLog log;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const Matrix w_start = w;
        for (Index row = 0; row < T; row += cfg.batch_size) {
            const Index n = std::min(cfg.batch_size, T - row);
            const Matrix xc = X.middleRows(row, n).rowwise() - mean.transpose();
            w += cfg.eta * oja_expected_update(w, xc);
        }
        if (w.norm() > 1e6 || !w.allFinite())
            throw divergence_error("oja_train: weights diverged", epoch);

        TrainLogEntry entry;
        entry.epoch = epoch;
        entry.weight_change = (w - w_start).norm();
        if (reference_subspace) {
            entry.metric = metrics::subspace_error(row_space_basis(w), *reference_subspace);
        } else {
            const Matrix gram = w * w.transpose();
            entry.metric = (gram - Matrix::Identity(k, k)).norm() / static_cast<double>(k);
        }
        log.push_back(entry);
    }

    // Rotate the learned subspace onto the empirical principal axes and read
    // the whitening factor off the output covariance.
    const Matrix basis = row_space_basis(w);  // nx x k
    const Matrix u = (X.rowwise() - mean.transpose()) * basis;
    Matrix cov_u = u.transpose() * u / static_cast<double>(T);
    const Vector u_mean = u.colwise().mean().transpose();
    cov_u -= u_mean * u_mean.transpose();
    cov_u = 0.5 * (cov_u + cov_u.transpose());
    const auto eig = spectral::sym_eig(cov_u);

    PcaEncoder enc;
    enc.input_mean = mean;
    enc.principal_vectors = basis * eig.eigenvectors;
    enc.eigenvalues = eig.eigenvalues;
    enc.whitening = eig.eigenvalues.array().rsqrt().matrix().asDiagonal() *
                    enc.principal_vectors.transpose();
    fix_sign_pair(enc.principal_vectors, enc.whitening);
    return {std::move(enc), std::move(log)};
}

std::pair<IcaEncoder, TrainLog> amari_train(const Matrix& U, const AmariConfig& cfg) {
    const Index T = U.rows();
    const Index k = U.cols();
    if (T < 2) throw dimension_error("amari_train: need at least 2 samples");
    if (cfg.eta <= 0.0) throw config_error("amari_train: eta must be positive");
    if (cfg.g != Nonlinearity::Cube && cfg.g != Nonlinearity::Tanh)
        throw config_error("amari_train: g must be cube or tanh");

    Matrix w = random_weights(k, k, cfg.seed, "ica-init");
    const Matrix eye = Matrix::Identity(k, k);
    TrainLog log;

    auto moment = [&](const Matrix& rows) {
        const Matrix est = rows * w.transpose();
        Matrix g = est;
        for (Index i = 0; i < g.size(); ++i) g(i) = apply(cfg.g, g(i));
        return Matrix((g.transpose() * est) / static_cast<double>(rows.rows()));
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const Matrix w_start = w;
        for (Index row = 0; row < T; row += cfg.batch_size) {
            const Index n = std::min(cfg.batch_size, T - row);
            w += cfg.eta * (eye - moment(U.middleRows(row, n))) * w;
        }
        if (w.norm() > 1e6 || !w.allFinite())
            throw divergence_error("amari_train: weights diverged", epoch);
        TrainLogEntry entry;
        entry.epoch = epoch;
        entry.weight_change = (w - w_start).norm();
        entry.metric = (moment(U) - eye).norm() / static_cast<double>(k);
        log.push_back(entry);
    }

    // Fix the output scale: unit variance per component on the training
    // stream, so estimates are comparable to unit-variance sources.
    const Matrix est = U * w.transpose();
    const Vector est_mean = est.colwise().mean().transpose();
    for (Index j = 0; j < k; ++j) {
        const double sd = std::sqrt((est.col(j).array() - est_mean(j)).square().mean());
        if (sd <= 0.0) throw singularity_error("amari_train: degenerate output component");
        w.row(j) /= sd;
    }

    IcaEncoder enc;
    enc.separation = std::move(w);
    enc.g = cfg.g;
    return {std::move(enc), std::move(log)};
}

CascadeResult cascade(const Matrix& X, Index k, const CascadeConfig& cfg,
                      const Matrix* reference_subspace) {
    const Index T = X.rows();
    if (cfg.train_fraction <= 0.0 || cfg.train_fraction > 1.0)
        throw config_error("cascade: train_fraction must be in (0, 1]");
    const Index t_train = std::max<Index>(2, static_cast<Index>(
                                                 std::floor(cfg.train_fraction * T)));
    const Matrix train = X.topRows(std::min(t_train, T));

    CascadeResult out;
    if (cfg.mode == CascadeConfig::Mode::Batch) {
        out.pca = pca_whiten_batch(train, k);
    } else {
        auto [enc, log] = oja_train(train, k, cfg.oja, reference_subspace);
        out.pca = std::move(enc);
        out.pca_log = std::move(log);
    }

    const Matrix u_all = out.pca.encode(X);
    auto [ica, ica_log] = amari_train(u_all.topRows(std::min(t_train, T)), cfg.ica);
    out.ica = std::move(ica);
    out.ica_log = std::move(ica_log);
    out.estimates = out.ica.encode(u_all);
    return out;
}

}  // namespace asln::encoders
