#pragma once

#include "asln/generative.hpp"
#include "asln/nonlinearity.hpp"
#include "asln/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace asln::encoders {

/// Top-k principal subspace of the inputs plus the whitening map
/// W = Lambda^{-1/2} P^T. Encoded outputs are W (x - input_mean).
struct PcaEncoder {
    Matrix principal_vectors;  // nx x k, column-orthonormal
    Vector eigenvalues;        // k, descending
    Matrix whitening;          // k x nx
    Vector input_mean;         // nx

    Matrix encode(const Matrix& X) const {
        return (X.rowwise() - input_mean.transpose()) * whitening.transpose();
    }
};

struct IcaEncoder {
    Matrix separation;  // k x k
    Nonlinearity g;

    Matrix encode(const Matrix& U) const { return U * separation.transpose(); }
};

struct TrainLogEntry {
    int epoch;
    double metric;         // subspace error vs reference (PCA) or off-diagonality (ICA)
    double weight_change;  // Frobenius norm of the epoch's weight update
};
using TrainLog = std::vector<TrainLogEntry>;

/// Batch PCA: top-k eigenpairs of the empirical input covariance.
/// Throws singularity_error when the k-th eigenvalue is below 1e-12 of the
/// largest (rank deficiency).
PcaEncoder pca_whiten_batch(const Matrix& X, Index k);

struct OjaConfig {
    double eta = 1e-3;
    int epochs = 20;
    Index batch_size = 256;
    std::uint64_t seed = 0;
};

/// Mini-batch expected update of Oja's subspace rule
/// E[u (x_c - W^T u)^T] with u = W x_c, for centered rows X_c.
Matrix oja_expected_update(const Matrix& W, const Matrix& X_centered);

/// Oja's subspace rule on a sample stream (rows of X, visited in order each
/// epoch). The returned encoder derives its whitening factor from the
/// empirical output covariance at the end of training. When a reference
/// subspace is given, the per-epoch metric is the subspace error against it.
std::pair<PcaEncoder, TrainLog> oja_train(const Matrix& X, Index k, const OjaConfig& cfg,
                                          const Matrix* reference_subspace = nullptr);

struct AmariConfig {
    double eta = 0.02;
    int epochs = 150;
    Index batch_size = 256;
    Nonlinearity g = Nonlinearity::Cube;
    std::uint64_t seed = 0;
};

/// Amari's single-layer ICA rule W += eta (I - E[g(u~) u~^T]) W on whitened
/// inputs. Rows of the returned separation matrix are rescaled to unit
/// output variance over the training stream.
std::pair<IcaEncoder, TrainLog> amari_train(const Matrix& U, const AmariConfig& cfg);

struct CascadeConfig {
    enum class Mode { Batch, Oja };
    Mode mode = Mode::Batch;
    OjaConfig oja;
    AmariConfig ica;
    double train_fraction = 0.5;  // leading fraction of rows used for training
};

struct CascadeResult {
    Matrix estimates;  // T x k, over all rows
    PcaEncoder pca;
    IcaEncoder ica;
    TrainLog pca_log;
    TrainLog ica_log;
};

/// Full linear inversion pipeline: PCA whitening (batch eigendecomposition
/// or Oja's rule) followed by ICA. Encoders are fit on the leading
/// train_fraction of rows; estimates cover every row.
CascadeResult cascade(const Matrix& X, Index k, const CascadeConfig& cfg,
                      const Matrix* reference_subspace = nullptr);

inline CascadeResult cascade(const SampleBatch& batch, Index k, const CascadeConfig& cfg,
                             const Matrix* reference_subspace = nullptr) {
    return cascade(batch.X, k, cfg, reference_subspace);
}

}  // namespace asln::encoders
