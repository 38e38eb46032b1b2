#pragma once

#include "asln/nonlinearity.hpp"
#include "asln/rng.hpp"
#include "asln/types.hpp"

#include <cstdint>

namespace asln {

enum class SourceKind { Uniform, TruncatedNormal, Gaussian };

const char* name(SourceKind kind);
SourceKind source_from_name(const std::string& s);

/// Zero-mean unit-variance source distribution. Uniform is supported on
/// [-sqrt(3), sqrt(3)]; the truncated normal truncates at +-2.5 pre-truncation
/// standard deviations and rescales back to unit variance.
struct SourceDistribution {
    SourceKind kind;
    double kurtosis;  // E[s^4] - 3

    static SourceDistribution make(SourceKind kind);
    double sample(Rng& rng) const;
};

/// Frozen parameters of the two-layer world model x = B f(A s + offset).
/// A and offset have i.i.d. Normal(0, 1/N_s) entries, B has Normal(0, 1/N_f)
/// entries; everything is a pure function of the seed.
struct GenerativeProcess {
    Index ns, nf, nx;
    Matrix A;       // nf x ns
    Vector offset;  // nf
    Matrix B;       // nx x nf
    Nonlinearity nonlinearity;
    SourceDistribution source;
    std::uint64_t seed;
};

GenerativeProcess build_process(Index ns, Index nf, Index nx, Nonlinearity nonlinearity,
                                SourceDistribution source, std::uint64_t seed);

/// T i.i.d. draws through the process: sources S (T x ns), basis values
/// F (T x nf), inputs X (T x nx), and the empirical column mean of X.
struct SampleBatch {
    Matrix S, F, X;
    Vector input_mean;
};

SampleBatch sample_batch(const GenerativeProcess& p, Index T, std::uint64_t seed);

/// Same draws as sample_batch but F is streamed in row blocks and never
/// materialized; use for large nf when the basis values are not needed.
struct InputSample {
    Matrix S, X;
    Vector input_mean;
};

InputSample sample_inputs(const GenerativeProcess& p, Index T, std::uint64_t seed);

/// Oracle-side decomposition of a process, estimated from a batch:
/// H = E[(f - E[f]) s^T], Sigma = Cov[f - E[f] - H s], BH = B H, and the
/// thin SVD of BH. sigma_unstable flags batches smaller than 10 * nf draws.
struct GroundTruth {
    Matrix H;      // nf x ns
    Matrix Sigma;  // nf x nf, symmetric
    Matrix BH;     // nx x ns
    Matrix U_L;    // nx x ns, left singular vectors of BH
    Vector S_L;    // ns singular values, descending
    bool sigma_unstable;
};

GroundTruth ground_truth_decomposition(const GenerativeProcess& p, const SampleBatch& batch);

/// Conservative batch size for a stable Sigma estimate.
inline Index default_sample_count(Index nf) { return std::max<Index>(100000, 20 * nf); }

}  // namespace asln
