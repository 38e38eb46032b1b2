#include "asln/generative.hpp"

#include "asln/spectral.hpp"

#include <cmath>
#include <numbers>

namespace asln {

namespace {

constexpr double kTruncCut = 2.5;

double gauss_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double gauss_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Moments of the standard normal truncated to [-c, c].
double truncated_second_moment(double c) {
    const double z = 2.0 * gauss_cdf(c) - 1.0;
    return 1.0 - 2.0 * c * gauss_pdf(c) / z;
}

double truncated_fourth_moment(double c) {
    const double z = 2.0 * gauss_cdf(c) - 1.0;
    return 3.0 - 2.0 * (c * c * c + 3.0 * c) * gauss_pdf(c) / z;
}

// Fill in row-major order so the draw sequence is part of the format.
void fill_gaussian(Matrix& m, Rng& rng, double stddev) {
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = stddev * rng.gaussian();
}

}  // namespace

const char* name(SourceKind kind) {
    switch (kind) {
        case SourceKind::Uniform: return "uniform";
        case SourceKind::TruncatedNormal: return "truncated-normal";
        case SourceKind::Gaussian: return "gaussian";
    }
    return "?";
}

SourceKind source_from_name(const std::string& s) {
    if (s == "uniform") return SourceKind::Uniform;
    if (s == "truncated-normal" || s == "truncnormal") return SourceKind::TruncatedNormal;
    if (s == "gaussian") return SourceKind::Gaussian;
    throw config_error("unknown source distribution: " + s);
}

SourceDistribution SourceDistribution::make(SourceKind kind) {
    switch (kind) {
        case SourceKind::Uniform:
            return {kind, 9.0 / 5.0 - 3.0};
        case SourceKind::TruncatedNormal: {
            const double m2 = truncated_second_moment(kTruncCut);
            const double m4 = truncated_fourth_moment(kTruncCut);
            return {kind, m4 / (m2 * m2) - 3.0};
        }
        case SourceKind::Gaussian:
            return {kind, 0.0};
    }
    throw config_error("unknown source kind");
}

double SourceDistribution::sample(Rng& rng) const {
    switch (kind) {
        case SourceKind::Uniform:
            return std::sqrt(3.0) * (2.0 * rng.uniform01() - 1.0);
        case SourceKind::TruncatedNormal: {
            const double scale = 1.0 / std::sqrt(truncated_second_moment(kTruncCut));
            double z;
            do {
                z = rng.gaussian();
            } while (std::abs(z) > kTruncCut);
            return scale * z;
        }
        case SourceKind::Gaussian:
            return rng.gaussian();
    }
    return 0.0;
}

GenerativeProcess build_process(Index ns, Index nf, Index nx, Nonlinearity nonlinearity,
                                SourceDistribution source, std::uint64_t seed) {
    if (ns < 1 || nf < ns || nx < 1)
        throw config_error("build_process: need 1 <= ns <= nf and nx >= 1");
    GenerativeProcess p;
    p.ns = ns;
    p.nf = nf;
    p.nx = nx;
    p.nonlinearity = nonlinearity;
    p.source = source;
    p.seed = seed;

    Rng rng_a(seed, "A");
    p.A.resize(nf, ns);
    fill_gaussian(p.A, rng_a, 1.0 / std::sqrt(static_cast<double>(ns)));

    Rng rng_offset(seed, "a");
    p.offset.resize(nf);
    for (Index i = 0; i < nf; ++i)
        p.offset(i) = rng_offset.gaussian() / std::sqrt(static_cast<double>(ns));

    Rng rng_b(seed, "B");
    p.B.resize(nx, nf);
    fill_gaussian(p.B, rng_b, 1.0 / std::sqrt(static_cast<double>(nf)));
    return p;
}

namespace {

Matrix draw_sources(const GenerativeProcess& p, Index T, std::uint64_t seed) {
    Rng rng(seed, "S");
    Matrix S(T, p.ns);
    for (Index t = 0; t < T; ++t)
        for (Index j = 0; j < p.ns; ++j) S(t, j) = p.source.sample(rng);
    return S;
}

}  // namespace

SampleBatch sample_batch(const GenerativeProcess& p, Index T, std::uint64_t seed) {
    if (T < 2) throw config_error("sample_batch: T must be >= 2");
    SampleBatch b;
    b.S = draw_sources(p, T, seed);
    b.F = b.S * p.A.transpose();
    b.F.rowwise() += p.offset.transpose();
    for (Index i = 0; i < b.F.size(); ++i) b.F(i) = apply(p.nonlinearity, b.F(i));
    b.X = b.F * p.B.transpose();
    b.input_mean = b.X.colwise().mean().transpose();
    return b;
}

InputSample sample_inputs(const GenerativeProcess& p, Index T, std::uint64_t seed) {
    if (T < 2) throw config_error("sample_inputs: T must be >= 2");
    constexpr Index kBlock = 2048;
    InputSample out;
    out.S = draw_sources(p, T, seed);
    out.X.resize(T, p.nx);
    for (Index row = 0; row < T; row += kBlock) {
        const Index n = std::min(kBlock, T - row);
        Matrix fblk = out.S.middleRows(row, n) * p.A.transpose();
        fblk.rowwise() += p.offset.transpose();
        for (Index i = 0; i < fblk.size(); ++i) fblk(i) = apply(p.nonlinearity, fblk(i));
        out.X.middleRows(row, n) = fblk * p.B.transpose();
    }
    out.input_mean = out.X.colwise().mean().transpose();
    return out;
}

GroundTruth ground_truth_decomposition(const GenerativeProcess& p, const SampleBatch& batch) {
    const Index T = batch.F.rows();
    if (batch.F.cols() != p.nf || batch.S.cols() != p.ns)
        throw dimension_error("ground_truth_decomposition: batch does not match process");
    const double inv_t = 1.0 / static_cast<double>(T);

    const Vector f_mean = batch.F.colwise().mean().transpose();
    const Vector s_mean = batch.S.colwise().mean().transpose();

    // Second-moment blocks; everything below is algebra on them, so the
    // T x nf residual matrix never has to be materialized.
    const Matrix g_ff = (batch.F.transpose() * batch.F) * inv_t;
    const Matrix g_fs = (batch.F.transpose() * batch.S) * inv_t;
    const Matrix g_ss = (batch.S.transpose() * batch.S) * inv_t;

    GroundTruth gt;
    gt.H = g_fs - f_mean * s_mean.transpose();  // E[(f - E[f]) s^T]

    // Cov[phi] for phi = (f - E[f]) - H s, phi_mean = -H s_mean.
    const Matrix cf = g_ff - f_mean * f_mean.transpose();
    Matrix sigma = cf - gt.H * gt.H.transpose() - gt.H * gt.H.transpose() +
                   gt.H * g_ss * gt.H.transpose();
    const Vector phi_mean = -(gt.H * s_mean);
    sigma -= phi_mean * phi_mean.transpose();
    gt.Sigma = 0.5 * (sigma + sigma.transpose());

    gt.BH = p.B * gt.H;
    const auto svd = spectral::svd_thin(gt.BH);
    gt.U_L = svd.u;
    gt.S_L = svd.singular_values;
    gt.sigma_unstable = T < 10 * p.nf;
    return gt;
}

}  // namespace asln
