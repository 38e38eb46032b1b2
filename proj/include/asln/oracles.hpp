#pragma once

#include "asln/generative.hpp"
#include "asln/nonlinearity.hpp"
#include "asln/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace asln::oracles {

struct LemmaCheck {
    std::string name;
    double predicted;
    double measured;
    double tolerance;  // |measured - predicted| <= tolerance, or a ratio bound
    bool pass;
};

struct LemmaReport {
    int lemma;
    std::vector<LemmaCheck> checks;
    bool pass;          // conjunction of the checks
    bool inconclusive;  // Monte-Carlo error swamped the signal
};

/// Series expansion of Cov[g(v), g(w)] for correlated zero-mean Gaussians:
/// sigma_v sigma_w sum_n E[g^(n)(v)] E[g^(n)(w)] c^n / n!. Derivative
/// expectations are evaluated derivative-free through Hermite integration by
/// parts. g must be one of identity, cube, tanh.
struct Lemma2Result {
    double series;
    double mc_estimate;
    double mc_std_error;
};

Lemma2Result lemma2_series(Nonlinearity g, double sigma_v, double sigma_w, double c,
                           int n_max = 8, Index mc_samples = 1000000,
                           std::uint64_t seed = 1);

/// Spectra of the Hadamard square and cube of A A^T against their predicted
/// major eigenvalues, plus the alignment of the cube's top eigenspace with
/// the column space of A. A should have Normal(0, 1/ns) entries.
LemmaReport lemma3_check(const Matrix& A);

enum class TestFunction { QuarticSingle, QuarticCross };

const char* name(TestFunction f);

/// Gaussian-proxy scaling probe: for y = A s with non-Gaussian sources,
/// measures |E_MC[F(y)] - E_N[F(y)]| on a grid of ns values and fits the
/// log-log slope (expected near -1). Also checks the exact quartic identity
/// deviation = kurtosis * sum_k A_ik^2 A_jk^2 per drawn A, and the source
/// kurtosis itself.
LemmaReport lemma1_probe(SourceDistribution source, TestFunction f,
                         const std::vector<Index>& ns_grid, Index T, std::uint64_t seed);

}  // namespace asln::oracles
