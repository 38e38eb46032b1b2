#pragma once

// Seeded random matrices for tests, independent of the library's Rng.

#include <Eigen/Dense>

#include <cstdint>

namespace asln::testing {

class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // Irwin-Hall approximation is plenty for test data.
    double gaussian() {
        double acc = 0.0;
        for (int i = 0; i < 12; ++i) acc += uniform();
        return acc - 6.0;
    }

private:
    std::uint64_t state_;
};

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     std::uint64_t seed) {
    SplitMix rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
    return m;
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index n, std::uint64_t seed) {
    const Eigen::MatrixXd m = random_matrix(n, n, seed);
    return 0.5 * (m + m.transpose());
}

}  // namespace asln::testing
