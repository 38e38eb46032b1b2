#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace asln {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Shape or symmetry precondition violated.
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Invalid process or experiment configuration.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Rank-deficient input where an inverse is required.
struct singularity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Degenerate inputs to source alignment (e.g. a zero-variance column).
struct alignment_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Online training blew up; carries the epoch at which it happened.
struct divergence_error : std::runtime_error {
    divergence_error(const std::string& msg, int epoch_)
        : std::runtime_error(msg + " (epoch " + std::to_string(epoch_) + ")"), epoch(epoch_) {}
    int epoch;
};

}  // namespace asln
