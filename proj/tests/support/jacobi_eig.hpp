#pragma once

// Independent reference eigensolver for test oracles: cyclic Jacobi
// rotations on a symmetric matrix. Deliberately unrelated to the library's
// eigendecomposition code path.

#include <Eigen/Dense>

#include <cmath>

namespace asln::testing {

inline void jacobi_eig(Eigen::MatrixXd a, Eigen::VectorXd& eigenvalues,
                       Eigen::MatrixXd& eigenvectors, int max_sweeps = 100,
                       double tol = 1e-14) {
    const Eigen::Index n = a.rows();
    eigenvectors = Eigen::MatrixXd::Identity(n, n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= tol * a.norm()) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Eigen::JacobiRotation<double> rot(c, s);
                a.applyOnTheLeft(p, q, rot.transpose());
                a.applyOnTheRight(p, q, rot);
                eigenvectors.applyOnTheRight(p, q, rot);
            }
        }
    }
    eigenvalues = a.diagonal();
    // sort descending, carrying the vectors along
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = i;
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (eigenvalues(j) > eigenvalues(best)) best = j;
        if (best != i) {
            std::swap(eigenvalues(i), eigenvalues(best));
            eigenvectors.col(i).swap(eigenvectors.col(best));
        }
    }
}

}  // namespace asln::testing
