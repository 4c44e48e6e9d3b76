#pragma once

#include <Eigen/Dense>

namespace squeeze {

struct TridiagonalEigenpair {
    double value;
    Eigen::VectorXd vector; ///< unit norm, sign not fixed
    double residual;        ///< ||T v - value v||_2
};

/// Number of eigenvalues of T strictly below x (Sturm sequence count).
int sturm_count(const Eigen::VectorXd &diag, const Eigen::VectorXd &offdiag,
                double x);

/**
 * Lowest eigenpair of a real symmetric tridiagonal matrix.
 *
 * The eigenvalue is isolated by Sturm-count bisection to full double
 * precision, the eigenvector by inverse iteration with a pivoted tridiagonal
 * LU. Throws NumericalFailure when the residual exceeds 1e-10 * ||T||_inf.
 */
TridiagonalEigenpair lowest_eigenpair(const Eigen::VectorXd &diag,
                                      const Eigen::VectorXd &offdiag);

} // namespace squeeze
