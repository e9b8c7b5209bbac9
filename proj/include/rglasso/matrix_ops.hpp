#pragma once

#include <Eigen/Dense>

#include "rglasso/errors.hpp"

namespace rglasso {

/// Dense symmetric matrix with value semantics. Every constructor replaces
/// the input with (A + A^T)/2, so entries (i,j) and (j,i) are bitwise equal
/// from then on; floating-point asymmetry would otherwise leak through the
/// eigensolvers and break the elementwise updates downstream. All entries
/// must be finite.
class SymMatrix {
public:
    explicit SymMatrix(Eigen::MatrixXd values);

    static SymMatrix zero(Eigen::Index p);
    static SymMatrix identity(Eigen::Index p);

    Eigen::Index dim() const { return m_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
    const Eigen::MatrixXd& mat() const { return m_; }
    double norm() const { return m_.norm(); }
    double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

private:
    Eigen::MatrixXd m_;
};

/// Symmetric eigendecomposition, eigenvalues sorted descending, each
/// eigenvector's first component of magnitude above 1e-12 made nonnegative
/// so repeated runs agree across platforms.
struct EigenPair {
    Eigen::MatrixXd vectors; // columns are eigenvectors
    Eigen::VectorXd values;  // descending
};

struct SvdResult {
    Eigen::MatrixXd u;
    Eigen::VectorXd singular_values; // nonnegative, descending
    Eigen::MatrixXd v;
};

/// Scalar shrinkage: prox of tau*|.|.
inline double soft_threshold(double x, double tau) {
    if (x > tau) return x - tau;
    if (x < -tau) return x + tau;
    return 0.0;
}

/// Entrywise shrinkage; symmetry is preserved exactly.
SymMatrix soft_threshold_matrix(const SymMatrix& a, double tau);

EigenPair sym_eigen(const SymMatrix& a);

/// Frobenius-nearest positive semidefinite matrix: negative eigenvalues are
/// clipped to zero (roundoff-scale negatives included). Idempotent.
SymMatrix project_psd(const SymMatrix& a);

/// Unique positive definite minimizer of -log|X| + (mu/2)||X - W/mu||_F^2.
/// With W = Q D Q^T, the solution is Q diag((d + sqrt(d^2 + 4 mu))/(2 mu)) Q^T.
SymMatrix log_det_prox(const SymMatrix& w, double mu);

SvdResult svd(const Eigen::MatrixXd& a);

/// Prox of tau*||.||_* : soft-thresholds the singular values.
Eigen::MatrixXd singular_value_threshold(const Eigen::MatrixXd& a, double tau);

} // namespace rglasso
