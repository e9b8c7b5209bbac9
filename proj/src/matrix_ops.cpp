#include "rglasso/matrix_ops.hpp"

#include <cmath>
#include <sstream>

namespace rglasso {

namespace {

std::string condition_summary(const Eigen::MatrixXd& m, const char* label) {
    std::ostringstream out;
    out << label << ": dim=" << m.rows() << "x" << m.cols()
        << " fro_norm=" << m.norm() << " min_entry=" << m.minCoeff()
        << " max_entry=" << m.maxCoeff();
    return out.str();
}

} // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd values) {
    if (values.rows() != values.cols() || values.rows() < 1) {
        throw std::invalid_argument("SymMatrix requires a square, nonempty matrix");
    }
    if (!values.allFinite()) {
        throw std::invalid_argument("SymMatrix entries must be finite");
    }
    m_ = 0.5 * (values + values.transpose());
}

SymMatrix SymMatrix::zero(Eigen::Index p) {
    return SymMatrix(Eigen::MatrixXd::Zero(p, p));
}

SymMatrix SymMatrix::identity(Eigen::Index p) {
    return SymMatrix(Eigen::MatrixXd::Identity(p, p));
}

SymMatrix soft_threshold_matrix(const SymMatrix& a, double tau) {
    Eigen::MatrixXd out = a.mat().unaryExpr(
        [tau](double x) { return soft_threshold(x, tau); });
    return SymMatrix(std::move(out));
}

EigenPair sym_eigen(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.mat());
    if (solver.info() != Eigen::Success) {
        throw EigenSolverError(condition_summary(a.mat(), "eigendecomposition failed"));
    }
    const Eigen::Index p = a.dim();
    EigenPair pair{Eigen::MatrixXd(p, p), Eigen::VectorXd(p)};
    // Eigen sorts ascending; flip to descending and fix the sign of each
    // eigenvector so the first non-negligible component is nonnegative.
    for (Eigen::Index k = 0; k < p; ++k) {
        const Eigen::Index src = p - 1 - k;
        pair.values(k) = solver.eigenvalues()(src);
        Eigen::VectorXd v = solver.eigenvectors().col(src);
        for (Eigen::Index i = 0; i < p; ++i) {
            if (std::abs(v(i)) > 1e-12) {
                if (v(i) < 0.0) v = -v;
                break;
            }
        }
        pair.vectors.col(k) = v;
    }
    return pair;
}

SymMatrix project_psd(const SymMatrix& a) {
    EigenPair eig = sym_eigen(a);
    Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
    return SymMatrix(eig.vectors * clipped.asDiagonal() * eig.vectors.transpose());
}

SymMatrix log_det_prox(const SymMatrix& w, double mu) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("log_det_prox requires mu > 0");
    }
    EigenPair eig = sym_eigen(w);
    Eigen::VectorXd out_values(w.dim());
    for (Eigen::Index i = 0; i < w.dim(); ++i) {
        const double d = eig.values(i);
        const double s = std::sqrt(d * d + 4.0 * mu);
        // (d + s)/(2 mu) rewritten as 2/(s - d) for d < 0 to avoid cancellation.
        out_values(i) = d >= 0.0 ? (d + s) / (2.0 * mu) : 2.0 / (s - d);
    }
    return SymMatrix(eig.vectors * out_values.asDiagonal() * eig.vectors.transpose());
}

SvdResult svd(const Eigen::MatrixXd& a) {
    if (!a.allFinite()) {
        throw std::invalid_argument("svd requires finite entries");
    }
    Eigen::BDCSVD<Eigen::MatrixXd> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        throw EigenSolverError(condition_summary(a, "svd failed"));
    }
    return SvdResult{solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

Eigen::MatrixXd singular_value_threshold(const Eigen::MatrixXd& a, double tau) {
    SvdResult dec = svd(a);
    Eigen::VectorXd shrunk = dec.singular_values.unaryExpr(
        [tau](double s) { return soft_threshold(s, tau); });
    return dec.u * shrunk.asDiagonal() * dec.v.transpose();
}

} // namespace rglasso
