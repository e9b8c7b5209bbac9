#include "rglasso/rpca.hpp"

#include <cmath>
#include <stdexcept>

#include "rglasso/matrix_ops.hpp"

namespace rglasso {

double rpca_default_lambda(Eigen::Index rows, Eigen::Index cols) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("rpca_default_lambda requires positive dimensions");
    }
    return 1.0 / std::sqrt(static_cast<double>(std::max(rows, cols)));
}

RpcaResult rpca_solve(const Eigen::MatrixXd& m, double lambda, double epsilon,
                      int max_iter) {
    if (!m.allFinite()) {
        throw std::invalid_argument("rpca_solve requires finite entries");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("rpca_solve requires lambda > 0");
    }
    if (!(epsilon > 0.0) || max_iter < 1) {
        throw std::invalid_argument("rpca_solve: bad epsilon or max_iter");
    }

    const double m_norm = m.norm();
    RpcaResult result{Eigen::MatrixXd::Zero(m.rows(), m.cols()),
                      Eigen::MatrixXd::Zero(m.rows(), m.cols()),
                      0,
                      {},
                      false};
    if (m_norm == 0.0) {
        result.residual_history.push_back(0.0);
        result.converged = true;
        return result;
    }

    const double spectral = svd(m).singular_values(0);
    const double max_abs = m.cwiseAbs().maxCoeff();
    // Dual warm start Y = M / max(||M||_2, ||M||_inf / lambda), the usual
    // inexact-ALM initialization.
    Eigen::MatrixXd y = m / std::max(spectral, max_abs / lambda);
    double mu = 1.25 / spectral;
    const double growth = 1.5;
    // mu grows only once the sparse iterate has settled at the current
    // penalty level; unconditional growth can freeze a poor split.
    const double settle_tol = 1e-5;

    Eigen::MatrixXd s_prev = result.s;
    for (int k = 1; k <= max_iter; ++k) {
        result.l = singular_value_threshold(m - result.s + y / mu, 1.0 / mu);
        s_prev.swap(result.s);
        Eigen::MatrixXd s_arg = m - result.l + y / mu;
        result.s = s_arg.unaryExpr([t = lambda / mu](double x) {
            return soft_threshold(x, t);
        });
        Eigen::MatrixXd residual = m - result.l - result.s;
        y += mu * residual;

        const double rel = residual.norm() / m_norm;
        result.residual_history.push_back(rel);
        result.iterations = k;
        if (rel < epsilon) {
            result.converged = true;
            break;
        }
        if (mu * (result.s - s_prev).norm() / m_norm < settle_tol) {
            mu *= growth;
        }
    }
    return result;
}

} // namespace rglasso
