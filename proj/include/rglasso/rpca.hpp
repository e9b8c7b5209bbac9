#pragma once

#include <vector>

#include <Eigen/Dense>

namespace rglasso {

struct RpcaResult {
    Eigen::MatrixXd l; // low-rank part
    Eigen::MatrixXd s; // sparse part
    int iterations = 0;
    std::vector<double> residual_history; // ||M - L - S||_F / ||M||_F per iteration
    bool converged = false;
};

/// Standard principal-component-pursuit weight 1/sqrt(max(rows, cols)).
double rpca_default_lambda(Eigen::Index rows, Eigen::Index cols);

/// Principal component pursuit, min ||L||_* + lambda ||S||_1 s.t. M = L + S,
/// solved by the inexact augmented Lagrangian method: singular value
/// thresholding for L, elementwise shrinkage for S, dual ascent on Y, with
/// the penalty mu growing by 1.5 per iteration. Stops when the relative
/// feasibility residual drops below epsilon.
RpcaResult rpca_solve(const Eigen::MatrixXd& m, double lambda,
                      double epsilon = 1e-7, int max_iter = 500);

} // namespace rglasso
