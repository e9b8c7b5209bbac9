#pragma once

#include <Eigen/Dense>

#include "rglasso/matrix_ops.hpp"
#include "rglasso/rng.hpp"

namespace testutil {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     rglasso::rng::Stream& stream,
                                     double scale = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = scale * stream.uniform(-1.0, 1.0);
        }
    }
    return m;
}

inline rglasso::SymMatrix random_symmetric(Eigen::Index p,
                                           rglasso::rng::Stream& stream,
                                           double scale = 1.0) {
    return rglasso::SymMatrix(random_matrix(p, p, stream, scale));
}

/// Well-conditioned random SPD matrix: B B^T / p + ridge I.
inline rglasso::SymMatrix random_spd(Eigen::Index p,
                                     rglasso::rng::Stream& stream,
                                     double ridge = 0.5) {
    Eigen::MatrixXd b = random_matrix(p, p, stream);
    return rglasso::SymMatrix(b * b.transpose() / double(p) +
                              ridge * Eigen::MatrixXd::Identity(p, p));
}

inline double rel_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
    return (got - want).norm() / want.norm();
}

} // namespace testutil
