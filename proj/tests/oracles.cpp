#include "oracles.hpp"

#include <cmath>

namespace oracle {

double golden_section_minimize(const std::function<double(double)>& f,
                               double lo, double hi, int iterations) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> eigenvalues_by_bisection(const Eigen::MatrixXd& a,
                                             int scan_points) {
    const Eigen::Index p = a.rows();
    auto charpoly = [&](double t) {
        return Eigen::FullPivLU<Eigen::MatrixXd>(
                   a - t * Eigen::MatrixXd::Identity(p, p))
            .determinant();
    };
    // Gershgorin bounds.
    double lo = 0.0, hi = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        const double radius = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
        lo = std::min(lo, a(i, i) - radius);
        hi = std::max(hi, a(i, i) + radius);
    }
    lo -= 1e-6;
    hi += 1e-6;

    std::vector<double> roots;
    double prev_t = lo;
    double prev_v = charpoly(lo);
    for (int k = 1; k <= scan_points; ++k) {
        const double t = lo + (hi - lo) * k / scan_points;
        const double v = charpoly(t);
        if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
            double left = prev_t, right = t, fl = prev_v;
            for (int it = 0; it < 200 && right - left > 1e-14 * (1.0 + std::abs(left));
                 ++it) {
                const double mid = 0.5 * (left + right);
                const double fm = charpoly(mid);
                if ((fl < 0.0) == (fm < 0.0)) {
                    left = mid;
                    fl = fm;
                } else {
                    right = mid;
                }
            }
            roots.push_back(0.5 * (left + right));
        }
        prev_t = t;
        prev_v = v;
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

Eigen::MatrixXd nearest_psd_bruteforce(const Eigen::MatrixXd& a, int restarts,
                                       int iterations) {
    const Eigen::Index p = a.rows();
    Eigen::MatrixXd best = Eigen::MatrixXd::Zero(p, p);
    double best_value = 0.5 * a.squaredNorm();

    for (int r = 0; r < restarts; ++r) {
        Eigen::MatrixXd l = Eigen::MatrixXd::Zero(p, p);
        // Deterministic spread of starting factors.
        for (Eigen::Index i = 0; i < p; ++i) {
            for (Eigen::Index j = 0; j <= i; ++j) {
                l(i, j) = 0.3 * std::sin(17.0 * (r + 1) + 3.0 * double(i) +
                                         7.0 * double(j));
            }
            l(i, i) += 0.5;
        }
        double step = 0.1;
        Eigen::MatrixXd x = l * l.transpose();
        double value = 0.5 * (x - a).squaredNorm();
        for (int it = 0; it < iterations; ++it) {
            Eigen::MatrixXd grad = 2.0 * (x - a) * l; // d/dL of 0.5||LL^T - A||^2
            grad = grad.triangularView<Eigen::Lower>();
            Eigen::MatrixXd l_next = l - step * grad;
            Eigen::MatrixXd x_next = l_next * l_next.transpose();
            const double value_next = 0.5 * (x_next - a).squaredNorm();
            if (value_next < value) {
                l = std::move(l_next);
                x = std::move(x_next);
                value = value_next;
                step *= 1.05;
            } else {
                step *= 0.5;
                if (step < 1e-18) break;
            }
        }
        if (value < best_value) {
            best_value = value;
            best = x;
        }
    }
    return best;
}

Eigen::MatrixXd svt_subgradient_oracle(const Eigen::MatrixXd& a, double tau,
                                       int iterations) {
    Eigen::MatrixXd x = a;
    Eigen::MatrixXd best = x;
    auto objective = [&](const Eigen::MatrixXd& m) {
        return tau * nuclear_norm(m) + 0.5 * (m - a).squaredNorm();
    };
    double best_value = objective(x);
    for (int k = 1; k <= iterations; ++k) {
        Eigen::JacobiSVD<Eigen::MatrixXd> dec(x, Eigen::ComputeThinU |
                                                     Eigen::ComputeThinV);
        Eigen::MatrixXd subgrad =
            tau * dec.matrixU() * dec.matrixV().transpose() + (x - a);
        x -= (0.5 / std::sqrt(double(k))) * subgrad;
        const double value = objective(x);
        if (value < best_value) {
            best_value = value;
            best = x;
        }
    }
    return best;
}

Eigen::MatrixXd two_pass_covariance(const Eigen::MatrixXd& rows) {
    const Eigen::Index n = rows.rows();
    const Eigen::Index p = rows.cols();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
    for (Eigen::Index i = 0; i < n; ++i) mean += rows.row(i).transpose();
    mean /= double(n);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd d = rows.row(i).transpose() - mean;
        cov += d * d.transpose();
    }
    return cov / double(n - 1);
}

double nuclear_norm(const Eigen::MatrixXd& a) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues().sum();
}

} // namespace oracle
