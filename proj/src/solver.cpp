#include "rglasso/solver.hpp"

#include <cmath>
#include <sstream>

namespace rglasso {

namespace {

double grow_mu(double mu, double beta, const std::optional<double>& cap) {
    double next = mu * beta;
    if (cap && next > *cap) next = *cap;
    return next;
}

} // namespace

void SolverConfig::validate() const {
    if (rho < 0.0) throw std::invalid_argument("rho must be nonnegative");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    if (!(mu1_init > 0.0)) throw std::invalid_argument("mu1_init must be positive");
    if (!(mu2_init > 0.0)) throw std::invalid_argument("mu2_init must be positive");
    if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (mu_cap && !(*mu_cap > 0.0)) throw std::invalid_argument("mu_cap must be positive");
}

IterationState IterationState::initial(const SymMatrix& m, const SolverConfig& config) {
    const Eigen::Index p = m.dim();
    // F = Z = U1 = U2 = 0 and S = M - F = M; theta starts at the identity so
    // the first delta1 is well defined.
    return IterationState{SymMatrix::identity(p), SymMatrix::zero(p),
                          SymMatrix::zero(p),     m,
                          SymMatrix::zero(p),     SymMatrix::zero(p),
                          config.mu1_init,        config.mu2_init,
                          0};
}

SymMatrix update_theta(const IterationState& state) {
    SymMatrix w(state.mu1 * (state.z.mat() - state.u1.mat()) - state.f.mat());
    return log_det_prox(w, state.mu1);
}

SymMatrix update_z(const IterationState& state, double rho) {
    SymMatrix arg(state.theta.mat() + state.u1.mat());
    return soft_threshold_matrix(arg, rho / state.mu1);
}

SymMatrix update_f(const IterationState& state, const SymMatrix& m) {
    // U2 is the scaled dual of the M = F + S constraint and enters the F and
    // S subproblem arguments directly; only theta keeps its 1/mu2 weight.
    SymMatrix arg(state.u2.mat() + m.mat() - state.s.mat() -
                  state.theta.mat() / state.mu2);
    return project_psd(arg);
}

SymMatrix update_s(const IterationState& state, const SymMatrix& m, double lambda) {
    SymMatrix arg(state.u2.mat() + m.mat() - state.f.mat());
    return soft_threshold_matrix(arg, lambda / state.mu2);
}

ConvergenceCheck check_convergence(const SymMatrix& theta_prev,
                                   const SymMatrix& theta_next,
                                   const SymMatrix& m, const SymMatrix& f,
                                   const SymMatrix& s, double epsilon) {
    const double prev_norm = theta_prev.norm();
    const double m_norm = m.norm();
    if (prev_norm == 0.0 || m_norm == 0.0) {
        throw std::domain_error("convergence ratios undefined: zero-norm denominator");
    }
    ConvergenceCheck check;
    check.delta1 = (theta_next.mat() - theta_prev.mat()).norm() / prev_norm;
    check.delta2 = (m.mat() - f.mat() - s.mat()).norm() / m_norm;
    check.converged = check.delta1 < epsilon && check.delta2 < epsilon;
    return check;
}

SolveResult rglasso_solve(const SymMatrix& m, const SolverConfig& config) {
    config.validate();
    if (m.norm() == 0.0) {
        throw std::invalid_argument("rglasso_solve: input matrix is identically zero");
    }

    IterationState state = IterationState::initial(m, config);
    std::vector<double> delta1_history, delta2_history;
    delta1_history.reserve(static_cast<std::size_t>(config.max_iter));
    delta2_history.reserve(static_cast<std::size_t>(config.max_iter));

    for (int k = 1; k <= config.max_iter; ++k) {
        try {
            // The Z update reads the fresh theta with the previous U1; the F
            // and S updates read the previous U2. Both duals move only after
            // their primal blocks, so assigning into the state as we go
            // reproduces the six-step cycle exactly.
            SymMatrix theta_prev = state.theta;
            state.theta = update_theta(state);
            state.z = update_z(state, config.rho);
            state.u1 = SymMatrix(state.u1.mat() + state.theta.mat() - state.z.mat());
            state.f = update_f(state, m);
            state.s = update_s(state, m, config.lambda);
            state.u2 = SymMatrix(state.u2.mat() + m.mat() - state.f.mat() - state.s.mat());
            state.mu1 = grow_mu(state.mu1, config.beta, config.mu_cap);
            state.mu2 = grow_mu(state.mu2, config.beta, config.mu_cap);
            state.k = k;

            ConvergenceCheck check = check_convergence(theta_prev, state.theta, m,
                                                       state.f, state.s, config.epsilon);
            delta1_history.push_back(check.delta1);
            delta2_history.push_back(check.delta2);
            if (check.converged) {
                return SolveResult{state.theta, state.f, state.s, state.z,
                                   k, std::move(delta1_history),
                                   std::move(delta2_history), Termination::Converged};
            }
        } catch (const EigenSolverError& err) {
            std::ostringstream out;
            out << "rglasso_solve failed at iteration " << k << ": " << err.what();
            throw SolverError(out.str());
        }
    }
    return SolveResult{state.theta, state.f, state.s, state.z,
                       config.max_iter, std::move(delta1_history),
                       std::move(delta2_history), Termination::MaxIterations};
}

SymMatrix glasso_solve(const SymMatrix& m, double rho, const SolverConfig& config) {
    config.validate();
    if (rho < 0.0) {
        throw std::invalid_argument("glasso_solve: rho must be nonnegative");
    }
    if (m.norm() == 0.0) {
        throw std::invalid_argument("glasso_solve: input matrix is identically zero");
    }

    const Eigen::Index p = m.dim();
    SymMatrix theta = SymMatrix::identity(p);
    SymMatrix z = SymMatrix::zero(p);
    SymMatrix u1 = SymMatrix::zero(p);
    double mu1 = config.mu1_init;

    for (int k = 1; k <= config.max_iter; ++k) {
        try {
            SymMatrix w(mu1 * (z.mat() - u1.mat()) - m.mat());
            SymMatrix theta_next = log_det_prox(w, mu1);
            z = soft_threshold_matrix(SymMatrix(theta_next.mat() + u1.mat()), rho / mu1);
            u1 = SymMatrix(u1.mat() + theta_next.mat() - z.mat());
            mu1 = grow_mu(mu1, config.beta, config.mu_cap);

            const double delta1 =
                (theta_next.mat() - theta.mat()).norm() / theta.norm();
            theta = theta_next;
            if (delta1 < config.epsilon) return theta;
        } catch (const EigenSolverError& err) {
            std::ostringstream out;
            out << "glasso_solve failed at iteration " << k << ": " << err.what();
            throw SolverError(out.str());
        }
    }
    return theta;
}

} // namespace rglasso
