#pragma once

#include <optional>
#include <vector>

#include "rglasso/matrix_ops.hpp"

namespace rglasso {

/// Tuning knobs for the ADMM solvers.
///
/// The penalty schedule matters more than it looks: the geometric growth of
/// mu2 fixes a total soft-threshold budget of lambda/mu2_init * beta/(beta-1)
/// that the S block can transfer to F over a run. With mu2_init = 0.2 and
/// beta = 1.25 that budget is 25*lambda, which keeps anomalies of magnitude
/// above ~25*lambda in S while everything smaller drains into F. mu1 only
/// drives the theta/Z block; starting it at 1.0 shortens the dead phase in
/// which the Z threshold rho/mu1 sits above every entry of theta.
struct SolverConfig {
    double rho = 0.0;    // l1 penalty on the information matrix
    double lambda = 0.0; // l1 penalty on the anomaly part S
    double mu1_init = 1.0;
    double mu2_init = 0.2;
    double beta = 1.25;
    double epsilon = 1e-7;
    int max_iter = 500;
    std::optional<double> mu_cap; // optional ceiling for mu1/mu2 growth

    void validate() const;
};

enum class Termination { Converged, MaxIterations };

struct SolveResult {
    SymMatrix theta; // information matrix estimate, positive definite
    SymMatrix f;     // cleaned covariance, positive semidefinite
    SymMatrix s;     // sparse anomaly part
    SymMatrix z;     // split copy of theta carrying the l1 structure
    int iterations = 0;
    std::vector<double> delta1_history;
    std::vector<double> delta2_history;
    Termination termination = Termination::MaxIterations;

    bool converged() const { return termination == Termination::Converged; }
};

/// One ADMM iterate; exposed so the individual update steps can be driven
/// and checked in isolation.
struct IterationState {
    SymMatrix theta, z, f, s, u1, u2;
    double mu1 = 0.2;
    double mu2 = 0.2;
    int k = 0;

    static IterationState initial(const SymMatrix& m, const SolverConfig& config);
};

struct ConvergenceCheck {
    double delta1 = 0.0; // ||theta_next - theta_prev||_F / ||theta_prev||_F
    double delta2 = 0.0; // ||m - f - s||_F / ||m||_F
    bool converged = false;
};

/// theta <- argmin -log|X| + tr(F X) + (mu1/2)||X - Z + U1||_F^2,
/// solved in closed form through the log-det prox of mu1 (Z - U1) - F.
SymMatrix update_theta(const IterationState& state);

/// z <- Soft_{rho/mu1}(theta + U1).
SymMatrix update_z(const IterationState& state, double rho);

/// f <- project_psd(U2 + M - S - (1/mu2) theta).
SymMatrix update_f(const IterationState& state, const SymMatrix& m);

/// s <- Soft_{lambda/mu2}(U2 + M - F).
SymMatrix update_s(const IterationState& state, const SymMatrix& m, double lambda);

ConvergenceCheck check_convergence(const SymMatrix& theta_prev,
                                   const SymMatrix& theta_next,
                                   const SymMatrix& m, const SymMatrix& f,
                                   const SymMatrix& s, double epsilon);

/// Splits a contaminated covariance M into a cleaned part F (whose inverse
/// theta is sparse) and a sparse anomaly part S, by alternating the six
/// updates theta, Z, U1, F, S, U2 with geometric growth of mu1/mu2, until
/// both delta criteria fall below epsilon or max_iter is hit.
SolveResult rglasso_solve(const SymMatrix& m, const SolverConfig& config);

/// Standard sparse inverse covariance estimation: the same machinery as
/// rglasso_solve with F pinned to M and the S/U2 block removed; convergence
/// is judged on delta1 alone. Returns the positive definite theta.
SymMatrix glasso_solve(const SymMatrix& m, double rho,
                       const SolverConfig& config = {});

} // namespace rglasso
