#include <doctest.h>

#include "rglasso/solver.hpp"
#include "rglasso/synth.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

using namespace rglasso;

namespace {

IterationState random_state(Eigen::Index p, rng::Stream& stream) {
    IterationState state{testutil::random_spd(p, stream),
                         testutil::random_symmetric(p, stream),
                         testutil::random_spd(p, stream),
                         testutil::random_symmetric(p, stream),
                         testutil::random_symmetric(p, stream, 0.3),
                         testutil::random_symmetric(p, stream, 0.3),
                         stream.uniform(0.1, 2.0),
                         stream.uniform(0.1, 2.0),
                         1};
    return state;
}

} // namespace

TEST_CASE("SolverConfig validation") {
    SolverConfig config;
    CHECK_NOTHROW(config.validate());
    SolverConfig bad = config;
    bad.rho = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = config;
    bad.mu1_init = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = config;
    bad.beta = 0.99;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = config;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = config;
    bad.max_iter = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("update_theta satisfies the subproblem stationarity on random iterates") {
    rng::Stream stream(31);
    for (int trial = 0; trial < 100; ++trial) {
        IterationState state = random_state(10, stream);
        SymMatrix theta = update_theta(state);
        const Eigen::MatrixXd theta_inv = theta.mat().inverse();
        // -theta^-1 + F + mu1 (theta - Z + U1) = 0 at the minimizer.
        const double residual =
            (theta_inv - state.f.mat() -
             state.mu1 * (theta.mat() - state.z.mat() + state.u1.mat()))
                .norm() /
            theta_inv.norm();
        CHECK(residual <= 1e-8);
        CHECK(sym_eigen(theta).values.minCoeff() > 0.0);
    }
}

TEST_CASE("update_z trivial cases and prox oracle") {
    rng::Stream stream(32);
    IterationState state = random_state(5, stream);

    SymMatrix no_penalty = update_z(state, 0.0);
    CHECK((no_penalty.mat() - (state.theta.mat() + state.u1.mat())).norm() == 0.0);

    const double huge_rho =
        10.0 * state.mu1 * (state.theta.mat() + state.u1.mat()).cwiseAbs().maxCoeff();
    CHECK(update_z(state, huge_rho).norm() == 0.0);

    const double rho = 0.4;
    SymMatrix z = update_z(state, rho);
    const double tau = rho / state.mu1;
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index j = 0; j < 5; ++j) {
            const double arg = state.theta(i, j) + state.u1(i, j);
            const double want = oracle::golden_section_minimize(
                [&](double x) {
                    return tau * std::abs(x) + 0.5 * (x - arg) * (x - arg);
                },
                -std::abs(arg) - tau - 1.0, std::abs(arg) + tau + 1.0);
            CHECK(std::abs(z(i, j) - want) < 1e-6);
        }
    }
}

TEST_CASE("update_s trivial cases and prox oracle") {
    rng::Stream stream(33);
    IterationState state = random_state(5, stream);
    SymMatrix m = testutil::random_symmetric(5, stream);

    SymMatrix no_penalty = update_s(state, m, 0.0);
    CHECK((no_penalty.mat() - (state.u2.mat() + m.mat() - state.f.mat())).norm() ==
          0.0);

    const double huge_lambda =
        10.0 * state.mu2 *
        (state.u2.mat() + m.mat() - state.f.mat()).cwiseAbs().maxCoeff();
    CHECK(update_s(state, m, huge_lambda).norm() == 0.0);

    const double lambda = 0.7;
    SymMatrix s = update_s(state, m, lambda);
    const double tau = lambda / state.mu2;
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index j = 0; j < 5; ++j) {
            const double arg = state.u2(i, j) + m(i, j) - state.f(i, j);
            const double want = oracle::golden_section_minimize(
                [&](double x) {
                    return tau * std::abs(x) + 0.5 * (x - arg) * (x - arg);
                },
                -std::abs(arg) - tau - 1.0, std::abs(arg) + tau + 1.0);
            CHECK(std::abs(s(i, j) - want) < 1e-6);
        }
    }
}

TEST_CASE("update_f trivial cases") {
    // U2 = 0, S = M, theta = 0-ish: the argument is -theta/mu2, negative
    // definite, so F projects to zero. Matches the first iteration.
    rng::Stream stream(34);
    SymMatrix m = testutil::random_spd(4, stream);
    IterationState state{testutil::random_spd(4, stream),
                         SymMatrix::zero(4),
                         SymMatrix::zero(4),
                         m,
                         SymMatrix::zero(4),
                         SymMatrix::zero(4),
                         0.2,
                         0.2,
                         1};
    CHECK(update_f(state, m).norm() == 0.0);

    // U2 = 0, S = 0, theta = 0 (approximately): F = project_psd(M) = M for PSD M.
    Eigen::MatrixXd tiny = 1e-300 * Eigen::MatrixXd::Identity(4, 4);
    IterationState state2{SymMatrix(tiny), SymMatrix::zero(4), SymMatrix::zero(4),
                          SymMatrix::zero(4), SymMatrix::zero(4), SymMatrix::zero(4),
                          0.2, 0.2, 1};
    CHECK(testutil::rel_error(update_f(state2, m).mat(), m.mat()) < 1e-12);
}

TEST_CASE("update_f is a constrained minimizer: projected gradient cannot improve") {
    rng::Stream stream(35);
    for (int trial = 0; trial < 10; ++trial) {
        IterationState state = random_state(4, stream);
        SymMatrix m = testutil::random_symmetric(4, stream);
        SymMatrix f_star = update_f(state, m);

        const auto objective = [&](const Eigen::MatrixXd& f) {
            const Eigen::MatrixXd gap = state.u2.mat() + m.mat() - f - state.s.mat();
            return (state.theta.mat() * f).trace() +
                   0.5 * state.mu2 * gap.squaredNorm();
        };
        const double value_star = objective(f_star.mat());

        for (double step : {1e-2, 1e-3, 1e-4}) {
            const Eigen::MatrixXd grad =
                state.theta.mat() -
                state.mu2 * (state.u2.mat() + m.mat() - f_star.mat() - state.s.mat());
            SymMatrix stepped = project_psd(SymMatrix(f_star.mat() - step * grad));
            CHECK(objective(stepped.mat()) >= value_star - 1e-9 * (1.0 + std::abs(value_star)));
        }
    }
}

TEST_CASE("check_convergence ratios") {
    rng::Stream stream(36);
    SymMatrix theta = testutil::random_spd(3, stream);
    SymMatrix m = testutil::random_spd(3, stream);
    SymMatrix f(0.25 * m.mat());
    SymMatrix s(0.75 * m.mat());

    ConvergenceCheck same = check_convergence(theta, theta, m, f, s, 1e-7);
    CHECK(same.delta1 == 0.0);
    CHECK(same.delta2 < 1e-15);
    CHECK(same.converged);

    ConvergenceCheck doubled =
        check_convergence(theta, SymMatrix(2.0 * theta.mat()), m, f, s, 1e-7);
    CHECK(doubled.delta1 == doctest::Approx(1.0));

    // Hand-built 2x2 arithmetic.
    Eigen::MatrixXd a(2, 2), b(2, 2), mm(2, 2), ff(2, 2), ss(2, 2);
    a << 3, 0, 0, 4;     // ||a|| = 5
    b << 3, 1, 1, 4;     // ||b - a|| = sqrt(2)
    mm << 2, 0, 0, 0;    // ||mm|| = 2
    ff << 1, 0, 0, 0;
    ss << 0.5, 0, 0, 0;  // ||mm - ff - ss|| = 0.5
    ConvergenceCheck hand = check_convergence(SymMatrix(a), SymMatrix(b),
                                              SymMatrix(mm), SymMatrix(ff),
                                              SymMatrix(ss), 1e-7);
    CHECK(hand.delta1 == doctest::Approx(std::sqrt(2.0) / 5.0));
    CHECK(hand.delta2 == doctest::Approx(0.25));
    CHECK_FALSE(hand.converged);

    CHECK_THROWS_AS(check_convergence(SymMatrix::zero(2), theta, m, f, s, 1e-7),
                    std::domain_error);
}

TEST_CASE("glasso on the identity") {
    SymMatrix identity = SymMatrix::identity(6);
    SymMatrix theta = glasso_solve(identity, 0.0);
    CHECK(testutil::rel_error(theta.mat(), identity.mat()) < 1e-5);

    for (double rho : {0.2, 1.0, 5.0}) {
        SymMatrix sparse = glasso_solve(identity, rho);
        for (Eigen::Index i = 0; i < 6; ++i) {
            for (Eigen::Index j = 0; j < 6; ++j) {
                if (i != j) CHECK(std::abs(sparse(i, j)) < 1e-12);
            }
        }
    }
}

TEST_CASE("glasso at large rho solves decoupled scalar problems") {
    rng::Stream stream(37);
    SymMatrix m = testutil::random_spd(5, stream);
    double max_offdiag = 0.0;
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index j = i + 1; j < 5; ++j) {
            max_offdiag = std::max(max_offdiag, std::abs(m(i, j)));
        }
    }
    const double rho = 2.0 * max_offdiag;
    SymMatrix theta = glasso_solve(m, rho);

    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index j = 0; j < 5; ++j) {
            if (i == j) continue;
            CHECK(std::abs(theta(i, j)) < 1e-5);
        }
        // Per-coordinate problem: -log t + m_ii t + rho t over t > 0.
        const double want = oracle::golden_section_minimize(
            [&](double t) { return -std::log(t) + (m(i, i) + rho) * t; }, 1e-9,
            5.0);
        CHECK(std::abs(theta(i, i) - want) < 1e-3 * want);
    }
}

TEST_CASE("rglasso rejects degenerate input") {
    CHECK_THROWS_AS(rglasso_solve(SymMatrix::zero(4), SolverConfig{}),
                    std::invalid_argument);
}

TEST_CASE("rglasso result invariants on a small problem") {
    rng::Stream stream(38);
    SymMatrix m = testutil::random_spd(8, stream);
    SolverConfig config;
    config.rho = 0.05;
    config.lambda = 0.5;
    SolveResult result = rglasso_solve(m, config);

    REQUIRE(!result.delta2_history.empty());
    CHECK(result.iterations == static_cast<int>(result.delta1_history.size()));
    const double feasibility =
        (m.mat() - result.f.mat() - result.s.mat()).norm() / m.norm();
    CHECK(feasibility == doctest::Approx(result.delta2_history.back()));

    CHECK(sym_eigen(result.theta).values.minCoeff() > 0.0);
    CHECK(sym_eigen(result.f).values.minCoeff() >= -1e-10);

    // All returned blocks are exactly symmetric.
    for (const SymMatrix* block : {&result.theta, &result.f, &result.s, &result.z}) {
        for (Eigen::Index i = 0; i < 8; ++i) {
            for (Eigen::Index j = 0; j < 8; ++j) {
                CHECK((*block)(i, j) == (*block)(j, i));
            }
        }
    }
}

TEST_CASE("rglasso reduces to glasso when lambda annihilates S") {
    rng::Stream stream(39);
    for (int trial = 0; trial < 3; ++trial) {
        SymMatrix m = testutil::random_spd(10, stream);
        SolverConfig config;
        config.rho = 0.1;
        config.lambda = 1e6 * m.max_abs();
        SolveResult result = rglasso_solve(m, config);
        CHECK(result.s.norm() == 0.0);
        CHECK(testutil::rel_error(result.f.mat(), m.mat()) < 1e-6);

        // The theta agreement needs both solvers to truly converge rather
        // than freeze under the growing penalties, so both run with a cap.
        SolverConfig capped = config;
        capped.mu_cap = 2.0;
        capped.max_iter = 2000;
        SolveResult capped_result = rglasso_solve(m, capped);
        SymMatrix glasso_theta = glasso_solve(m, config.rho, capped);
        CHECK(capped_result.s.norm() == 0.0);
        CHECK(testutil::rel_error(capped_result.theta.mat(), glasso_theta.mat()) < 1e-6);
    }
}

TEST_CASE("rglasso recovers a planted anomaly support on a direct 10x10 fixture") {
    // Tridiagonal ground truth with three planted symmetric anomaly pairs of
    // magnitude 100; some lambda in the sweep must recover the support exactly.
    StructureSpec structure{StructureKind::Tridiagonal, 10, 0.05, 0};
    SymMatrix theta0 = make_information_matrix(structure);

    Eigen::MatrixXd s0 = Eigen::MatrixXd::Zero(10, 10);
    const std::pair<int, int> pairs[] = {{0, 7}, {2, 5}, {4, 9}};
    for (auto [i, j] : pairs) {
        s0(i, j) = 100.0;
        s0(j, i) = 100.0;
    }
    SymMatrix m = make_contaminated_covariance(theta0, SymMatrix(s0),
                                               CovarianceMode::direct());

    bool exact = false;
    for (double lambda : {0.25, 0.5, 1.0, 2.0}) {
        SolverConfig config;
        config.rho = 0.05;
        config.lambda = lambda;
        SolveResult result = rglasso_solve(m, config);
        F1Report report = f1_support_score(result.s, SymMatrix(s0));
        if (report.f1 == 1.0) {
            exact = true;
            break;
        }
    }
    CHECK(exact);
}

TEST_CASE("S sparsity is non-increasing in lambda") {
    StructureSpec structure{StructureKind::Tridiagonal, 12, 0.05, 0};
    SymMatrix theta0 = make_information_matrix(structure);
    AnomalySpec anomaly;
    anomaly.mu = 50.0;
    anomaly.seed = 7;
    SymMatrix s0 = make_anomaly_matrix(12, anomaly);
    SymMatrix m =
        make_contaminated_covariance(theta0, s0, CovarianceMode::direct());

    long prev_nonzeros = -1;
    for (double lambda : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
        SolverConfig config;
        config.rho = 0.05;
        config.lambda = lambda;
        SolveResult result = rglasso_solve(m, config);
        long nonzeros = 0;
        const double tol = default_support_tol(result.s);
        for (Eigen::Index i = 0; i < 12; ++i) {
            for (Eigen::Index j = 0; j < 12; ++j) {
                nonzeros += std::abs(result.s(i, j)) > tol;
            }
        }
        if (prev_nonzeros >= 0) CHECK(nonzeros <= prev_nonzeros);
        prev_nonzeros = nonzeros;
    }
}
