#include "rglasso/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rglasso/rng.hpp"

namespace rglasso {

namespace {

Eigen::MatrixXd banded(int p, std::initializer_list<std::pair<int, double>> bands) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(p, p);
    for (auto [offset, value] : bands) {
        for (int i = 0; i + offset < p; ++i) {
            out(i, i + offset) = value;
            out(i + offset, i) = value;
        }
    }
    return out;
}

SymMatrix random_sparse_information(const StructureSpec& spec) {
    if (!(spec.density > 0.0 && spec.density < 1.0)) {
        throw std::invalid_argument("RandomSparse density must lie in (0, 1)");
    }
    const int p = spec.p;
    const long pair_count = static_cast<long>(p) * (p - 1) / 2;
    const long nonzero = std::lround(spec.density * static_cast<double>(pair_count));

    // Choose `nonzero` distinct unordered pairs by shuffling a prefix of the
    // pair index range, then assign uniform +-[0.3, 0.6] values.
    std::vector<long> pair_ids(static_cast<std::size_t>(pair_count));
    std::iota(pair_ids.begin(), pair_ids.end(), 0L);
    rng::Stream stream(rng::derive_seed(spec.seed, {0x5741}));
    for (long i = 0; i < nonzero; ++i) {
        const long j = static_cast<long>(
            i + static_cast<long>(stream.uniform_int(
                    static_cast<std::uint64_t>(pair_count - i))));
        std::swap(pair_ids[static_cast<std::size_t>(i)],
                  pair_ids[static_cast<std::size_t>(j)]);
    }

    Eigen::MatrixXd theta = Eigen::MatrixXd::Identity(p, p);
    for (long k = 0; k < nonzero; ++k) {
        long id = pair_ids[static_cast<std::size_t>(k)];
        // Decode pair id into (i, j), i < j, rows enumerated first.
        long i = 0;
        long remaining = id;
        while (remaining >= p - 1 - i) {
            remaining -= p - 1 - i;
            ++i;
        }
        const long j = i + 1 + remaining;
        double magnitude = stream.uniform(0.3, 0.6);
        double value = stream.uniform() < 0.5 ? -magnitude : magnitude;
        theta(i, j) = value;
        theta(j, i) = value;
    }

    // Diagonal loading keeps the matrix positive definite; rescaling restores
    // the unit diagonal.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(theta,
                                                       Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig <= 0.0) {
        const double load = std::abs(min_eig) + 0.05;
        theta += load * Eigen::MatrixXd::Identity(p, p);
        theta /= 1.0 + load;
    }
    return SymMatrix(std::move(theta));
}

} // namespace

SymMatrix make_information_matrix(const StructureSpec& spec) {
    if (spec.p < 2) {
        throw std::invalid_argument("structure dimension must be >= 2");
    }
    switch (spec.kind) {
    case StructureKind::Tridiagonal:
        return SymMatrix(banded(spec.p, {{1, 0.5}}));
    case StructureKind::Pentadiagonal:
        return SymMatrix(banded(spec.p, {{1, 0.5}, {2, 0.25}}));
    case StructureKind::RandomSparse:
        return random_sparse_information(spec);
    }
    throw std::invalid_argument("unknown structure kind");
}

SymMatrix make_anomaly_matrix(int p, const AnomalySpec& spec) {
    if (p < 2) {
        throw std::invalid_argument("anomaly matrix needs p >= 2");
    }
    if (spec.per_row_max < 2) {
        throw std::invalid_argument(
            "per_row_max must be >= 2 to allow one off-diagonal entry per row");
    }
    if (!(spec.sigma2 > 0.0)) {
        throw std::invalid_argument("sigma2 must be positive");
    }

    rng::Stream stream(rng::derive_seed(spec.seed, {0xA401}));
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    stream.shuffle(order);

    // A perfect matching over shuffled nodes keeps the negative eigenvectors
    // of the anomaly part 2-localized, so a contaminated covariance stays
    // close to the PSD cone and can actually be sampled from. For odd p the
    // leftover node pairs with the first one (that row then has degree 2,
    // which needs the per-row budget to allow it).
    const double sigma = std::sqrt(spec.sigma2);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p, p);
    for (int k = 0; k + 1 < p; k += 2) {
        const double value = stream.normal(spec.mu, sigma);
        s(order[k], order[k + 1]) = value;
        s(order[k + 1], order[k]) = value;
    }
    if (p % 2 != 0) {
        if (spec.per_row_max < 3) {
            throw std::invalid_argument(
                "per_row_max = 2 needs even p (perfect matching support)");
        }
        const double value = stream.normal(spec.mu, sigma);
        s(order[p - 1], order[0]) = value;
        s(order[0], order[p - 1]) = value;
    }
    if (spec.include_diagonal) {
        for (int i = 0; i < p; ++i) {
            s(i, i) = stream.normal(spec.mu, sigma);
        }
    }
    return SymMatrix(std::move(s));
}

SymMatrix make_contaminated_covariance(const SymMatrix& theta0,
                                       const SymMatrix& s0,
                                       const CovarianceMode& mode) {
    if (theta0.dim() != s0.dim()) {
        throw std::invalid_argument("theta0 and s0 dimensions differ");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(theta0.mat());
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("theta0 must be positive definite");
    }
    const Eigen::Index p = theta0.dim();
    Eigen::MatrixXd sigma0 =
        llt.solve(Eigen::MatrixXd::Identity(p, p)) + s0.mat();
    if (!mode.sampled) {
        return SymMatrix(std::move(sigma0));
    }

    if (mode.n < 2) {
        throw std::invalid_argument("sampled mode needs n >= 2");
    }
    // Large anomalies can push theta0^-1 + s0 outside the PSD cone; repair by
    // clipping negative eigenvalues to 1e-6 before factorizing.
    SymMatrix sigma_sym(std::move(sigma0));
    EigenPair eig = sym_eigen(sigma_sym);
    Eigen::VectorXd repaired = eig.values.unaryExpr(
        [](double v) { return v < 0.0 ? 1e-6 : v; });
    Eigen::MatrixXd sigma_repaired =
        eig.vectors * repaired.asDiagonal() * eig.vectors.transpose();
    sigma_repaired = 0.5 * (sigma_repaired + sigma_repaired.transpose().eval());

    Eigen::LLT<Eigen::MatrixXd> chol(sigma_repaired);
    if (chol.info() != Eigen::Success) {
        throw EigenSolverError("triangular factorization of repaired covariance failed");
    }
    Eigen::MatrixXd lt = chol.matrixL().transpose(); // x = L z <=> row = z^T L^T

    rng::Stream stream(rng::derive_seed(mode.seed, {0xC0 , static_cast<std::uint64_t>(mode.n)}));
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
    const long block_rows = 4096;
    Eigen::MatrixXd z(block_rows, p);
    long remaining = mode.n;
    while (remaining > 0) {
        const long take = std::min(block_rows, remaining);
        for (long r = 0; r < take; ++r) {
            for (Eigen::Index c = 0; c < p; ++c) {
                z(r, c) = stream.normal();
            }
        }
        auto x = z.topRows(take) * lt;
        gram.noalias() += x.transpose() * x;
        remaining -= take;
    }
    return SymMatrix(gram / static_cast<double>(mode.n));
}

double default_support_tol(const SymMatrix& detected) {
    return 1e-6 * std::max(1.0, detected.max_abs());
}

F1Report f1_support_score(const SymMatrix& detected, const SymMatrix& truth,
                          double tol) {
    if (detected.dim() != truth.dim()) {
        throw std::invalid_argument("f1_support_score: dimension mismatch");
    }
    F1Report report;
    for (Eigen::Index i = 0; i < detected.dim(); ++i) {
        for (Eigen::Index j = i + 1; j < detected.dim(); ++j) {
            const bool det = std::abs(detected(i, j)) > tol;
            const bool tru = std::abs(truth(i, j)) > tol;
            report.true_positives += det && tru;
            report.false_positives += det && !tru;
            report.false_negatives += !det && tru;
        }
    }
    const long detected_count = report.true_positives + report.false_positives;
    const long truth_count = report.true_positives + report.false_negatives;
    report.precision = detected_count > 0
                           ? static_cast<double>(report.true_positives) /
                                 static_cast<double>(detected_count)
                           : 0.0;
    report.recall = truth_count > 0
                        ? static_cast<double>(report.true_positives) /
                              static_cast<double>(truth_count)
                        : 0.0;
    const double denom = report.precision + report.recall;
    report.f1 = denom > 0.0 ? 2.0 * report.precision * report.recall / denom : 0.0;
    return report;
}

F1Report f1_support_score(const SymMatrix& detected, const SymMatrix& truth) {
    return f1_support_score(detected, truth, default_support_tol(detected));
}

Histogram entry_distribution(const SymMatrix& m, int bins) {
    if (bins < 1) bins = 1;
    const double lo = m.mat().minCoeff();
    const double hi = m.mat().maxCoeff();
    Histogram hist;
    if (lo == hi) {
        hist.edges = {lo - 0.5, lo + 0.5};
        hist.counts = {static_cast<long>(m.dim() * m.dim())};
        return hist;
    }
    hist.edges.resize(static_cast<std::size_t>(bins) + 1);
    const double width = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b) {
        hist.edges[static_cast<std::size_t>(b)] = lo + width * b;
    }
    hist.counts.assign(static_cast<std::size_t>(bins), 0);
    for (Eigen::Index i = 0; i < m.dim(); ++i) {
        for (Eigen::Index j = 0; j < m.dim(); ++j) {
            int b = static_cast<int>((m(i, j) - lo) / width);
            if (b >= bins) b = bins - 1; // max entry lands in the last bin
            if (b < 0) b = 0;
            ++hist.counts[static_cast<std::size_t>(b)];
        }
    }
    return hist;
}

} // namespace rglasso
