#pragma once

#include <cstdint>
#include <vector>

#include "rglasso/matrix_ops.hpp"

namespace rglasso {

enum class StructureKind { Tridiagonal, Pentadiagonal, RandomSparse };

/// Ground-truth information matrix description. Tridiagonal: unit diagonal
/// with 0.5 on the first off-diagonals. Pentadiagonal: additionally 0.25 on
/// the second off-diagonals. RandomSparse: unit diagonal with the given
/// fraction of off-diagonal entries nonzero at random positions.
struct StructureSpec {
    StructureKind kind = StructureKind::Tridiagonal;
    int p = 200;
    double density = 0.05;     // RandomSparse only
    std::uint64_t seed = 0;    // RandomSparse only
};

/// Sparse anomaly pattern: a symmetric support where every row has one or
/// two off-diagonal nonzeros (a random perfect matching, plus one closing
/// pair when p is odd), with values drawn from Normal(mu, sigma2).
/// per_row_max is the total per-row entry budget; include_diagonal places an
/// additional anomaly on every diagonal entry, which keeps theta^-1 + S
/// close to the PSD cone so that sampled mode works at large mu.
struct AnomalySpec {
    double mu = 1000.0;
    double sigma2 = 10.0;
    int per_row_max = 3;
    bool include_diagonal = true;
    std::uint64_t seed = 0;
};

/// How to turn ground truth into an observed covariance: either the exact
/// contaminated matrix theta0^-1 + S0, or the empirical covariance of n
/// Gaussian samples drawn from it (after a PSD repair).
struct CovarianceMode {
    bool sampled = false;
    long n = 0;
    std::uint64_t seed = 0;

    static CovarianceMode direct() { return CovarianceMode{}; }
    static CovarianceMode from_samples(long n, std::uint64_t seed) {
        return CovarianceMode{true, n, seed};
    }
};

struct F1Report {
    long true_positives = 0;
    long false_positives = 0;
    long false_negatives = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct Histogram {
    std::vector<double> edges;  // bin boundaries, size counts.size() + 1
    std::vector<long> counts;
};

SymMatrix make_information_matrix(const StructureSpec& spec);

SymMatrix make_anomaly_matrix(int p, const AnomalySpec& spec);

/// Direct mode returns theta0^-1 + s0 exactly. Sampled mode repairs
/// theta0^-1 + s0 to positive definite by clipping negative eigenvalues to
/// 1e-6, draws n vectors from the corresponding centered Gaussian via its
/// Cholesky factor, and returns (1/n) X^T X.
SymMatrix make_contaminated_covariance(const SymMatrix& theta0,
                                       const SymMatrix& s0,
                                       const CovarianceMode& mode);

/// Threshold below which an entry does not count as support:
/// 1e-6 * max(1, max|detected|).
double default_support_tol(const SymMatrix& detected);

/// Precision/recall/F1 of the detected off-diagonal support against the true
/// one; supports are sets of unordered index pairs with |entry| > tol.
F1Report f1_support_score(const SymMatrix& detected, const SymMatrix& truth,
                          double tol);
F1Report f1_support_score(const SymMatrix& detected, const SymMatrix& truth);

/// Bin counts over all p*p entries; plot-ready. With bins < 1 or a constant
/// matrix, a single bin holds everything.
Histogram entry_distribution(const SymMatrix& m, int bins = 50);

} // namespace rglasso
