#pragma once

#include <string>
#include <vector>

#include "rglasso/solver.hpp"
#include "rglasso/synth.hpp"

namespace rglasso {

/// One grid cell outcome. wall_time is in seconds; the record writers only
/// emit it when asked, so record files stay byte-identical across runs.
struct BenchRecord {
    int structure = 0; // 1 tridiagonal, 2 pentadiagonal, 3 random sparse
    int p = 0;
    long n = 0; // 0 means the covariance was built directly
    double mu = 0.0;
    double lambda = 0.0;
    double rho = 0.0;
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    int iterations = 0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double wall_time = 0.0;
    bool failed = false;
};

int structure_id(StructureKind kind);
StructureKind structure_from_id(int id);

/// Full (lambda, rho) grid on one generated problem: the ground truth and the
/// observed covariance are functions of the specs alone, so every cell sees
/// the same data and the output is independent of `threads`.
std::vector<BenchRecord> run_benchmark(const StructureSpec& structure,
                                       const AnomalySpec& anomaly,
                                       const CovarianceMode& mode,
                                       const std::vector<double>& lambda_grid,
                                       const std::vector<double>& rho_grid,
                                       const SolverConfig& base,
                                       int threads = 1);

struct MuSweepTask {
    StructureSpec structure;
    AnomalySpec anomaly; // its mu field is replaced by each grid value
    double lambda = 0.0;
    double rho = 0.0;
};

/// Anomaly-magnitude sweep: for each task and each mu in the grid, the same
/// anomaly seed is kept so only the magnitude moves, and the solve is scored
/// as in run_benchmark.
std::vector<BenchRecord> mu_sweep(const std::vector<MuSweepTask>& tasks,
                                  const std::vector<double>& mu_grid,
                                  const CovarianceMode& mode,
                                  const SolverConfig& base,
                                  int threads = 1);

struct CompareRecord {
    std::string method; // "rglasso" or "rpca"
    int p = 0;
    long n = 0;
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    int iterations = 0;
    double wall_time = 0.0;
    bool failed = false;
};

/// Accuracy/time comparison of rglasso against the RPCA baseline on the
/// tridiagonal-structure anomaly task over a grid of dimensions.
std::vector<CompareRecord> compare_methods(const std::vector<int>& p_grid,
                                           long n, std::uint64_t seed,
                                           double lambda, double rho,
                                           double rpca_lambda_scale,
                                           const SolverConfig& base,
                                           int threads = 1);

std::string records_to_csv(const std::vector<BenchRecord>& records,
                           bool include_timing);
std::string records_to_jsonl(const std::vector<BenchRecord>& records,
                             bool include_timing);
std::string compare_to_csv(const std::vector<CompareRecord>& records);

} // namespace rglasso
