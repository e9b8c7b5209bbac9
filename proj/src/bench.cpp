#include "rglasso/bench.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rglasso/rng.hpp"
#include "rglasso/rpca.hpp"

namespace rglasso {

namespace {

using steady_clock = std::chrono::steady_clock;

double seconds_since(steady_clock::time_point start) {
    return std::chrono::duration<double>(steady_clock::now() - start).count();
}

/// Runs fn(0..count-1) on up to `threads` workers. Cells own their error
/// handling; a stray exception is rethrown on the calling thread.
void parallel_for(long count, int threads,
                  const std::function<void(long)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = static_cast<int>(
        std::min<long>(threads, count));
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

BenchRecord solve_and_score(const SymMatrix& m, const SymMatrix& s0,
                            SolverConfig config, const BenchRecord& base) {
    BenchRecord record = base;
    config.lambda = record.lambda;
    config.rho = record.rho;
    const auto start = steady_clock::now();
    try {
        SolveResult result = rglasso_solve(m, config);
        record.wall_time = seconds_since(start);
        const F1Report score = f1_support_score(result.s, s0);
        record.f1 = score.f1;
        record.precision = score.precision;
        record.recall = score.recall;
        record.iterations = result.iterations;
        record.delta1 = result.delta1_history.back();
        record.delta2 = result.delta2_history.back();
    } catch (const std::exception&) {
        record.wall_time = seconds_since(start);
        record.failed = true;
    }
    return record;
}

} // namespace

int structure_id(StructureKind kind) {
    switch (kind) {
    case StructureKind::Tridiagonal: return 1;
    case StructureKind::Pentadiagonal: return 2;
    case StructureKind::RandomSparse: return 3;
    }
    return 0;
}

StructureKind structure_from_id(int id) {
    switch (id) {
    case 1: return StructureKind::Tridiagonal;
    case 2: return StructureKind::Pentadiagonal;
    case 3: return StructureKind::RandomSparse;
    }
    throw std::invalid_argument("structure id must be 1, 2 or 3");
}

std::vector<BenchRecord> run_benchmark(const StructureSpec& structure,
                                       const AnomalySpec& anomaly,
                                       const CovarianceMode& mode,
                                       const std::vector<double>& lambda_grid,
                                       const std::vector<double>& rho_grid,
                                       const SolverConfig& base,
                                       int threads) {
    if (lambda_grid.empty() || rho_grid.empty()) {
        throw std::invalid_argument("run_benchmark needs nonempty grids");
    }
    const SymMatrix theta0 = make_information_matrix(structure);
    const SymMatrix s0 = make_anomaly_matrix(structure.p, anomaly);
    const SymMatrix m = make_contaminated_covariance(theta0, s0, mode);

    BenchRecord proto;
    proto.structure = structure_id(structure.kind);
    proto.p = structure.p;
    proto.n = mode.sampled ? mode.n : 0;
    proto.mu = anomaly.mu;

    const long cells = static_cast<long>(lambda_grid.size() * rho_grid.size());
    std::vector<BenchRecord> records(static_cast<std::size_t>(cells));
    parallel_for(cells, threads, [&](long cell) {
        BenchRecord rec = proto;
        rec.lambda = lambda_grid[static_cast<std::size_t>(cell) / rho_grid.size()];
        rec.rho = rho_grid[static_cast<std::size_t>(cell) % rho_grid.size()];
        records[static_cast<std::size_t>(cell)] = solve_and_score(m, s0, base, rec);
    });
    return records;
}

std::vector<BenchRecord> mu_sweep(const std::vector<MuSweepTask>& tasks,
                                  const std::vector<double>& mu_grid,
                                  const CovarianceMode& mode,
                                  const SolverConfig& base,
                                  int threads) {
    if (tasks.empty() || mu_grid.empty()) {
        throw std::invalid_argument("mu_sweep needs tasks and a nonempty mu grid");
    }
    const long cells = static_cast<long>(tasks.size() * mu_grid.size());
    std::vector<BenchRecord> records(static_cast<std::size_t>(cells));
    parallel_for(cells, threads, [&](long cell) {
        const auto& task = tasks[static_cast<std::size_t>(cell) / mu_grid.size()];
        const double mu = mu_grid[static_cast<std::size_t>(cell) % mu_grid.size()];

        AnomalySpec anomaly = task.anomaly;
        anomaly.mu = mu; // same seed across the grid: only the magnitude moves
        CovarianceMode cell_mode = mode;
        if (mode.sampled) {
            cell_mode.seed = rng::derive_seed(
                mode.seed, {static_cast<std::uint64_t>(
                               cell / static_cast<long>(mu_grid.size()))});
        }

        BenchRecord proto;
        proto.structure = structure_id(task.structure.kind);
        proto.p = task.structure.p;
        proto.n = mode.sampled ? mode.n : 0;
        proto.mu = mu;
        proto.lambda = task.lambda;
        proto.rho = task.rho;

        const SymMatrix theta0 = make_information_matrix(task.structure);
        const SymMatrix s0 = make_anomaly_matrix(task.structure.p, anomaly);
        const SymMatrix m = make_contaminated_covariance(theta0, s0, cell_mode);
        records[static_cast<std::size_t>(cell)] = solve_and_score(m, s0, base, proto);
    });
    return records;
}

std::vector<CompareRecord> compare_methods(const std::vector<int>& p_grid,
                                           long n, std::uint64_t seed,
                                           double lambda, double rho,
                                           double rpca_lambda_scale,
                                           const SolverConfig& base,
                                           int threads) {
    if (p_grid.empty()) {
        throw std::invalid_argument("compare_methods needs a nonempty p grid");
    }
    const long cells = static_cast<long>(p_grid.size());
    std::vector<CompareRecord> records(static_cast<std::size_t>(2 * cells));
    parallel_for(cells, threads, [&](long cell) {
        const int p = p_grid[static_cast<std::size_t>(cell)];
        StructureSpec structure{StructureKind::Tridiagonal, p, 0.05,
                                rng::derive_seed(seed, {1, static_cast<std::uint64_t>(p)})};
        AnomalySpec anomaly;
        anomaly.mu = 1000.0;
        anomaly.seed = rng::derive_seed(seed, {2, static_cast<std::uint64_t>(p)});
        CovarianceMode mode = CovarianceMode::from_samples(
            n, rng::derive_seed(seed, {3, static_cast<std::uint64_t>(p)}));

        const SymMatrix theta0 = make_information_matrix(structure);
        const SymMatrix s0 = make_anomaly_matrix(p, anomaly);
        const SymMatrix m = make_contaminated_covariance(theta0, s0, mode);

        CompareRecord rg;
        rg.method = "rglasso";
        rg.p = p;
        rg.n = n;
        auto start = steady_clock::now();
        try {
            SolverConfig config = base;
            config.lambda = lambda;
            config.rho = rho;
            SolveResult result = rglasso_solve(m, config);
            rg.wall_time = seconds_since(start);
            F1Report score = f1_support_score(result.s, s0);
            rg.f1 = score.f1;
            rg.precision = score.precision;
            rg.recall = score.recall;
            rg.iterations = result.iterations;
        } catch (const std::exception&) {
            rg.wall_time = seconds_since(start);
            rg.failed = true;
        }
        records[static_cast<std::size_t>(2 * cell)] = rg;

        CompareRecord rp;
        rp.method = "rpca";
        rp.p = p;
        rp.n = n;
        start = steady_clock::now();
        try {
            const double rpca_lambda =
                rpca_lambda_scale * rpca_default_lambda(p, p);
            RpcaResult result = rpca_solve(m.mat(), rpca_lambda, base.epsilon,
                                           base.max_iter);
            rp.wall_time = seconds_since(start);
            F1Report score = f1_support_score(SymMatrix(result.s), s0);
            rp.f1 = score.f1;
            rp.precision = score.precision;
            rp.recall = score.recall;
            rp.iterations = result.iterations;
        } catch (const std::exception&) {
            rp.wall_time = seconds_since(start);
            rp.failed = true;
        }
        records[static_cast<std::size_t>(2 * cell + 1)] = rp;
    });
    return records;
}

std::string records_to_csv(const std::vector<BenchRecord>& records,
                           bool include_timing) {
    std::ostringstream out;
    out << "structure,p,n,mu,lambda,rho,f1,precision,recall,iterations,"
           "delta1,delta2,wall_time,status\n";
    for (const auto& r : records) {
        out << r.structure << ',' << r.p << ',' << r.n << ','
            << format_double(r.mu) << ',' << format_double(r.lambda) << ','
            << format_double(r.rho) << ',' << format_double(r.f1) << ','
            << format_double(r.precision) << ',' << format_double(r.recall)
            << ',' << r.iterations << ',' << format_double(r.delta1) << ','
            << format_double(r.delta2) << ','
            << format_double(include_timing ? r.wall_time : 0.0) << ','
            << (r.failed ? "failed" : "ok") << '\n';
    }
    return out.str();
}

std::string records_to_jsonl(const std::vector<BenchRecord>& records,
                             bool include_timing) {
    std::ostringstream out;
    for (const auto& r : records) {
        nlohmann::json line{{"structure", r.structure},
                            {"p", r.p},
                            {"n", r.n},
                            {"mu", r.mu},
                            {"lambda", r.lambda},
                            {"rho", r.rho},
                            {"f1", r.f1},
                            {"precision", r.precision},
                            {"recall", r.recall},
                            {"iterations", r.iterations},
                            {"delta1", r.delta1},
                            {"delta2", r.delta2},
                            {"wall_time", include_timing ? r.wall_time : 0.0},
                            {"status", r.failed ? "failed" : "ok"}};
        out << line.dump() << '\n';
    }
    return out.str();
}

std::string compare_to_csv(const std::vector<CompareRecord>& records) {
    std::ostringstream out;
    out << "method,p,n,f1,precision,recall,iterations,wall_time,status\n";
    for (const auto& r : records) {
        out << r.method << ',' << r.p << ',' << r.n << ','
            << format_double(r.f1) << ',' << format_double(r.precision) << ','
            << format_double(r.recall) << ',' << r.iterations << ','
            << format_double(r.wall_time) << ','
            << (r.failed ? "failed" : "ok") << '\n';
    }
    return out.str();
}

} // namespace rglasso
