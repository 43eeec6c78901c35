#include "rfade/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace rfade {

SolutionField initial_field(const ProblemSpec& spec, const Grid& grid) {
    SolutionField u{VectorX<double>(grid.interior()), 0.0};
    for (Index i = 1; i < grid.m(); ++i) u.values(i - 1) = spec.ic(grid.x(i));
    return u;
}

std::vector<SolutionField> solve(const ProblemSpec& spec, const Grid& grid, int p,
                                 OperatorForm form, const std::vector<double>& snapshot_times) {
    spec.validate();
    if (std::abs(grid.T() - spec.T) > 1e-12 * spec.T)
        throw DomainError("grid horizon does not match the problem horizon");

    std::vector<Index> wanted;
    for (double t : snapshot_times) {
        if (!(t >= 0.0) || t > grid.T() * (1.0 + 1e-12))
            throw DomainError("snapshot time outside [0, T]");
        const double j = std::round(t / grid.k());
        if (std::abs(j * grid.k() - t) > 1e-9 * grid.T())
            throw DomainError("snapshot time " + std::to_string(t) + " is not on the time grid");
        wanted.push_back(static_cast<Index>(j));
    }
    wanted.push_back(grid.n());
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

    const auto S = assemble_S<double>(spec, grid, p, form);
    const auto stepper = make_stepper(S, grid.k());

    std::vector<SolutionField> out;
    SolutionField u = initial_field(spec, grid);
    auto next = wanted.begin();
    for (Index j = 0; j <= grid.n(); ++j) {
        if (j > 0) {
            u = step(stepper, u);
            u.time = grid.t(j);
        }
        if (next != wanted.end() && *next == j) {
            out.push_back(u);
            ++next;
        }
    }
    return out;
}

namespace {

VectorX<double> error_vector(const SolutionField& numeric, const ProblemSpec& spec, double tol) {
    const auto series = AnalyticSeries::for_problem(spec, tol);
    const Index m = numeric.values.size() + 1;
    const Grid grid(spec.L, spec.T, m, 1);
    return numeric.values - sample_on_grid(series, grid, numeric.time).values;
}

}  // namespace

double max_error(const SolutionField& numeric, const ProblemSpec& spec, double tol) {
    return max_abs(error_vector(numeric, spec, tol));
}

double l2_error(const SolutionField& numeric, const ProblemSpec& spec, double tol) {
    const VectorX<double> e = error_vector(numeric, spec, tol);
    const double h = spec.L / static_cast<double>(e.size() + 1);
    return std::sqrt(h * e.squaredNorm());
}

std::optional<double> observed_rate(double coarse_error, double fine_error) {
    if (!(coarse_error > 0.0) || !(fine_error > 0.0) || !std::isfinite(coarse_error) ||
        !std::isfinite(fine_error))
        return std::nullopt;
    return std::log(coarse_error / fine_error) / std::numbers::ln2;
}

void finalize_rates(ConvergenceTable& table) {
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        auto& row = table.rows[i];
        if (i == 0) {
            row.rate.reset();
            row.flagged = false;
            continue;
        }
        row.rate = observed_rate(table.rows[i - 1].max_error, row.max_error);
        row.flagged = !row.rate || std::abs(*row.rate - table.nominal_order) > 1.0;
    }
}

int default_thread_count() {
    if (const char* env = std::getenv("RFADE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

struct LevelJob {
    double h;
    double k;
};

ConvergenceTable run_levels(const ProblemSpec& spec, int p, Direction dir, double fixed,
                            const std::vector<LevelJob>& jobs, const ConvergenceOptions& opts) {
    spec.validate();
    require_supported_accuracy(p);

    ConvergenceTable table;
    table.direction = dir;
    table.p = p;
    table.form = opts.form;
    table.alpha = spec.alpha;
    table.beta = spec.beta;
    table.K_alpha = spec.K_alpha;
    table.K_beta = spec.K_beta;
    table.fixed_step = fixed;
    table.t_final = spec.T;
    table.domain_length = spec.L;
    table.nominal_order = dir == Direction::space ? static_cast<double>(p) : 6.0;
    table.rows.resize(jobs.size());

    // Validate every grid up front so errors surface before any work starts.
    std::vector<Grid> grids;
    grids.reserve(jobs.size());
    for (const auto& job : jobs) grids.push_back(Grid::from_steps(spec.L, spec.T, job.h, job.k));

    const FieldSolver solver = opts.solver ? opts.solver : [&](const ProblemSpec& s, const Grid& g) {
        return solve(s, g, p, opts.form).back();
    };

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                const SolutionField u = solver(spec, grids[i]);
                auto& row = table.rows[i];
                row.step = dir == Direction::space ? grids[i].h() : grids[i].k();
                row.max_error = max_error(u, spec, opts.series_tol);
                row.l2_error = l2_error(u, spec, opts.series_tol);
                std::fprintf(stderr, "[rfade] %s level %zu: step=%.6g max_error=%.6e\n",
                             to_string(dir), i, row.step, row.max_error);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    const int threads = std::max(1, std::min<int>(opts.threads > 0 ? opts.threads
                                                                   : default_thread_count(),
                                                  static_cast<int>(jobs.size())));
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);

    finalize_rates(table);
    return table;
}

}  // namespace

ConvergenceTable converge_space(const ProblemSpec& spec, int p, double k_fixed, double h0,
                                int levels, const ConvergenceOptions& opts) {
    if (levels < 2) throw UsageError("converge_space: need at least two levels");
    std::vector<LevelJob> jobs;
    for (int l = 0; l < levels; ++l) jobs.push_back({h0 / std::ldexp(1.0, l), k_fixed});
    return run_levels(spec, p, Direction::space, k_fixed, jobs, opts);
}

ConvergenceTable converge_time(const ProblemSpec& spec, int p, double h_fixed, double k0,
                               int levels, const ConvergenceOptions& opts) {
    if (levels < 2) throw UsageError("converge_time: need at least two levels");
    std::vector<LevelJob> jobs;
    for (int l = 0; l < levels; ++l) jobs.push_back({h_fixed, k0 / std::ldexp(1.0, l)});
    return run_levels(spec, p, Direction::time, h_fixed, jobs, opts);
}

std::string format_table(const ConvergenceTable& table) {
    const bool pi_steps = table.direction == Direction::space &&
                          std::abs(table.domain_length - std::numbers::pi) < 1e-12;
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "# direction=%s p=%d form=%s alpha=%g beta=%g K_alpha=%g K_beta=%g %s=%g t=%g\n",
                  to_string(table.direction), table.p, to_string(table.form), table.alpha,
                  table.beta, table.K_alpha, table.K_beta,
                  table.direction == Direction::space ? "k" : "h", table.fixed_step,
                  table.t_final);
    os << buf;
    std::snprintf(buf, sizeof buf, "%-14s %-14s %-10s %-14s\n",
                  table.direction == Direction::space ? "h" : "k", "Max Error", "Rate",
                  "L2 Error");
    os << buf;
    for (const auto& row : table.rows) {
        char step[32];
        if (pi_steps) std::snprintf(step, sizeof step, "%.5fpi", row.step / std::numbers::pi);
        else std::snprintf(step, sizeof step, "%.5f", row.step);
        char rate[32];
        if (row.rate) std::snprintf(rate, sizeof rate, "%.5f%s", *row.rate, row.flagged ? "*" : "");
        else std::snprintf(rate, sizeof rate, "-");
        std::snprintf(buf, sizeof buf, "%-14s %-14.5E %-10s %-14.5E\n", step, row.max_error, rate,
                      row.l2_error);
        os << buf;
    }
    return os.str();
}

}  // namespace rfade
