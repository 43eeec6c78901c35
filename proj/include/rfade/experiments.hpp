#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rfade/analytic.hpp"
#include "rfade/operator.hpp"
#include "rfade/pade_stepper.hpp"

namespace rfade {

/// psi sampled at the interior nodes.
SolutionField initial_field(const ProblemSpec& spec, const Grid& grid);

/// Runs the [3,3] Pade scheme over the whole grid.  The result holds the
/// fields at the requested snapshot times (rounded to the nearest step, which
/// must coincide with the time to 1e-9 T) followed by the final field, in
/// increasing time order without duplicates.
std::vector<SolutionField> solve(const ProblemSpec& spec, const Grid& grid, int p,
                                 OperatorForm form = OperatorForm::product,
                                 const std::vector<double>& snapshot_times = {});

/// Max-abs error over the interior nodes against the analytic series at
/// numeric.time.
double max_error(const SolutionField& numeric, const ProblemSpec& spec,
                 double tol = kDefaultSeriesTol);

/// Discrete L2 error sqrt(h sum e_i^2).
double l2_error(const SolutionField& numeric, const ProblemSpec& spec,
                double tol = kDefaultSeriesTol);

enum class Direction { space, time };

inline const char* to_string(Direction d) { return d == Direction::space ? "space" : "time"; }

struct ConvergenceRow {
    double step = 0.0;
    double max_error = 0.0;
    double l2_error = 0.0;
    std::optional<double> rate;  // empty on the first row or when undefined
    bool flagged = false;        // rate undefined or far from the nominal order
};

struct ConvergenceTable {
    Direction direction = Direction::space;
    int p = 0;
    OperatorForm form = OperatorForm::product;
    double alpha = 0.0;
    double beta = 0.0;
    double K_alpha = 0.0;
    double K_beta = 0.0;
    double fixed_step = 0.0;  // the step that is not varied
    double t_final = 1.0;
    double domain_length = 0.0;
    double nominal_order = 0.0;
    std::vector<ConvergenceRow> rows;
};

/// log2(coarse / fine); empty when either error is not a positive finite number.
std::optional<double> observed_rate(double coarse_error, double fine_error);

/// Fills rates and flags of rows already holding step and errors.
void finalize_rates(ConvergenceTable& table);

/// Replaces the numerical solver, e.g. to inject the exact solution.
using FieldSolver = std::function<SolutionField(const ProblemSpec&, const Grid&)>;

struct ConvergenceOptions {
    OperatorForm form = OperatorForm::product;
    double series_tol = kDefaultSeriesTol;
    FieldSolver solver;  // default: final field of solve()
    int threads = 0;     // 0: RFADE_THREADS or hardware concurrency
};

ConvergenceTable converge_space(const ProblemSpec& spec, int p, double k_fixed, double h0,
                                int levels, const ConvergenceOptions& opts = {});

ConvergenceTable converge_time(const ProblemSpec& spec, int p, double h_fixed, double k0,
                               int levels, const ConvergenceOptions& opts = {});

/// Worker count from RFADE_THREADS, falling back to hardware concurrency.
int default_thread_count();

/// Aligned text layout of a convergence table.
std::string format_table(const ConvergenceTable& table);

}  // namespace rfade
