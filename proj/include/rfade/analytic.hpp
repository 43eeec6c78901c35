#pragma once

// Sine-series solutions of the two benchmark problems:
//   example1 on (0, pi): psi = x^2 (pi - x), modes sin(n x),
//   example2 on (0, 1):  psi = x (1 - x),    modes sin((2n-1) pi x),
// each mode decaying as exp(-(K_a lambda^a + K_b lambda^b) t).

#include "rfade/operator.hpp"
#include "rfade/pade_stepper.hpp"

namespace rfade {

inline constexpr double kDefaultSeriesTol = 1e-12;
inline constexpr long kMaxSeriesTerms = 1'000'000;

class AnalyticSeries {
public:
    AnalyticSeries(Benchmark which, double alpha, double beta, double K_alpha, double K_beta,
                   double tol = kDefaultSeriesTol);

    /// Series for a benchmark problem; throws UnsupportedComparisonError for
    /// any other initial condition.
    static AnalyticSeries for_problem(const ProblemSpec& spec, double tol = kDefaultSeriesTol);

    Benchmark benchmark() const { return which_; }
    double length() const { return L_; }
    double tolerance() const { return tol_; }

    double eigenvalue(long n) const;
    double coefficient(long n) const;
    double decay_rate(long n) const;

    /// Number of terms whose tail bound at time t is below tol.
    long terms_for(double t) const;
    /// Number of terms whose tail bound at time t is below an explicit tol.
    long terms_for(double t, double tol) const;

    /// First N terms of the series.
    double partial_sum(double x, double t, long N) const;

    /// Truncated series value; t = 0 returns the initial condition.
    double operator()(double x, double t) const;

    double initial(double x) const;

private:
    double tail_bound(long N, double t) const;

    Benchmark which_;
    double L_;
    double alpha_;
    double beta_;
    double K_alpha_;
    double K_beta_;
    double tol_;
};

double analytic_example1(double x, double t, double alpha, double beta, double K_alpha,
                         double K_beta, double tol = kDefaultSeriesTol);

double analytic_example2(double x, double t, double alpha, double beta, double K_alpha,
                         double K_beta, double tol = kDefaultSeriesTol);

/// Series values at x_1 .. x_{m-1}.
SolutionField sample_on_grid(const AnalyticSeries& series, const Grid& grid, double t);

}  // namespace rfade
