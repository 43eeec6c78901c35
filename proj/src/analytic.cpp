#include "rfade/analytic.hpp"

#include <cmath>
#include <numbers>

namespace rfade {

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

AnalyticSeries::AnalyticSeries(Benchmark which, double alpha, double beta, double K_alpha,
                               double K_beta, double tol)
    : which_(which),
      L_(which == Benchmark::example1 ? pi : 1.0),
      alpha_(alpha),
      beta_(beta),
      K_alpha_(K_alpha),
      K_beta_(K_beta),
      tol_(tol) {
    if (!(tol > 0.0)) throw DomainError("series tolerance must be positive");
    if (!(K_alpha >= 0.0) || !(K_beta >= 0.0))
        throw DomainError("series coefficients must be nonnegative");
}

AnalyticSeries AnalyticSeries::for_problem(const ProblemSpec& spec, double tol) {
    const auto which = spec.ic.which();
    if (!which) {
        throw UnsupportedComparisonError(
            "no analytic solution for a " + spec.ic.name() + " initial condition");
    }
    AnalyticSeries s(*which, spec.alpha, spec.beta, spec.K_alpha, spec.K_beta, tol);
    if (std::abs(spec.L - s.length()) > 1e-12 * s.length()) {
        throw UnsupportedComparisonError("benchmark " + spec.ic.name() +
                                         " requires its own domain length");
    }
    return s;
}

double AnalyticSeries::eigenvalue(long n) const {
    return which_ == Benchmark::example1 ? static_cast<double>(n)
                                         : static_cast<double>(2 * n - 1) * pi;
}

double AnalyticSeries::coefficient(long n) const {
    const double dn = static_cast<double>(n);
    if (which_ == Benchmark::example1) {
        const double sign = n % 2 == 1 ? 1.0 : -1.0;
        return (8.0 * sign - 4.0) / (dn * dn * dn);
    }
    const double lam = eigenvalue(n);
    return 8.0 / (lam * lam * lam);
}

double AnalyticSeries::decay_rate(long n) const {
    const double log_lam = std::log(eigenvalue(n));
    return K_alpha_ * std::exp(alpha_ * log_lam) + K_beta_ * std::exp(beta_ * log_lam);
}

// Bound on sum_{n>N} |b_n| exp(-rate_n t), using monotone decay in n:
//   example1: |b_n| <= 12/n^3, tail <= 6/N^2
//   example2: tail <= 2 / (pi^3 (2N-1)^2)
double AnalyticSeries::tail_bound(long N, double t) const {
    const double dN = static_cast<double>(N);
    const double coeff_tail = which_ == Benchmark::example1
                                  ? 6.0 / (dN * dN)
                                  : 2.0 / (pi * pi * pi * (2.0 * dN - 1.0) * (2.0 * dN - 1.0));
    return coeff_tail * std::exp(-decay_rate(N + 1) * t);
}

long AnalyticSeries::terms_for(double t) const { return terms_for(t, tol_); }

long AnalyticSeries::terms_for(double t, double tol) const {
    if (!(t >= 0.0)) throw DomainError("series time must be nonnegative");
    // Exponential search then bisection on the monotone tail bound.
    long hi = 1;
    while (tail_bound(hi, t) >= tol) {
        if (hi >= kMaxSeriesTerms) {
            throw TruncationError("series tolerance " + std::to_string(tol) +
                                  " not reachable within " + std::to_string(kMaxSeriesTerms) +
                                  " terms");
        }
        hi = std::min(hi * 2, kMaxSeriesTerms);
    }
    long lo = hi / 2;
    if (lo < 1) return hi;
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (tail_bound(mid, t) < tol) hi = mid;
        else lo = mid;
    }
    return hi;
}

double AnalyticSeries::partial_sum(double x, double t, long N) const {
    // example2 is symmetric about 1/2; folding keeps u(x) == u(1-x) bitwise.
    if (which_ == Benchmark::example2) x = std::min(x, 1.0 - x);
    double sum = 0.0;
    for (long n = 1; n <= N; ++n) {
        const double b = coefficient(n);
        const double damp = t == 0.0 ? 1.0 : std::exp(-decay_rate(n) * t);
        if (damp == 0.0) break;
        sum += b * std::sin(eigenvalue(n) * x) * damp;
    }
    return sum;
}

double AnalyticSeries::initial(double x) const {
    if (which_ == Benchmark::example1) return x * x * (pi - x);
    return x * (1.0 - x);
}

double AnalyticSeries::operator()(double x, double t) const {
    if (!(x >= 0.0) || !(x <= L_)) throw DomainError("series evaluation outside the domain");
    if (!(t >= 0.0)) throw DomainError("series time must be nonnegative");
    if (x == 0.0 || x == L_) return 0.0;
    if (t == 0.0) return initial(x);
    return partial_sum(x, t, terms_for(t));
}

double analytic_example1(double x, double t, double alpha, double beta, double K_alpha,
                         double K_beta, double tol) {
    return AnalyticSeries(Benchmark::example1, alpha, beta, K_alpha, K_beta, tol)(x, t);
}

double analytic_example2(double x, double t, double alpha, double beta, double K_alpha,
                         double K_beta, double tol) {
    return AnalyticSeries(Benchmark::example2, alpha, beta, K_alpha, K_beta, tol)(x, t);
}

SolutionField sample_on_grid(const AnalyticSeries& series, const Grid& grid, double t) {
    if (std::abs(grid.L() - series.length()) > 1e-12 * series.length())
        throw DomainError("grid length does not match the series domain");
    const Index m = grid.m();
    SolutionField out{VectorX<double>(m - 1), t};
    const long N = t == 0.0 ? 0 : series.terms_for(t);
    for (Index i = 1; i < m; ++i) {
        // Mirror nodes share the smaller index so example2 stays exactly symmetric.
        const Index j = series.benchmark() == Benchmark::example2 ? std::min(i, m - i) : i;
        const double x = grid.x(j);
        out.values(i - 1) = t == 0.0 ? series.initial(x) : series.partial_sum(x, t, N);
    }
    return out;
}

}  // namespace rfade
