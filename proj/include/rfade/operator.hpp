#pragma once

// Spatial discretization of
//   u_t = K_alpha d^alpha u/d|x|^alpha + K_beta d^beta u/d|x|^beta
// on (0, L) with u(0) = u(L) = 0.  The semi-discrete system is U' = -S U.

#include <Eigen/Core>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rfade/dense_linalg.hpp"
#include "rfade/errors.hpp"
#include "rfade/frac_coeffs.hpp"

namespace rfade {

enum class Benchmark { example1, example2 };

/// psi(x): one of the two benchmark profiles or a polynomial with ascending
/// coefficients.
class InitialCondition {
public:
    static InitialCondition benchmark(Benchmark b) { return InitialCondition(b); }
    static InitialCondition polynomial(std::vector<double> coeffs) {
        if (coeffs.empty()) throw UsageError("polynomial initial condition needs coefficients");
        InitialCondition ic(Benchmark::example1);
        ic.benchmark_.reset();
        ic.coeffs_ = std::move(coeffs);
        return ic;
    }

    bool is_benchmark() const { return benchmark_.has_value(); }
    std::optional<Benchmark> which() const { return benchmark_; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    double operator()(double x) const {
        if (benchmark_ == Benchmark::example1) return x * x * (std::numbers::pi - x);
        if (benchmark_ == Benchmark::example2) return x * (1.0 - x);
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    std::string name() const {
        if (benchmark_ == Benchmark::example1) return "example1";
        if (benchmark_ == Benchmark::example2) return "example2";
        return "polynomial";
    }

private:
    explicit InitialCondition(Benchmark b) : benchmark_(b) {}

    std::optional<Benchmark> benchmark_;
    std::vector<double> coeffs_;
};

struct ProblemSpec {
    double L = std::numbers::pi;
    double T = 1.0;
    FractionalOrder alpha{1.8};
    FractionalOrder beta{0.9};
    double K_alpha = 0.25;
    double K_beta = 0.25;
    InitialCondition ic = InitialCondition::benchmark(Benchmark::example1);

    void validate() const {
        if (!(L > 0.0)) throw DomainError("domain length L must be positive");
        if (!(T > 0.0)) throw DomainError("horizon T must be positive");
        if (!(alpha.value() > 1.0)) throw OrderDomainError("alpha must lie in (1,2]");
        if (!(beta.value() < 1.0)) throw OrderDomainError("beta must lie in (0,1)");
        if (!(K_alpha > 0.0)) throw DomainError("K_alpha must be positive");
        if (!(K_beta >= 0.0)) throw DomainError("K_beta must be nonnegative");
    }

    /// The benchmark problems with K_alpha = K_beta = 0.25 and T = 1.
    static ProblemSpec example(Benchmark b, double alpha, double beta) {
        ProblemSpec s;
        s.L = b == Benchmark::example1 ? std::numbers::pi : 1.0;
        s.alpha = FractionalOrder(alpha);
        s.beta = FractionalOrder(beta);
        s.ic = InitialCondition::benchmark(b);
        s.validate();
        return s;
    }
};

/// Uniform space-time grid: x_i = i h (i = 0..m), t_j = j k (j = 0..n).
class Grid {
public:
    Grid(double L, double T, Index m, Index n) : L_(L), T_(T), m_(m), n_(n) {
        if (!(L > 0.0) || !(T > 0.0)) throw DomainError("grid: L and T must be positive");
        if (m < 4) throw DimensionError("grid: need m >= 4 space divisions");
        if (n < 1) throw DimensionError("grid: need n >= 1 time divisions");
    }

    /// Number of divisions for a requested step; L/step must be an integer
    /// to within 1e-9.
    static Index divisions(double length, double step, const char* what) {
        if (!(step > 0.0)) throw DomainError(std::string(what) + " step must be positive");
        const double ratio = length / step;
        const double rounded = std::round(ratio);
        if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
            throw DomainError(std::string(what) + " step does not divide the interval evenly");
        }
        return static_cast<Index>(rounded);
    }

    static Grid from_steps(double L, double T, double h, double k) {
        return Grid(L, T, divisions(L, h, "space"), divisions(T, k, "time"));
    }

    double L() const { return L_; }
    double T() const { return T_; }
    Index m() const { return m_; }
    Index n() const { return n_; }
    double h() const { return L_ / static_cast<double>(m_); }
    double k() const { return T_ / static_cast<double>(n_); }
    Index interior() const { return m_ - 1; }
    double x(Index i) const { return static_cast<double>(i) * h(); }
    double t(Index j) const { return static_cast<double>(j) * k(); }

    VectorX<double> interior_nodes() const {
        VectorX<double> xs(interior());
        for (Index i = 1; i < m_; ++i) xs(i - 1) = x(i);
        return xs;
    }

private:
    double L_;
    double T_;
    Index m_;
    Index n_;
};

enum class OperatorForm { product, kernel };

inline const char* to_string(OperatorForm f) {
    return f == OperatorForm::product ? "product" : "kernel";
}

template <typename Scalar = double>
struct OperatorMatrix {
    MatrixX<Scalar> entries;
    OperatorForm form = OperatorForm::product;

    Index size() const { return entries.rows(); }
};

/// n x n symmetric Toeplitz matrix with first column c (zero past c's end).
template <typename Scalar>
MatrixX<Scalar> symmetric_toeplitz(const VectorX<Scalar>& c, Index n) {
    MatrixX<Scalar> t = MatrixX<Scalar>::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            const Index d = std::abs(i - j);
            if (d < c.size()) t(i, j) = c(d);
        }
    return t;
}

/// A_{ij} = theta_{|i-j|}, size (m-1).
template <typename Scalar = double>
MatrixX<Scalar> assemble_factor_A(FractionalOrder nu, int p, Index m) {
    require_supported_accuracy(p);
    if (m - 1 < p / 2) {
        throw DimensionError("grid with m=" + std::to_string(m) +
                             " too small for accuracy order p=" + std::to_string(p));
    }
    return symmetric_toeplitz(multipliers<Scalar>(nu, p).multipliers(), m - 1);
}

/// M_{ij} = K h^-nu omega_{|i-j|}, full bandwidth.
template <typename Scalar = double>
MatrixX<Scalar> assemble_factor_M(FractionalOrder nu, double K, double h, Index m) {
    if (!(K >= 0.0)) throw DomainError("coefficient K must be nonnegative");
    if (!(h > 0.0)) throw DomainError("space step h must be positive");
    if (m < 2) throw DimensionError("need at least one interior node");
    using std::pow;
    const Scalar scale = Scalar(K) * pow(Scalar(h), -Scalar(nu.value()));
    const auto omega = centered_weights<Scalar>(nu, m - 2);
    return scale * symmetric_toeplitz<Scalar>(omega.weights(), m - 1);
}

namespace detail {

template <typename Scalar>
MatrixX<Scalar> kernel_term(FractionalOrder nu, double K, double h, int p, Index m) {
    using std::pow;
    const Scalar scale = Scalar(K) * pow(Scalar(h), -Scalar(nu.value()));
    const auto c = composite_kernel<Scalar>(nu, p, m - 2);
    return scale * symmetric_toeplitz<Scalar>(c.kernel(), m - 1);
}

}  // namespace detail

/// S = A^a M^a + A^b M^b (product form) or the symmetric Toeplitz matrix of
/// the composite kernels (kernel form).  The two agree on rows p/2 .. m-p/2.
template <typename Scalar = double>
OperatorMatrix<Scalar> assemble_S(const ProblemSpec& spec, const Grid& grid, int p,
                                  OperatorForm form = OperatorForm::product) {
    spec.validate();
    require_supported_accuracy(p);
    if (std::abs(grid.L() - spec.L) > 1e-12 * spec.L)
        throw DomainError("grid length does not match the problem domain");
    const Index m = grid.m();
    if (m - 1 < p / 2) {
        throw DimensionError("grid with m=" + std::to_string(m) +
                             " too small for accuracy order p=" + std::to_string(p));
    }
    const double h = grid.h();
    OperatorMatrix<Scalar> S{MatrixX<Scalar>::Zero(m - 1, m - 1), form};

    struct Term {
        FractionalOrder nu;
        double K;
    };
    for (const Term& term : {Term{spec.alpha, spec.K_alpha}, Term{spec.beta, spec.K_beta}}) {
        if (term.K == 0.0) continue;
        if (form == OperatorForm::product) {
            S.entries.noalias() += assemble_factor_A<Scalar>(term.nu, p, m) *
                                   assemble_factor_M<Scalar>(term.nu, term.K, h, m);
        } else {
            S.entries += detail::kernel_term<Scalar>(term.nu, term.K, h, p, m);
        }
    }
    return S;
}

template <typename Scalar>
VectorX<Scalar> apply(const OperatorMatrix<Scalar>& S, const VectorX<Scalar>& v) {
    if (v.size() != S.size()) throw DimensionError("apply: vector length mismatch");
    return S.entries * v;
}

/// Row/column reversal J A J.
template <typename Derived>
auto exchange(const Eigen::MatrixBase<Derived>& a) {
    return a.reverse().eval();
}

}  // namespace rfade
