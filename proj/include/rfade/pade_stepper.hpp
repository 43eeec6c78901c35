#pragma once

// [3,3] Pade time stepping for U' = -S U:
//   U_{j+1} = P(kS)^{-1} Q(kS) U_j,
//   P(z) = 120 + 60 z + 12 z^2 + z^3,  Q(z) = P(-z).

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "rfade/dense_linalg.hpp"
#include "rfade/errors.hpp"
#include "rfade/operator.hpp"

namespace rfade {

template <typename T>
T pade33_denominator(const T& z) {
    return T(120) + z * (T(60) + z * (T(12) + z));
}

template <typename T>
T pade33_numerator(const T& z) {
    return T(120) + z * (T(-60) + z * (T(12) - z));
}

/// phi(z) = Q(z) / P(z) ~ exp(-z); works for real and complex z.
template <typename T>
T pade33(const T& z) {
    const T den = pade33_denominator(z);
    if (den == T(0)) throw SingularMatrixError("pade33: pole of the denominator");
    return pade33_numerator(z) / den;
}

struct SolutionField {
    VectorX<double> values;  // interior nodes x_1 .. x_{m-1}
    double time = 0.0;
};

template <typename Scalar = double>
class StepOperator {
public:
    StepOperator(double k, OperatorForm form, MatrixX<Scalar> scaled, LUFactors<Scalar> denominator)
        : k_(k), form_(form), kS_(std::move(scaled)), denominator_(std::move(denominator)) {}

    double k() const { return k_; }
    OperatorForm form() const { return form_; }
    Index size() const { return kS_.rows(); }
    const MatrixX<Scalar>& scaled_operator() const { return kS_; }
    const LUFactors<Scalar>& denominator() const { return denominator_; }

    /// Q(kS) u by Horner: three matrix-vector products.
    VectorX<Scalar> numerator_apply(const VectorX<Scalar>& u) const {
        VectorX<Scalar> y = -u;
        y = kS_ * y + Scalar(12) * u;
        y = kS_ * y - Scalar(60) * u;
        y = kS_ * y + Scalar(120) * u;
        return y;
    }

    VectorX<Scalar> operator()(const VectorX<Scalar>& u) const {
        if (u.size() != size()) throw DimensionError("step: field length mismatch");
        return lu_solve(denominator_, numerator_apply(u));
    }

    /// Dense step matrix P(kS)^{-1} Q(kS).  Diagnostic only.
    MatrixX<Scalar> matrix() const {
        const Index n = size();
        const MatrixX<Scalar> I = MatrixX<Scalar>::Identity(n, n);
        const MatrixX<Scalar> q = Scalar(120) * I + kS_ * (Scalar(-60) * I + kS_ * (Scalar(12) * I - kS_));
        return lu_solve(denominator_, q);
    }

private:
    double k_;
    OperatorForm form_;
    MatrixX<Scalar> kS_;
    LUFactors<Scalar> denominator_;
};

/// Forms P(kS) and factors it once.
template <typename Scalar>
StepOperator<Scalar> make_stepper(const OperatorMatrix<Scalar>& S, double k) {
    if (!(k > 0.0)) throw DomainError("make_stepper: time step must be positive");
    const Index n = S.size();
    MatrixX<Scalar> kS = Scalar(k) * S.entries;
    const MatrixX<Scalar> I = MatrixX<Scalar>::Identity(n, n);
    MatrixX<Scalar> p = Scalar(120) * I + kS * (Scalar(60) * I + kS * (Scalar(12) * I + kS));
    try {
        auto lu = lu_factor(p);
        return StepOperator<Scalar>(k, S.form, std::move(kS), std::move(lu));
    } catch (const SingularMatrixError& e) {
        throw SingularMatrixError(std::string("make_stepper: P(kS) is singular (") + e.what() + ")");
    }
}

template <typename Scalar>
VectorX<Scalar> step(const StepOperator<Scalar>& st, const VectorX<Scalar>& u) {
    return st(u);
}

inline SolutionField step(const StepOperator<double>& st, const SolutionField& u) {
    return SolutionField{st(u.values), u.time + st.k()};
}

struct StabilityEntry {
    double k = 0.0;
    double rho_estimate = 0.0;
    bool converged = false;
    bool pass = false;
    std::optional<std::string> error;
};

struct StabilityOptions {
    int iterations = 5000;
    double tol = 1e-10;
};

/// Spectral-radius estimate of the step operator for every k; pass means
/// rho < 1.
template <typename Scalar>
std::vector<StabilityEntry> stability_report(const OperatorMatrix<Scalar>& S,
                                             const std::vector<double>& k_list,
                                             StabilityOptions opts = {}) {
    if (k_list.empty()) throw UsageError("stability_report: empty list of time steps");
    std::vector<StabilityEntry> report;
    report.reserve(k_list.size());
    for (double k : k_list) {
        StabilityEntry entry;
        entry.k = k;
        try {
            const auto st = make_stepper(S, k);
            const auto est = spectral_radius_estimate(
                [&](const VectorX<double>& v) -> VectorX<double> {
                    return st(v.template cast<Scalar>()).template cast<double>();
                },
                S.size(), opts.iterations, opts.tol);
            entry.rho_estimate = est.value;
            entry.converged = est.converged;
            entry.pass = est.value < 1.0;
        } catch (const Error& e) {
            entry.error = e.what();
        }
        report.push_back(entry);
    }
    return report;
}

}  // namespace rfade
