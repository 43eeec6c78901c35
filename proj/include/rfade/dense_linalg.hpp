#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "rfade/errors.hpp"
#include "rfade/frac_coeffs.hpp"

namespace rfade {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Maximum absolute row sum.
template <typename Derived>
typename Derived::RealScalar inf_norm(const Eigen::MatrixBase<Derived>& a) {
    if (a.size() == 0) return 0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& v) {
    if (v.size() == 0) return 0;
    return v.cwiseAbs().maxCoeff();
}

template <typename Scalar>
class LUFactors {
public:
    explicit LUFactors(Eigen::PartialPivLU<MatrixX<Scalar>> lu) : lu_(std::move(lu)) {}

    Index size() const { return lu_.matrixLU().rows(); }
    /// Unit-lower L below the diagonal, U on and above it.
    const MatrixX<Scalar>& packed() const { return lu_.matrixLU(); }
    /// Row permutation with P A = L U.
    MatrixX<Scalar> permutation() const { return lu_.permutationP().toDenseMatrix().template cast<Scalar>(); }
    const Eigen::PartialPivLU<MatrixX<Scalar>>& decomposition() const { return lu_; }

private:
    Eigen::PartialPivLU<MatrixX<Scalar>> lu_;
};

/// Partial-pivoting LU.  Throws SingularMatrixError when a pivot falls below
/// 1e-14 * ||A||_inf.
template <typename Scalar>
LUFactors<Scalar> lu_factor(const MatrixX<Scalar>& a) {
    if (a.rows() != a.cols()) throw DimensionError("lu_factor: matrix is not square");
    if (!a.allFinite()) throw DomainError("lu_factor: matrix has non-finite entries");
    Eigen::PartialPivLU<MatrixX<Scalar>> lu(a);
    const Scalar threshold = Scalar(1e-14) * inf_norm(a);
    const auto& packed = lu.matrixLU();
    for (Index i = 0; i < packed.rows(); ++i) {
        using std::abs;
        if (!(abs(packed(i, i)) >= threshold) || packed(i, i) == Scalar(0)) {
            throw SingularMatrixError("lu_factor: pivot " + std::to_string(i) +
                                      " below singularity threshold");
        }
    }
    return LUFactors<Scalar>(std::move(lu));
}

template <typename Scalar>
VectorX<Scalar> lu_solve(const LUFactors<Scalar>& f, const VectorX<Scalar>& b) {
    if (b.size() != f.size()) throw DimensionError("lu_solve: right-hand side length mismatch");
    return f.decomposition().solve(b);
}

template <typename Scalar>
MatrixX<Scalar> lu_solve(const LUFactors<Scalar>& f, const MatrixX<Scalar>& b) {
    if (b.rows() != f.size()) throw DimensionError("lu_solve: right-hand side rows mismatch");
    return f.decomposition().solve(b);
}

struct SpectralRadiusEstimate {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

inline constexpr std::uint64_t kSpectralSeed = 0x5eed2024ULL;

/// Estimates rho(M) from the growth of ||M^n v|| for a fixed-seed random v.
/// The n-th estimate is the two-step growth sqrt(||M^n v|| / ||M^{n-2} v||),
/// which also settles when the dominant eigenvalues form a +/- pair.
/// Convergence: relative change below tol across the last five estimates.
template <typename Apply>
SpectralRadiusEstimate spectral_radius_estimate(Apply&& apply, Index dim, int iters,
                                                double tol) {
    if (iters < 1) throw DomainError("spectral_radius_estimate: iters must be >= 1");
    if (dim < 1) throw DimensionError("spectral_radius_estimate: dim must be >= 1");

    std::mt19937_64 rng(kSpectralSeed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    VectorX<double> v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = dist(rng);
    v /= v.norm();

    SpectralRadiusEstimate out;
    double prev_growth = 0.0;
    std::deque<double> history;
    for (int n = 1; n <= iters; ++n) {
        VectorX<double> w = apply(v);
        const double growth = w.norm();
        out.iterations = n;
        if (!(growth > 0.0)) {
            out.value = 0.0;
            out.converged = true;
            return out;
        }
        v = w / growth;
        const double estimate = n == 1 ? growth : std::sqrt(growth * prev_growth);
        prev_growth = growth;
        out.value = estimate;
        history.push_back(estimate);
        if (history.size() > 6) history.pop_front();
        if (history.size() == 6) {
            double change = 0.0;
            for (std::size_t i = 1; i < history.size(); ++i)
                change = std::max(change, std::abs(history[i] - history[i - 1]));
            if (change <= tol * std::abs(estimate)) {
                out.converged = true;
                return out;
            }
        }
    }
    return out;
}

/// exp(A) by scaling and squaring of a Taylor series summed to machine
/// precision.  Test oracle for the rational stepper.
template <typename Scalar>
MatrixX<Scalar> expm_oracle(const MatrixX<Scalar>& a) {
    if (a.rows() != a.cols()) throw DimensionError("expm_oracle: matrix is not square");
    const Index n = a.rows();
    using std::ceil;
    using std::log2;
    const Scalar norm = inf_norm(a);
    int squarings = 0;
    if (norm > Scalar(0.5)) squarings = static_cast<int>(ceil(log2(norm / Scalar(0.5))));
    const MatrixX<Scalar> b = a / std::pow(Scalar(2), squarings);

    MatrixX<Scalar> sum = MatrixX<Scalar>::Identity(n, n);
    MatrixX<Scalar> term = MatrixX<Scalar>::Identity(n, n);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    for (int j = 1; j <= 60; ++j) {
        term = term * b / Scalar(j);
        sum += term;
        if (inf_norm(term) <= eps * inf_norm(sum) / Scalar(4)) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

}  // namespace rfade
