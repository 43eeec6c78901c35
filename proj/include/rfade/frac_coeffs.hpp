#pragma once

// Coefficient sequences of the high-order fractional centered difference:
//   omega_k  Gamma-ratio weights of the second-order centered scheme,
//   theta_s  the order-p correction multipliers (p = 2, 4, ..., 12),
//   c_j      their discrete convolution, one kernel per (nu, p).
// All sequences are symmetric in their index; only the entries with a
// nonnegative index are stored.

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "rfade/errors.hpp"

namespace rfade {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Order of a Riesz derivative: 0 < nu < 1 or 1 < nu <= 2.
class FractionalOrder {
public:
    explicit FractionalOrder(double nu) : value_(nu) {
        if (!(nu > 0.0) || nu == 1.0 || !(nu <= 2.0)) {
            throw OrderDomainError("fractional order " + std::to_string(nu) +
                                   " outside (0,1) U (1,2]");
        }
    }

    double value() const noexcept { return value_; }
    operator double() const noexcept { return value_; }

private:
    double value_;
};

inline constexpr std::array<int, 6> kSupportedAccuracyOrders{2, 4, 6, 8, 10, 12};

inline bool is_supported_accuracy(int p) {
    for (int q : kSupportedAccuracyOrders)
        if (q == p) return true;
    return false;
}

inline void require_supported_accuracy(int p) {
    if (!is_supported_accuracy(p)) {
        throw AccuracyOrderError("accuracy order p=" + std::to_string(p) +
                                 " not supported; expected one of {2,4,6,8,10,12}");
    }
}

template <typename Scalar>
class RieszWeights {
public:
    RieszWeights(FractionalOrder order, VectorX<Scalar> w)
        : order_(order), weights_(std::move(w)) {}

    FractionalOrder order() const { return order_; }
    Index truncation() const { return weights_.size() - 1; }
    const VectorX<Scalar>& weights() const { return weights_; }

    // omega_{-k} == omega_k.
    Scalar operator()(Index k) const { return weights_(std::abs(k)); }

private:
    FractionalOrder order_;
    VectorX<Scalar> weights_;
};

template <typename Scalar>
class MultiplierSet {
public:
    MultiplierSet(FractionalOrder order, int p, VectorX<Scalar> theta)
        : order_(order), p_(p), theta_(std::move(theta)) {}

    FractionalOrder order() const { return order_; }
    int accuracy() const { return p_; }
    /// Largest |s| with a nonzero multiplier, p/2 - 1.
    Index half_width() const { return theta_.size() - 1; }
    const VectorX<Scalar>& multipliers() const { return theta_; }

    Scalar operator()(Index s) const {
        const Index a = std::abs(s);
        return a <= half_width() ? theta_(a) : Scalar(0);
    }

private:
    FractionalOrder order_;
    int p_;
    VectorX<Scalar> theta_;
};

template <typename Scalar>
class CompositeKernel {
public:
    CompositeKernel(FractionalOrder order, int p, VectorX<Scalar> c)
        : order_(order), p_(p), kernel_(std::move(c)) {}

    FractionalOrder order() const { return order_; }
    int accuracy() const { return p_; }
    Index truncation() const { return kernel_.size() - 1; }
    const VectorX<Scalar>& kernel() const { return kernel_; }

    Scalar operator()(Index j) const { return kernel_(std::abs(j)); }

    /// Two-sided sequence c_{-J} ... c_J.
    VectorX<Scalar> two_sided() const {
        const Index J = truncation();
        VectorX<Scalar> out(2 * J + 1);
        for (Index j = -J; j <= J; ++j) out(j + J) = (*this)(j);
        return out;
    }

private:
    FractionalOrder order_;
    int p_;
    VectorX<Scalar> kernel_;
};

/// omega_0 ... omega_K for order nu.  omega_0 comes from log-Gamma, the rest
/// from the ratio recurrence, which yields exact zeros for nu = 2.
template <typename Scalar = double>
RieszWeights<Scalar> centered_weights(FractionalOrder nu, Index K) {
    if (K < 0) throw DimensionError("weight truncation must be nonnegative");
    using std::exp;
    using std::lgamma;
    const Scalar v = Scalar(nu.value());
    const Scalar half = v / Scalar(2);
    VectorX<Scalar> w(K + 1);
    w(0) = exp(lgamma(v + Scalar(1)) - Scalar(2) * lgamma(half + Scalar(1)));
    for (Index k = 0; k < K; ++k) {
        const Scalar kk = Scalar(k);
        w(k + 1) = w(k) * (kk - half) / (kk + Scalar(1) + half);
    }
    return RieszWeights<Scalar>(nu, std::move(w));
}

namespace detail {

struct Rational {
    long long num;
    long long den;
};

// theta_{s,p} as a polynomial in nu with ascending exact rational
// coefficients; row s of table p.
using ThetaRow = std::vector<Rational>;

inline std::span<const ThetaRow> theta_table(int p) {
    static const std::vector<ThetaRow> p2 = {{{1, 1}}};
    static const std::vector<ThetaRow> p4 = {
        {{1, 1}, {1, 12}},
        {{0, 1}, {-1, 24}},
    };
    static const std::vector<ThetaRow> p6 = {
        {{1, 1}, {17, 160}, {1, 192}},
        {{0, 1}, {-41, 720}, {-1, 288}},
        {{0, 1}, {11, 2880}, {1, 1152}},
    };
    static const std::vector<ThetaRow> p8 = {
        {{1, 1}, {5297, 45360}, {29, 3456}, {5, 20736}},
        {{0, 1}, {-7843, 120960}, {-3, 512}, {-5, 27648}},
        {{0, 1}, {211, 30240}, {7, 3840}, {1, 13824}},
        {{0, 1}, {-191, 362880}, {-11, 69120}, {-1, 82944}},
    };
    static const std::vector<ThetaRow> p10 = {
        {{1, 1}, {118829, 967680}, {51941, 4976640}, {157, 331776}, {35, 3981312}},
        {{0, 1}, {-252769, 3628800}, {-46631, 6220800}, {-19, 51840}, {-7, 995328}},
        {{0, 1}, {68119, 7257600}, {32861, 12441600}, {137, 829440}, {7, 1990656}},
        {{0, 1}, {-1469, 1209600}, {-17111, 43545600}, {-1, 25920}, {-1, 995328}},
        {{0, 1}, {2497, 29030400}, {10181, 348364800}, {11, 3317760}, {1, 7962624}},
    };
    static const std::vector<ThetaRow> p12 = {
        {{1, 1}, {6742753, 53222400}, {2303, 194400}, {22061, 33177600}, {203, 9953280},
         {7, 26542080}},
        {{0, 1}, {-11639731, 159667200}, {-431513, 49766400}, {-20953, 39813120},
         {-133, 7962624}, {-7, 31850496}},
        {{0, 1}, {299093, 26611200}, {24041, 7257600}, {17869, 69672960}, {1, 110592},
         {1, 7962624}},
        {{0, 1}, {-203257, 106444800}, {-449171, 696729600}, {-13529, 185794560},
         {-49, 15925248}, {-1, 21233664}},
        {{0, 1}, {230371, 958003200}, {5563, 65318400}, {9133, 836075520}, {7, 11943936},
         {1, 95551488}},
        {{0, 1}, {-14797, 958003200}, {-11693, 2090188800}, {-6361, 8360755200},
         {-11, 238878720}, {-1, 955514880}},
    };
    switch (p) {
        case 2: return p2;
        case 4: return p4;
        case 6: return p6;
        case 8: return p8;
        case 10: return p10;
        case 12: return p12;
    }
    require_supported_accuracy(p);
    return {};
}

template <typename Scalar>
Scalar horner(const ThetaRow& row, Scalar x) {
    Scalar acc(0);
    for (auto it = row.rbegin(); it != row.rend(); ++it)
        acc = acc * x + Scalar(it->num) / Scalar(it->den);
    return acc;
}

}  // namespace detail

/// theta_0 ... theta_{p/2-1}.
template <typename Scalar = double>
MultiplierSet<Scalar> multipliers(FractionalOrder nu, int p) {
    require_supported_accuracy(p);
    const auto table = detail::theta_table(p);
    VectorX<Scalar> theta(static_cast<Index>(table.size()));
    for (std::size_t s = 0; s < table.size(); ++s)
        theta(static_cast<Index>(s)) = detail::horner(table[s], Scalar(nu.value()));
    return MultiplierSet<Scalar>(nu, p, std::move(theta));
}

/// c_0 ... c_J with c_j = sum_s theta_|s| omega_|j-s|.  The weights are
/// generated up to J + p/2 - 1 so every stored entry is an exact finite sum.
template <typename Scalar = double>
CompositeKernel<Scalar> composite_kernel(FractionalOrder nu, int p, Index J) {
    if (J < 0) throw DimensionError("kernel truncation must be nonnegative");
    const auto theta = multipliers<Scalar>(nu, p);
    const Index q = theta.half_width();
    const auto omega = centered_weights<Scalar>(nu, J + q);
    VectorX<Scalar> c(J + 1);
    for (Index j = 0; j <= J; ++j) {
        Scalar acc(0);
        for (Index s = -q; s <= q; ++s) acc += theta(s) * omega(j - s);
        c(j) = acc;
    }
    return CompositeKernel<Scalar>(nu, p, std::move(c));
}

}  // namespace rfade
