#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "rfade/pade_stepper.hpp"

using namespace rfade;

namespace {

OperatorMatrix<double> diagonal_operator(std::vector<double> d) {
    VectorX<double> v = Eigen::Map<VectorX<double>>(d.data(), static_cast<Index>(d.size()));
    return {v.asDiagonal().toDenseMatrix(), OperatorForm::kernel};
}

OperatorMatrix<double> benchmark_operator(Benchmark b, double alpha, double beta, Index m, int p,
                                          OperatorForm form) {
    const auto spec = ProblemSpec::example(b, alpha, beta);
    return assemble_S(spec, Grid(spec.L, 1.0, m, 1), p, form);
}

VectorX<double> unit_random(Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    VectorX<double> v(n);
    for (Index i = 0; i < n; ++i) v(i) = d(rng);
    return v / max_abs(v);
}

}  // namespace

TEST_CASE("pade33: scalar values") {
    CHECK(pade33(0.0) == 1.0);
    CHECK(pade33(1.0) == doctest::Approx(71.0 / 193.0).epsilon(1e-15));
    CHECK(pade33(1.0) == doctest::Approx(0.367875647668393782383419689119170984456).epsilon(1e-15));
    CHECK(std::abs(pade33(std::complex<double>(0.5, 2.0))) < 1.0);
    // Q(z) = P(-z).
    for (double z : {0.3, 1.7, -2.5}) CHECK(pade33_numerator(z) == pade33_denominator(-z));
}

TEST_CASE("pade33 contracts the open right half plane") {
    std::mt19937_64 rng(20241015);
    std::uniform_real_distribution<double> re(0.0, 100.0), im(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        double x = re(rng);
        if (x == 0.0) x = 1e-3;
        const std::complex<double> z(x, im(rng));
        CHECK(std::abs(pade33(z)) < 1.0);
    }
    CHECK(std::abs(pade33(std::complex<double>(0.0, 3.0))) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pade33: local error is seventh order") {
    std::vector<double> zs, errs;
    for (int i = 0; i <= 20; ++i) {
        const double z = 0.01 * std::pow(50.0, i / 20.0);
        const long double err = std::abs(static_cast<long double>(pade33(static_cast<long double>(z))) -
                                         std::exp(-static_cast<long double>(z)));
        zs.push_back(z);
        errs.push_back(static_cast<double>(err));
        const double ratio = static_cast<double>(err) / std::pow(z, 7);
        CHECK(ratio > 1e-6);
        CHECK(ratio < 1e-4);
    }
    CHECK(oracle::loglog_slope(zs, errs) == doctest::Approx(7.0).epsilon(0.2 / 7.0));
}

TEST_CASE("make_stepper: scalar and diagonal reductions") {
    const auto st1 = make_stepper(diagonal_operator({3.0}), 0.2);
    VectorX<double> one = VectorX<double>::Ones(1);
    CHECK(st1(one)(0) == doctest::Approx(pade33(0.6)).epsilon(1e-15));

    const auto st2 = make_stepper(diagonal_operator({1.0, 2.0}), 0.1);
    const auto out = st2(VectorX<double>::Ones(2).eval());
    CHECK(out(0) == doctest::Approx(pade33(0.1)).epsilon(1e-15));
    CHECK(out(1) == doctest::Approx(pade33(0.2)).epsilon(1e-15));

    CHECK_THROWS_AS(make_stepper(diagonal_operator({1.0}), 0.0), DomainError);
    CHECK_THROWS_AS(st2(VectorX<double>::Ones(3).eval()), DimensionError);
}

TEST_CASE("make_stepper: P(kS) singular at a real pole") {
    // P has one real root near -9.35; S = -root / k hits it.
    double lo = -20.0, hi = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pade33_denominator(mid) < 0.0 ? lo : hi) = mid;
    }
    CHECK_THROWS_AS(make_stepper(diagonal_operator({lo, 1.0}), 1.0), SingularMatrixError);
}

TEST_CASE("step: zero operator leaves the field unchanged") {
    OperatorMatrix<double> zero{MatrixX<double>::Zero(5, 5), OperatorForm::kernel};
    const auto st = make_stepper(zero, 0.7);
    const SolutionField u{unit_random(5, 1), 0.25};
    const auto v = step(st, u);
    CHECK(v.values == u.values);
    CHECK(v.time == doctest::Approx(0.95));
}

TEST_CASE("step: kernel form against the matrix exponential") {
    const auto S = benchmark_operator(Benchmark::example1, 1.8, 0.9, 10, 6, OperatorForm::kernel);
    const double k = 0.01;
    const auto st = make_stepper(S, k);
    const MatrixX<double> E = expm_oracle((-k * S.entries).eval());
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto u = unit_random(S.size(), seed);
        CHECK(max_abs(st(u) - E * u) <= 1e-10);
    }
}

TEST_CASE("step: one-step error is seventh order in k") {
    // Long double keeps roundoff below the O(k^7) error down to k = 1/128.
    using LD = long double;
    const auto spec = ProblemSpec::example(Benchmark::example1, 1.8, 0.9);
    const auto S = assemble_S<LD>(spec, Grid(spec.L, 1.0, 6, 1), 6, OperatorForm::kernel);
    const VectorX<LD> u = VectorX<LD>::Ones(S.size());
    std::vector<double> ks, errs;
    for (double k = 1.0 / 16; k >= 1.0 / 128; k /= 2) {
        const auto st = make_stepper(S, k);
        const MatrixX<LD> E = expm_oracle((-LD(k) * S.entries).eval());
        ks.push_back(k);
        errs.push_back(static_cast<double>(max_abs(st(u) - E * u)));
    }
    CHECK(oracle::loglog_slope(ks, errs) == doctest::Approx(7.0).epsilon(0.3 / 7.0));
}

TEST_CASE("step: reversal symmetry is preserved") {
    for (auto form : {OperatorForm::kernel, OperatorForm::product}) {
        const auto S = benchmark_operator(Benchmark::example2, 1.7, 0.8, 20, 4, form);
        const auto st = make_stepper(S, 0.01);
        VectorX<double> u(S.size());
        for (Index i = 1; i <= S.size(); ++i) u(i - 1) = i * (20.0 - i) / 400.0;
        for (int n = 0; n < 10; ++n) u = st(u);
        CHECK(max_abs(u - u.reverse().eval()) <= 1e-13 * max_abs(u));
    }
}

TEST_CASE("step matrix: symmetric for kernel form, centrosymmetric for product form") {
    const auto K = benchmark_operator(Benchmark::example1, 1.8, 0.9, 16, 6, OperatorForm::kernel);
    const auto MK = make_stepper(K, 0.3).matrix();
    CHECK(inf_norm(MK - MK.transpose()) <= 1e-12);
    const auto P = benchmark_operator(Benchmark::example1, 1.8, 0.9, 16, 6, OperatorForm::product);
    const auto MP = make_stepper(P, 0.3).matrix();
    CHECK(inf_norm(exchange(MP) - MP) <= 1e-12);
}

TEST_CASE("stability_report: positive diagonal operators") {
    const auto report = stability_report(diagonal_operator({0.1, 1.0, 10.0, 1000.0}),
                                         {0.001, 0.1, 1.0, 10.0, 100.0});
    REQUIRE(report.size() == 5);
    for (const auto& e : report) {
        CHECK_FALSE(e.error.has_value());
        CHECK(e.pass);
        CHECK(e.rho_estimate < 1.0);
    }
    CHECK_THROWS_AS(stability_report(diagonal_operator({1.0}), {}), UsageError);
}

TEST_CASE("stability_report: records construction failures per entry") {
    const auto report = stability_report(diagonal_operator({1.0}), {0.1, -1.0});
    CHECK(report[0].pass);
    CHECK(report[1].error.has_value());
    CHECK_FALSE(report[1].pass);
}

TEST_CASE("stability_report: benchmark operator, m = 50") {
    for (auto form : {OperatorForm::product, OperatorForm::kernel}) {
        const auto S = benchmark_operator(Benchmark::example1, 1.8, 0.9, 50, 6, form);
        const auto report = stability_report(S, {0.001, 0.1, 1.0, 10.0, 100.0});
        for (const auto& e : report) {
            CAPTURE(e.k);
            CHECK(e.pass);
        }
    }
}

TEST_CASE("stability_report: estimate matches the eigenvalue bound on a small operator") {
    const auto S = benchmark_operator(Benchmark::example1, 1.8, 0.9, 8, 6, OperatorForm::kernel);
    Eigen::SelfAdjointEigenSolver<MatrixX<double>> es(S.entries);
    for (double k : {0.1, 1.0, 10.0}) {
        double rho = 0.0;
        for (Index i = 0; i < S.size(); ++i) rho = std::max(rho, std::abs(pade33(k * es.eigenvalues()(i))));
        const auto report = stability_report(S, {k}, {20000, 1e-14});
        CAPTURE(k);
        CHECK(std::abs(report[0].rho_estimate - rho) <= 1e-6);
    }
}

TEST_CASE("repeated steps stay bounded") {
    const auto S = benchmark_operator(Benchmark::example1, 1.8, 0.9, 50, 6, OperatorForm::product);
    for (double k : {0.001, 1.0, 100.0}) {
        const auto st = make_stepper(S, k);
        VectorX<double> v = unit_random(S.size(), 11);
        const double v0 = v.norm();
        double sup = v0;
        for (int n = 0; n < 2000; ++n) {
            v = st(v);
            sup = std::max(sup, v.norm());
        }
        CAPTURE(k);
        CHECK(sup <= 10.0 * v0);
    }
}
