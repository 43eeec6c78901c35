#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rfade/experiments.hpp"

using namespace rfade;

namespace {

ProblemSpec laplacian_spec() {
    // alpha = 2 without the advective term: the method converges to the sine series.
    ProblemSpec s = ProblemSpec::example(Benchmark::example2, 2.0, 0.5);
    s.K_beta = 0.0;
    return s;
}

SolutionField exact(const ProblemSpec& spec, const Grid& grid) {
    return sample_on_grid(AnalyticSeries::for_problem(spec), grid, spec.T);
}

}  // namespace

TEST_CASE("initial_field samples the interior nodes") {
    const auto spec = ProblemSpec::example(Benchmark::example2, 1.7, 0.8);
    const auto u = initial_field(spec, Grid(1.0, 1.0, 4, 1));
    REQUIRE(u.values.size() == 3);
    CHECK(u.values(0) == 0.25 * 0.75);
    CHECK(u.values(1) == 0.25);
    CHECK(u.time == 0.0);
}

TEST_CASE("solve: snapshots") {
    const auto spec = ProblemSpec::example(Benchmark::example1, 1.8, 0.9);
    const Grid g(spec.L, 1.0, 10, 100);
    const auto out = solve(spec, g, 6, OperatorForm::product, {0.5, 0.0, 0.5});
    REQUIRE(out.size() == 3);
    CHECK(out[0].time == 0.0);
    CHECK(out[0].values == initial_field(spec, g).values);
    CHECK(out[1].time == doctest::Approx(0.5));
    CHECK(out[2].time == doctest::Approx(1.0));
    CHECK(max_abs(out[2].values) < max_abs(out[1].values));

    const auto last = solve(spec, g, 6);
    REQUIRE(last.size() == 1);
    CHECK(last[0].values == out[2].values);

    CHECK_THROWS_AS(solve(spec, g, 6, OperatorForm::product, {0.005}), DomainError);
    CHECK_THROWS_AS(solve(spec, g, 6, OperatorForm::product, {1.5}), DomainError);
    CHECK_THROWS_AS(solve(spec, Grid(spec.L, 2.0, 10, 100), 6), DomainError);
    CHECK_THROWS_AS(solve(spec, g, 5), AccuracyOrderError);
}

TEST_CASE("solve: product and kernel forms give symmetric fields on example 2") {
    const auto spec = ProblemSpec::example(Benchmark::example2, 1.7, 0.8);
    for (auto form : {OperatorForm::product, OperatorForm::kernel}) {
        const auto u = solve(spec, Grid(1.0, 1.0, 20, 50), 4, form).back();
        CHECK(max_abs(u.values - u.values.reverse().eval()) <= 1e-13 * max_abs(u.values));
    }
}

TEST_CASE("error norms") {
    const auto spec = ProblemSpec::example(Benchmark::example1, 1.8, 0.9);
    const Grid g(spec.L, 1.0, 10, 1);
    const auto ref = exact(spec, g);
    CHECK(max_error(ref, spec) == 0.0);
    CHECK(l2_error(ref, spec) == 0.0);

    SolutionField shifted = ref;
    shifted.values.array() += 1e-3;
    CHECK(max_error(shifted, spec) == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK(l2_error(shifted, spec) == doctest::Approx(std::sqrt(g.h() * 9) * 1e-3).epsilon(1e-9));

    ProblemSpec poly = spec;
    poly.ic = InitialCondition::polynomial({0.0, 1.0});
    CHECK_THROWS_AS(max_error(ref, poly), UnsupportedComparisonError);
}

TEST_CASE("observed_rate") {
    CHECK(*observed_rate(8.0, 1.0) == doctest::Approx(3.0));
    CHECK_FALSE(observed_rate(0.0, 1.0));
    CHECK_FALSE(observed_rate(1.0, 0.0));
    CHECK_FALSE(observed_rate(std::nan(""), 1.0));
}

TEST_CASE("finalize_rates flags rates far from the nominal order") {
    ConvergenceTable t;
    t.nominal_order = 4.0;
    t.rows = {{0.1, 1.6e-3, 0, {}, false}, {0.05, 1e-4, 0, {}, false}, {0.025, 5e-5, 0, {}, false}};
    finalize_rates(t);
    CHECK_FALSE(t.rows[0].rate);
    CHECK_FALSE(t.rows[0].flagged);
    CHECK(*t.rows[1].rate == doctest::Approx(4.0));
    CHECK_FALSE(t.rows[1].flagged);
    CHECK(*t.rows[2].rate == doctest::Approx(1.0));
    CHECK(t.rows[2].flagged);
}

TEST_CASE("converge_space with the exact solution injected") {
    const auto spec = ProblemSpec::example(Benchmark::example1, 1.8, 0.9);
    ConvergenceOptions opts;
    opts.solver = exact;
    const auto t = converge_space(spec, 6, 0.001, 0.1 * std::numbers::pi, 3, opts);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.nominal_order == 6.0);
    CHECK(t.rows[0].step == doctest::Approx(0.1 * std::numbers::pi));
    CHECK(t.rows[2].step == doctest::Approx(0.025 * std::numbers::pi));
    for (const auto& row : t.rows) {
        CHECK(row.max_error == 0.0);
        CHECK(row.l2_error == 0.0);
        CHECK_FALSE(row.rate);
    }
    CHECK(t.rows[1].flagged);
    CHECK(t.rows[2].flagged);
    const auto text = format_table(t);
    CHECK(text.find("0.02500pi") != std::string::npos);
    CHECK(text.find("direction=space") != std::string::npos);
}

TEST_CASE("converge_space: alpha = 2 reaches the nominal order") {
    const auto t = converge_space(laplacian_spec(), 4, 0.01, 0.1, 3);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[1].max_error < t.rows[0].max_error);
    CHECK(t.rows[2].max_error < t.rows[1].max_error);
    REQUIRE(t.rows[2].rate);
    CHECK(*t.rows[2].rate == doctest::Approx(4.0).epsilon(0.25));
    CHECK_FALSE(t.rows[2].flagged);
}

TEST_CASE("converge_time: errors shrink and stay finite for huge steps") {
    const auto spec = laplacian_spec();
    ConvergenceOptions opts;
    opts.threads = 1;
    const auto t = converge_time(spec, 4, 0.05, 1.0, 3, opts);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.nominal_order == 6.0);
    CHECK(t.rows[0].step == 1.0);
    for (const auto& row : t.rows) CHECK(std::isfinite(row.max_error));
    CHECK(t.rows[2].max_error < t.rows[0].max_error);
    CHECK(format_table(t).find("direction=time") != std::string::npos);
}

TEST_CASE("converge: invalid requests") {
    const auto spec = laplacian_spec();
    CHECK_THROWS_AS(converge_space(spec, 4, 0.01, 0.1, 1), UsageError);
    CHECK_THROWS_AS(converge_time(spec, 4, 0.1, 0.1, 0), UsageError);
    CHECK_THROWS_AS(converge_space(spec, 4, 0.01, 0.3, 2), DomainError);
    ProblemSpec poly = spec;
    poly.ic = InitialCondition::polynomial({0.0, 1.0, -1.0});
    CHECK_THROWS_AS(converge_space(poly, 4, 0.01, 0.1, 2), UnsupportedComparisonError);
}

TEST_CASE("default_thread_count is positive") { CHECK(default_thread_count() >= 1); }
