#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "rfade/cli_io.hpp"
#include "rfade/experiments.hpp"
#include "rfade/frac_coeffs.hpp"
#include "rfade/pade_stepper.hpp"

namespace {

using namespace rfade;

int run_solve(const RunConfig& cfg) {
    const Grid grid = cfg.grid();
    if (cfg.dump_matrix) {
        const auto S = assemble_S<double>(cfg.spec, grid, cfg.p, cfg.form);
        write_matrix(S, cfg.spec, cfg.p, grid.h(), *cfg.dump_matrix);
    }
    const auto fields = solve(cfg.spec, grid, cfg.p, cfg.form, cfg.snapshots);
    write_solution(fields, cfg.spec, grid, cfg.p, cfg.form, cfg.out, cfg.with_analytic,
                   cfg.series_tol);
    return 0;
}

int run_converge(const RunConfig& cfg) {
    ConvergenceOptions opts;
    opts.form = cfg.form;
    opts.series_tol = cfg.series_tol;
    const double h = cfg.spec.L / static_cast<double>(cfg.space_divisions());
    const double k = cfg.spec.T / static_cast<double>(cfg.time_divisions());
    const ConvergenceTable table = cfg.direction == Direction::space
                                       ? converge_space(cfg.spec, cfg.p, k, h, cfg.levels, opts)
                                       : converge_time(cfg.spec, cfg.p, h, k, cfg.levels, opts);
    write_table(table, cfg.out);
    const std::string text = format_table(table);
    if (cfg.text_out) write_text(text, *cfg.text_out);
    else std::cerr << text;
    return 0;
}

int run_stability(const RunConfig& cfg) {
    const Grid grid(cfg.spec.L, cfg.spec.T, cfg.space_divisions(), 1);
    const auto S = assemble_S<double>(cfg.spec, grid, cfg.p, cfg.form);
    StabilityOptions opts;
    opts.iterations = cfg.iterations;
    const auto report = stability_report(S, cfg.k_list, opts);
    write_report(report, cfg.out);
    for (const auto& e : report)
        if (e.error) std::cerr << "[rfade] k=" << e.k << ": " << *e.error << "\n";
    return 0;
}

int run_coeffs(const RunConfig& cfg) {
    const FractionalOrder nu(cfg.nu);
    VectorX<double> values;
    if (cfg.sequence == "omega") {
        values = centered_weights(nu, cfg.count - 1).weights();
    } else if (cfg.sequence == "theta") {
        values = multipliers(nu, cfg.p).multipliers();
    } else {
        values = composite_kernel(nu, cfg.p, cfg.count - 1).kernel();
    }
    write_sequence(values, cfg.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        const auto cfg = rfade::parse_config(std::vector<std::string>(argv, argv + argc));
        if (!cfg) return 0;
        switch (cfg->command) {
            case rfade::Command::solve: return run_solve(*cfg);
            case rfade::Command::converge: return run_converge(*cfg);
            case rfade::Command::stability: return run_stability(*cfg);
            case rfade::Command::coeffs: return run_coeffs(*cfg);
        }
    } catch (const rfade::Error& e) {
        std::fprintf(stderr, "error[%s]: %s\n", e.code().c_str(), e.what());
        return e.code() == "usage" ? 2 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error[internal]: %s\n", e.what());
        return 1;
    }
    return 0;
}
