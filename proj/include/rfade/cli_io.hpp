#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rfade/experiments.hpp"
#include "rfade/operator.hpp"
#include "rfade/pade_stepper.hpp"

namespace rfade {

inline constexpr const char* kVersion = "1.0.0";

enum class Command { solve, converge, stability, coeffs };

struct RunConfig {
    Command command = Command::solve;
    std::optional<int> example;
    ProblemSpec spec;
    int p = 6;
    std::optional<Index> m;
    std::optional<double> h;
    std::optional<Index> n;
    std::optional<double> k;
    OperatorForm form = OperatorForm::product;
    double series_tol = kDefaultSeriesTol;
    std::string out = "-";

    // solve
    std::vector<double> snapshots;
    bool with_analytic = false;
    std::optional<std::string> dump_matrix;

    // converge
    Direction direction = Direction::space;
    int levels = 5;
    std::optional<std::string> text_out;

    // stability
    std::vector<double> k_list;
    int iterations = 5000;

    // coeffs
    double nu = 0.0;
    int count = 10;
    std::string sequence = "omega";

    /// Space divisions from m or h.
    Index space_divisions() const;
    /// Time divisions from n or k.
    Index time_divisions() const;
    Grid grid() const { return Grid(spec.L, spec.T, space_divisions(), time_divisions()); }
};

/// Parses argv (argv[0] is the program name).  A JSON object given with
/// --config supplies defaults; explicit flags override it.  Throws
/// UsageError naming the offending key.  Returns nullopt after --help.
std::optional<RunConfig> parse_config(const std::vector<std::string>& argv);

/// Real number with an optional "pi" factor: "0.1pi", "pi", "3.5".
double parse_real(const std::string& text, const std::string& key);

struct SolutionDocument {
    nlohmann::ordered_json metadata;
    VectorX<double> nodes;
    std::vector<SolutionField> snapshots;
    std::vector<std::optional<VectorX<double>>> analytic;
};

nlohmann::ordered_json solution_json(const std::vector<SolutionField>& fields,
                                     const ProblemSpec& spec, const Grid& grid, int p,
                                     OperatorForm form, bool with_analytic,
                                     double series_tol = kDefaultSeriesTol);

void write_solution(const std::vector<SolutionField>& fields, const ProblemSpec& spec,
                    const Grid& grid, int p, OperatorForm form, const std::string& path,
                    bool with_analytic = false, double series_tol = kDefaultSeriesTol);

SolutionDocument read_solution(const std::string& path);

/// CSV: step,max_error,rate,l2_error.
void write_table(const ConvergenceTable& table, const std::string& path);

/// CSV: k,rho_estimate,converged,pass.
void write_report(const std::vector<StabilityEntry>& report, const std::string& path);

/// CSV: index,value.
void write_sequence(const VectorX<double>& values, const std::string& path);

/// Row-major CSV preceded by a "# form=...,alpha=...,beta=...,p=...,h=..." line.
void write_matrix(const OperatorMatrix<double>& S, const ProblemSpec& spec, int p, double h,
                  const std::string& path);

/// Writes text to path, or to stdout for "-".
void write_text(const std::string& text, const std::string& path);

/// 17 significant digits.
std::string format_real(double v);

}  // namespace rfade
