#include "rfade/cli_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace rfade {

using json = nlohmann::ordered_json;

namespace {

enum class KeyType { real, integer, text, real_list, flag };

struct KeySpec {
    const char* name;  // JSON key; the flag is "--" + name with '_' -> '-'
    KeyType type;
    const char* help;
};

const std::vector<KeySpec>& problem_keys() {
    static const std::vector<KeySpec> keys = {
        {"example", KeyType::integer, "benchmark problem 1 or 2 (presets L and the initial condition)"},
        {"L", KeyType::real, "domain length (accepts a pi factor, e.g. 1pi)"},
        {"T", KeyType::real, "time horizon"},
        {"alpha", KeyType::real, "dispersion order in (1,2]"},
        {"beta", KeyType::real, "advection order in (0,1)"},
        {"K_alpha", KeyType::real, "dispersion coefficient (> 0)"},
        {"K_beta", KeyType::real, "advection coefficient (>= 0)"},
        {"ic_poly", KeyType::real_list, "initial condition polynomial, ascending coefficients"},
        {"p", KeyType::integer, "spatial accuracy order: 2,4,6,8,10,12"},
        {"m", KeyType::integer, "space divisions"},
        {"h", KeyType::real, "space step (accepts a pi factor, e.g. 0.1pi)"},
        {"n", KeyType::integer, "time divisions"},
        {"k", KeyType::real, "time step"},
        {"form", KeyType::text, "operator form: product or kernel"},
        {"series_tol", KeyType::real, "analytic series truncation tolerance"},
        {"out", KeyType::text, "output path ('-' for stdout)"},
    };
    return keys;
}

std::vector<KeySpec> keys_for(Command c) {
    std::vector<KeySpec> keys;
    if (c == Command::coeffs) {
        keys = {
            {"nu", KeyType::real, "fractional order"},
            {"p", KeyType::integer, "accuracy order: 2,4,6,8,10,12"},
            {"count", KeyType::integer, "number of entries (index 0..count-1)"},
            {"sequence", KeyType::text, "omega, theta or kernel"},
            {"out", KeyType::text, "output path ('-' for stdout)"},
        };
        return keys;
    }
    keys = problem_keys();
    switch (c) {
        case Command::solve:
            keys.push_back({"snapshots", KeyType::real_list, "extra output times"});
            keys.push_back({"analytic", KeyType::flag, "include analytic values and errors"});
            keys.push_back({"dump_matrix", KeyType::text, "write the operator matrix as CSV"});
            break;
        case Command::converge:
            keys.push_back({"direction", KeyType::text, "space or time"});
            keys.push_back({"levels", KeyType::integer, "number of halvings (>= 2)"});
            keys.push_back({"text_out", KeyType::text, "aligned text table path"});
            break;
        case Command::stability:
            keys.push_back({"k_list", KeyType::real_list, "time steps to certify"});
            keys.push_back({"iters", KeyType::integer, "power iterations per step size"});
            break;
        case Command::coeffs:
            break;
    }
    return keys;
}

std::string flag_name(const std::string& key) {
    std::string f = key;
    for (char& ch : f)
        if (ch == '_') ch = '-';
    return "--" + f;
}

[[noreturn]] void usage(const std::string& key, const std::string& what) {
    throw UsageError(key + ": " + what);
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(parse_real(item, key));
    }
    return out;
}

// Converts a raw CLI string into the JSON value of the key's type.
json from_cli(const KeySpec& spec, const std::vector<std::string>& raw) {
    const std::string key = spec.name;
    switch (spec.type) {
        case KeyType::flag: return true;
        case KeyType::text: return raw.back();
        case KeyType::real: return parse_real(raw.back(), key);
        case KeyType::integer: {
            const std::string& s = raw.back();
            std::size_t pos = 0;
            long long v = 0;
            try {
                v = std::stoll(s, &pos);
            } catch (const std::exception&) {
                usage(key, "expected an integer, got '" + s + "'");
            }
            if (pos != s.size()) usage(key, "expected an integer, got '" + s + "'");
            return v;
        }
        case KeyType::real_list: {
            std::vector<double> all;
            for (const auto& r : raw) {
                auto part = parse_list(r, key);
                all.insert(all.end(), part.begin(), part.end());
            }
            return all;
        }
    }
    return nullptr;
}

void check_json_type(const KeySpec& spec, const json& v) {
    const std::string key = spec.name;
    switch (spec.type) {
        case KeyType::flag:
            if (!v.is_boolean()) usage(key, "expected a boolean");
            return;
        case KeyType::text:
            if (!v.is_string()) usage(key, "expected a string");
            return;
        case KeyType::real:
            if (!v.is_number() && !v.is_string()) usage(key, "expected a number");
            return;
        case KeyType::integer:
            if (!v.is_number_integer()) usage(key, "expected an integer");
            return;
        case KeyType::real_list:
            if (!v.is_array()) usage(key, "expected an array of numbers");
            for (const auto& e : v)
                if (!e.is_number()) usage(key, "expected an array of numbers");
            return;
    }
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const std::exception& e) {
        usage("config", "invalid JSON in " + path + ": " + e.what());
    }
    if (!doc.is_object()) usage("config", "config file must hold a flat JSON object");
    return doc;
}

class Values {
public:
    explicit Values(std::map<std::string, json> v) : v_(std::move(v)) {}

    bool has(const std::string& key) const { return v_.count(key) != 0; }

    double real(const std::string& key) const {
        const json& j = v_.at(key);
        if (j.is_string()) return parse_real(j.get<std::string>(), key);
        return j.get<double>();
    }
    long long integer(const std::string& key) const { return v_.at(key).get<long long>(); }
    std::string text(const std::string& key) const { return v_.at(key).get<std::string>(); }
    std::vector<double> list(const std::string& key) const {
        return v_.at(key).get<std::vector<double>>();
    }
    bool flag(const std::string& key) const { return has(key) && v_.at(key).get<bool>(); }

private:
    std::map<std::string, json> v_;
};

FractionalOrder order_from(const Values& v, const std::string& key, double fallback) {
    const double value = v.has(key) ? v.real(key) : fallback;
    try {
        return FractionalOrder(value);
    } catch (const Error& e) {
        usage(key, e.what());
    }
}

int accuracy_from(const Values& v, int fallback) {
    const long long p = v.has("p") ? v.integer("p") : fallback;
    if (!is_supported_accuracy(static_cast<int>(p)))
        usage("p", "unsupported accuracy order " + std::to_string(p) +
                       "; supported orders are {2,4,6,8,10,12}");
    return static_cast<int>(p);
}

void build_problem(RunConfig& cfg, const Values& v) {
    if (v.has("example")) {
        const long long ex = v.integer("example");
        if (ex != 1 && ex != 2) usage("example", "expected 1 or 2");
        cfg.example = static_cast<int>(ex);
        if (v.has("ic_poly")) usage("ic_poly", "cannot override the initial condition of --example");
    }
    ProblemSpec& s = cfg.spec;
    if (cfg.example) {
        const Benchmark b = *cfg.example == 1 ? Benchmark::example1 : Benchmark::example2;
        s.ic = InitialCondition::benchmark(b);
        s.L = b == Benchmark::example1 ? std::numbers::pi : 1.0;
    } else {
        if (!v.has("ic_poly")) usage("ic_poly", "required without --example");
        if (!v.has("L")) usage("L", "required without --example");
        s.ic = InitialCondition::polynomial(v.list("ic_poly"));
    }
    if (v.has("L")) s.L = v.real("L");
    if (v.has("T")) s.T = v.real("T");
    s.alpha = order_from(v, "alpha", 1.8);
    s.beta = order_from(v, "beta", 0.9);
    if (!(s.alpha.value() > 1.0)) usage("alpha", "must lie in (1,2]");
    if (!(s.beta.value() < 1.0)) usage("beta", "must lie in (0,1)");
    if (v.has("K_alpha")) s.K_alpha = v.real("K_alpha");
    if (v.has("K_beta")) s.K_beta = v.real("K_beta");
    if (!(s.L > 0.0)) usage("L", "must be positive");
    if (!(s.T > 0.0)) usage("T", "must be positive");
    if (!(s.K_alpha > 0.0)) usage("K_alpha", "must be positive");
    if (!(s.K_beta >= 0.0)) usage("K_beta", "must be nonnegative");

    cfg.p = accuracy_from(v, cfg.example == 2 ? 4 : 6);

    if (v.has("m") && v.has("h")) usage("m", "--m and --h are mutually exclusive");
    if (v.has("n") && v.has("k")) usage("n", "--n and --k are mutually exclusive");
    if (v.has("m")) {
        if (v.integer("m") < 4) usage("m", "need at least 4 space divisions");
        cfg.m = static_cast<Index>(v.integer("m"));
    }
    if (v.has("h")) {
        cfg.h = v.real("h");
        try {
            Grid::divisions(s.L, *cfg.h, "space");
        } catch (const Error& e) {
            usage("h", e.what());
        }
    }
    if (v.has("n")) {
        if (v.integer("n") < 1) usage("n", "need at least 1 time division");
        cfg.n = static_cast<Index>(v.integer("n"));
    }
    if (v.has("k")) {
        cfg.k = v.real("k");
        if (!(*cfg.k > 0.0)) usage("k", "must be positive");
    }
    if (v.has("form")) {
        const std::string f = v.text("form");
        if (f == "product") cfg.form = OperatorForm::product;
        else if (f == "kernel") cfg.form = OperatorForm::kernel;
        else usage("form", "expected product or kernel");
    }
    if (v.has("series_tol")) {
        cfg.series_tol = v.real("series_tol");
        if (!(cfg.series_tol > 0.0)) usage("series_tol", "must be positive");
    }
}

RunConfig build_config(Command c, const Values& v) {
    RunConfig cfg;
    cfg.command = c;
    if (v.has("out")) cfg.out = v.text("out");

    if (c == Command::coeffs) {
        if (!v.has("nu")) usage("nu", "required");
        cfg.nu = order_from(v, "nu", 0.0);
        cfg.p = accuracy_from(v, 2);
        if (v.has("count")) {
            if (v.integer("count") < 1) usage("count", "must be >= 1");
            cfg.count = static_cast<int>(v.integer("count"));
        }
        if (v.has("sequence")) cfg.sequence = v.text("sequence");
        if (cfg.sequence != "omega" && cfg.sequence != "theta" && cfg.sequence != "kernel")
            usage("sequence", "expected omega, theta or kernel");
        return cfg;
    }

    build_problem(cfg, v);
    const bool has_space = cfg.m || cfg.h;
    const bool has_time = cfg.n || cfg.k;
    switch (c) {
        case Command::solve:
            if (!has_space) usage("m", "one of --m or --h is required");
            if (!has_time) usage("k", "one of --n or --k is required");
            cfg.grid();  // validates divisibility
            if (v.has("snapshots")) cfg.snapshots = v.list("snapshots");
            cfg.with_analytic = v.flag("analytic");
            if (v.has("dump_matrix")) cfg.dump_matrix = v.text("dump_matrix");
            break;
        case Command::converge: {
            if (!v.has("direction")) usage("direction", "required (space or time)");
            const std::string d = v.text("direction");
            if (d == "space") cfg.direction = Direction::space;
            else if (d == "time") cfg.direction = Direction::time;
            else usage("direction", "expected space or time");
            if (v.has("levels")) cfg.levels = static_cast<int>(v.integer("levels"));
            if (cfg.levels < 2) usage("levels", "need at least 2 levels");
            if (!has_space) usage("h", "one of --m or --h is required");
            if (!has_time) usage("k", "one of --n or --k is required");
            if (v.has("text_out")) cfg.text_out = v.text("text_out");
            break;
        }
        case Command::stability:
            if (!has_space) usage("m", "one of --m or --h is required");
            if (!v.has("k_list")) usage("k_list", "required");
            cfg.k_list = v.list("k_list");
            if (cfg.k_list.empty()) usage("k_list", "needs at least one time step");
            for (double k : cfg.k_list)
                if (!(k > 0.0)) usage("k_list", "time steps must be positive");
            if (v.has("iters")) cfg.iterations = static_cast<int>(v.integer("iters"));
            if (cfg.iterations < 1) usage("iters", "must be >= 1");
            break;
        case Command::coeffs:
            break;
    }
    return cfg;
}

}  // namespace

double parse_real(const std::string& text, const std::string& key) {
    std::string s = text;
    double factor = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        factor = std::numbers::pi;
        s.erase(s.size() - 2);
        if (s.empty()) return factor;
        if (s.back() == '*') s.pop_back();
    }
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        usage(key, "expected a number, got '" + text + "'");
    }
    if (pos != s.size()) usage(key, "expected a number, got '" + text + "'");
    return v * factor;
}

Index RunConfig::space_divisions() const {
    if (m) return *m;
    if (h) return Grid::divisions(spec.L, *h, "space");
    throw UsageError("m: one of --m or --h is required");
}

Index RunConfig::time_divisions() const {
    if (n) return *n;
    if (k) return Grid::divisions(spec.T, *k, "time");
    throw UsageError("k: one of --n or --k is required");
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& argv) {
    CLI::App app{"Riesz fractional advection-dispersion solver", "rfade"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    // -h would collide with the --h space-step option.
    app.set_help_flag("--help", "print this help and exit");

    struct Sub {
        Command command;
        CLI::App* app;
        std::vector<KeySpec> keys;
        std::map<std::string, std::vector<std::string>> raw;
        std::map<std::string, CLI::Option*> options;
        std::string config_path;
    };
    std::vector<Sub> subs;
    subs.reserve(4);
    const std::pair<Command, const char*> commands[] = {
        {Command::solve, "solve"},
        {Command::converge, "converge"},
        {Command::stability, "stability"},
        {Command::coeffs, "coeffs"},
    };
    for (const auto& [cmd, name] : commands) {
        subs.push_back(Sub{cmd, nullptr, keys_for(cmd), {}, {}, {}});
    }
    const char* descriptions[] = {
        "solve one problem and write the solution as JSON",
        "spatial or temporal convergence table against the analytic series",
        "spectral-radius stability report for a list of time steps",
        "dump coefficient sequences as CSV",
    };
    for (std::size_t i = 0; i < subs.size(); ++i) {
        Sub& sub = subs[i];
        sub.app = app.add_subcommand(commands[i].second, descriptions[i]);
        sub.app->add_option("--config", sub.config_path, "JSON file with default values");
        for (const auto& key : sub.keys) {
            auto& slot = sub.raw[key.name];
            CLI::Option* opt = nullptr;
            if (key.type == KeyType::flag) {
                opt = sub.app->add_flag(flag_name(key.name), key.help);
            } else {
                opt = sub.app->add_option(flag_name(key.name), slot, key.help);
                if (key.type == KeyType::real_list) {
                    opt->allow_extra_args(true);
                } else {
                    opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
                    opt->allow_extra_args(false);
                }
            }
            sub.options[key.name] = opt;
        }
        if (sub.options.count("m") && sub.options.count("h")) sub.options["m"]->excludes(sub.options["h"]);
        if (sub.options.count("n") && sub.options.count("k")) sub.options["n"]->excludes(sub.options["k"]);
    }

    std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        if (auto* sel = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front())
            std::cout << sel->help();
        return std::nullopt;
    } catch (const CLI::CallForVersion&) {
        std::cout << kVersion << "\n";
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string("cli: ") + e.what());
    }

    for (Sub& sub : subs) {
        if (!sub.app->parsed()) continue;
        std::map<std::string, json> values;
        if (!sub.config_path.empty()) {
            const json doc = load_config_file(sub.config_path);
            for (const auto& [key, value] : doc.items()) {
                auto it = std::find_if(sub.keys.begin(), sub.keys.end(),
                                       [&](const KeySpec& k) { return key == k.name; });
                if (it == sub.keys.end()) usage(key, "unknown key in config file");
                check_json_type(*it, value);
                values[key] = value;
            }
        }
        for (const auto& key : sub.keys) {
            CLI::Option* opt = sub.options.at(key.name);
            if (opt->count() == 0) continue;
            values[key.name] = from_cli(key, sub.raw[key.name]);
        }
        return build_config(sub.command, Values(std::move(values)));
    }
    throw UsageError("cli: a subcommand is required");
}

std::string format_real(double v) {
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& text, const std::string& path) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path);
}

namespace {

json vector_json(const VectorX<double>& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

VectorX<double> vector_from(const json& arr) {
    VectorX<double> v(static_cast<Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Index>(i)) = arr[i].get<double>();
    return v;
}

}  // namespace

json solution_json(const std::vector<SolutionField>& fields, const ProblemSpec& spec,
                   const Grid& grid, int p, OperatorForm form, bool with_analytic,
                   double series_tol) {
    json doc;
    json meta;
    meta["version"] = kVersion;
    meta["initial_condition"] = spec.ic.name();
    meta["L"] = spec.L;
    meta["T"] = spec.T;
    meta["alpha"] = spec.alpha.value();
    meta["beta"] = spec.beta.value();
    meta["K_alpha"] = spec.K_alpha;
    meta["K_beta"] = spec.K_beta;
    meta["p"] = p;
    meta["m"] = grid.m();
    meta["n"] = grid.n();
    meta["h"] = grid.h();
    meta["k"] = grid.k();
    meta["form"] = to_string(form);
    doc["metadata"] = meta;
    if (fields.empty()) {
        doc["snapshots"] = json::array();
        return doc;
    }
    doc["nodes"] = vector_json(grid.interior_nodes());

    std::optional<AnalyticSeries> series;
    if (with_analytic) series = AnalyticSeries::for_problem(spec, series_tol);

    json snaps = json::array();
    for (const auto& f : fields) {
        if (f.values.size() != grid.interior())
            throw DimensionError("write_solution: field length does not match the grid");
        json s;
        s["t"] = f.time;
        s["values"] = vector_json(f.values);
        if (series) {
            const auto exact = sample_on_grid(*series, grid, f.time);
            s["analytic"] = vector_json(exact.values);
            s["max_error"] = max_error(f, spec, series_tol);
            s["l2_error"] = l2_error(f, spec, series_tol);
        }
        snaps.push_back(std::move(s));
    }
    doc["snapshots"] = std::move(snaps);
    return doc;
}

void write_solution(const std::vector<SolutionField>& fields, const ProblemSpec& spec,
                    const Grid& grid, int p, OperatorForm form, const std::string& path,
                    bool with_analytic, double series_tol) {
    write_text(solution_json(fields, spec, grid, p, form, with_analytic, series_tol).dump(2) + "\n",
               path);
}

SolutionDocument read_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const std::exception& e) {
        throw IoError("invalid solution document " + path + ": " + e.what());
    }
    SolutionDocument out;
    out.metadata = doc.at("metadata");
    if (doc.contains("nodes")) out.nodes = vector_from(doc["nodes"]);
    for (const auto& s : doc.at("snapshots")) {
        out.snapshots.push_back(SolutionField{vector_from(s.at("values")), s.at("t").get<double>()});
        if (s.contains("analytic")) out.analytic.emplace_back(vector_from(s["analytic"]));
        else out.analytic.emplace_back(std::nullopt);
    }
    return out;
}

void write_table(const ConvergenceTable& table, const std::string& path) {
    std::string csv = "step,max_error,rate,l2_error\n";
    for (const auto& row : table.rows) {
        csv += format_real(row.step) + "," + format_real(row.max_error) + "," +
               (row.rate ? format_real(*row.rate) : std::string()) + "," +
               format_real(row.l2_error) + "\n";
    }
    write_text(csv, path);
}

void write_report(const std::vector<StabilityEntry>& report, const std::string& path) {
    std::string csv = "k,rho_estimate,converged,pass\n";
    for (const auto& e : report) {
        csv += format_real(e.k) + "," + (e.error ? std::string("nan") : format_real(e.rho_estimate)) +
               "," + (e.converged ? "true" : "false") + "," + (e.pass ? "true" : "false") + "\n";
    }
    write_text(csv, path);
}

void write_sequence(const VectorX<double>& values, const std::string& path) {
    std::string csv = "index,value\n";
    for (Index i = 0; i < values.size(); ++i)
        csv += std::to_string(i) + "," + format_real(values(i)) + "\n";
    write_text(csv, path);
}

void write_matrix(const OperatorMatrix<double>& S, const ProblemSpec& spec, int p, double h,
                  const std::string& path) {
    std::string csv = "# form=" + std::string(to_string(S.form)) +
                      ",alpha=" + format_real(spec.alpha) + ",beta=" + format_real(spec.beta) +
                      ",p=" + std::to_string(p) + ",h=" + format_real(h) + "\n";
    for (Index i = 0; i < S.size(); ++i) {
        for (Index j = 0; j < S.size(); ++j) {
            if (j > 0) csv += ",";
            csv += format_real(S.entries(i, j));
        }
        csv += "\n";
    }
    write_text(csv, path);
}

}  // namespace rfade
