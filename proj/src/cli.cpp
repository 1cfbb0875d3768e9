#include "idemlift/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace idemlift {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(ErrorCode::config_error, key + ": '" + v + "' is not a number");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 1e9) fail(ErrorCode::config_error, key + ": '" + v + "' is not an integer");
    return static_cast<int>(d);
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const unsigned long long s = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return s;
    } catch (const std::exception&) {
        fail(ErrorCode::config_error, key + ": '" + v + "' is not a non-negative integer");
    }
}

double positive_tolerance(const std::string& key, double v) {
    if (!(v > 0.0)) fail(ErrorCode::config_error, key + " must be > 0");
    return v;
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream f(path);
    if (!f) fail(ErrorCode::config_error, "cannot write " + path);
    f << content;
    if (!f) fail(ErrorCode::config_error, "cannot write " + path);
}

double max_metric(const nlohmann::json& lift, const std::string& key) {
    double worst = 0.0;
    auto scan = [&](const nlohmann::json& points) {
        for (const auto& p : points)
            if (p.contains(key) && p[key].is_number()) worst = std::max(worst, p[key].get<double>());
    };
    if (lift.contains("points")) scan(lift["points"]);
    if (lift.contains("steps"))
        for (const auto& s : lift["steps"]) scan(s["points"]);
    return worst;
}

void print_summary(const LiftReport& r, const std::string& path, std::ostream& out) {
    const auto& d = r.document;
    out << "scenario      " << r.scenario << "\n";
    out << "status        " << (r.pass ? "PASS" : "FAIL") << "\n";
    out << "theorem path  " << (d["theorem_path"].is_null() ? std::string("-") : d["theorem_path"].dump()) << "\n";
    if (d.contains("lift") && !d["lift"].contains("skipped") && !d["lift"].contains("error")) {
        const auto& lift = d["lift"];
        for (const char* key : {"idem", "lift", "comm", "orth", "sa", "identity", "oracle"}) {
            const double v = max_metric(lift, key);
            bool present = false;
            auto has = [&](const nlohmann::json& pts) {
                for (const auto& p : pts)
                    if (p.contains(key)) present = true;
            };
            if (lift.contains("points")) has(lift["points"]);
            if (lift.contains("steps"))
                for (const auto& s : lift["steps"]) has(s["points"]);
            if (present) out << "max " << key << std::string(10 - std::string(key).size(), ' ') << v << "\n";
        }
        if (lift.contains("validity") && lift["validity"].contains("radius"))
            out << "validity r    " << lift["validity"]["radius"].dump() << "\n";
    }
    for (const auto& p : d["probes"])
        out << "probe         " << p["name"].get<std::string>() << ": " << (p["pass"].get<bool>() ? "pass" : "FAIL")
            << "\n";
    for (const auto& f : r.failures) out << "failure       " << f << "\n";
    if (!path.empty()) out << "report        " << path << "\n";
}

}  // namespace

std::map<std::string, std::string> parse_config(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::config_error, "config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            fail(ErrorCode::config_error, "config line " + std::to_string(lineno) + ": empty key or value");
        out[key] = value;
    }
    return out;
}

Grid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    Grid g;
    if (parts.size() == 3) {
        g.center = to_double("grid", parts[0]);
        g.half_width = to_double("grid", parts[1]);
        g.count = to_int("grid", parts[2]);
    } else if (parts.size() == 4) {
        g.center = cd(to_double("grid", parts[0]), to_double("grid", parts[1]));
        g.half_width = to_double("grid", parts[2]);
        g.count = to_int("grid", parts[3]);
    } else {
        fail(ErrorCode::config_error, "grid must be 'c,h,n' or 're,im,h,n', got '" + text + "'");
    }
    if (g.count < 1) fail(ErrorCode::config_error, "grid point count must be >= 1");
    if (!(g.half_width >= 0.0)) fail(ErrorCode::config_error, "grid half-width must be >= 0");
    return g;
}

void apply_config(const std::map<std::string, std::string>& config, ScenarioParams& params) {
    Tolerances tol = params.tol.value_or(Tolerances{});
    bool touched_tol = false;
    for (const auto& [key, value] : config) {
        if (key == "seed") params.seed = to_seed(key, value);
        else if (key == "grid") params.grid = parse_grid(value);
        else if (key == "n") params.n = to_int(key, value);
        else if (key == "k") params.k = to_int(key, value);
        else if (key == "m") params.m = to_int(key, value);
        else if (key == "N") params.conv_grid = to_int(key, value);
        else if (key == "degree") params.degree = to_int(key, value);
        else if (key == "n1") params.n1 = to_int(key, value);
        else if (key == "base") params.base = value;
        else if (key == "perturbation") params.perturbation = to_double(key, value);
        else if (key == "twist") params.twist = to_double(key, value);
        else if (key == "section_offset") params.section_offset = to_double(key, value);
        else if (key.rfind("tol_", 0) == 0) {
            const double v = positive_tolerance(key, to_double(key, value));
            touched_tol = true;
            if (key == "tol_idem") tol.idem = v;
            else if (key == "tol_lift") tol.lift = v;
            else if (key == "tol_comm") tol.comm = v;
            else if (key == "tol_orth") tol.orth = v;
            else if (key == "tol_residual") tol.residual = v;
            else if (key == "tol_sa") tol.sa = v;
            else fail(ErrorCode::config_error, "unknown tolerance key '" + key + "'");
        } else if (key == "scenario" || key == "out" || key == "csv" || key == "branch_sheet" || key == "parallel") {
            // consumed by run_cli
        } else {
            fail(ErrorCode::config_error, "unknown config key '" + key + "'");
        }
    }
    if (touched_tol) params.tol = tol;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Verify analytic idempotent lifts on the built-in scenarios", "idemlift"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "print the scenario ids");
    auto* run = app.add_subcommand("run", "run one scenario and write its report");
    std::string scenario, grid, out_path, csv_path, config_path;
    std::optional<double> tol_idem, tol_lift;
    std::optional<std::uint64_t> seed;
    int sheet = 0;
    bool serial = false;
    run->add_option("scenario", scenario, "scenario id (see `list`)");
    run->add_option("--grid", grid, "c,h,n or re,im,h,n");
    run->add_option("--tol-idem", tol_idem, "idempotency tolerance");
    run->add_option("--tol-lift", tol_lift, "lifting tolerance");
    run->add_option("--out", out_path, "JSON report path");
    run->add_option("--csv", csv_path, "per-lambda CSV path");
    run->add_option("--seed", seed, "seed for randomized parts");
    run->add_option("--config", config_path, "key = value config file");
    run->add_option("--sheet", sheet, "branch sheet of the square root, +1 or -1");
    run->add_flag("--serial", serial, "disable the parallel lambda sweep");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    if (list->parsed()) {
        for (const auto& id : scenario_ids()) out << id << "\n";
        return 0;
    }

    try {
        ScenarioParams params;
        std::map<std::string, std::string> config;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) fail(ErrorCode::config_error, "cannot read config file " + config_path);
            std::stringstream buf;
            buf << f.rdbuf();
            config = parse_config(buf.str());
            apply_config(config, params);
            if (scenario.empty() && config.count("scenario")) scenario = config["scenario"];
            if (out_path.empty() && config.count("out")) out_path = config["out"];
            if (csv_path.empty() && config.count("csv")) csv_path = config["csv"];
            if (sheet == 0 && config.count("branch_sheet")) sheet = to_int("branch_sheet", config["branch_sheet"]);
            if (config.count("parallel")) serial = serial || config["parallel"] == "false" || config["parallel"] == "0";
        }
        if (scenario.empty()) fail(ErrorCode::config_error, "no scenario given");
        if (!grid.empty()) params.grid = parse_grid(grid);
        if (seed) params.seed = *seed;
        if (tol_idem || tol_lift) {
            Tolerances tol = params.tol.value_or(Tolerances{});
            if (tol_idem) tol.idem = positive_tolerance("--tol-idem", *tol_idem);
            if (tol_lift) tol.lift = positive_tolerance("--tol-lift", *tol_lift);
            params.tol = tol;
        }
        if (sheet == 0) sheet = +1;
        if (sheet != 1 && sheet != -1) fail(ErrorCode::config_error, "--sheet must be +1 or -1");

        const Scenario s = build_scenario(scenario, params);
        LiftOptions options;
        options.branch_sheet = sheet;
        options.parallel = !serial;
        options.quadrature.parallel = !serial;
        const LiftReport report = run_verification(s, options);

        if (out_path.empty()) {
            const char* dir = std::getenv("IDEMLIFT_OUT_DIR");
            out_path = (std::filesystem::path(dir && *dir ? dir : ".") / (s.id + ".json")).string();
        }
        write_file(out_path, report.document.dump(2) + "\n");
        if (!csv_path.empty()) write_file(csv_path, report.csv);
        print_summary(report, out_path, out);
        return exit_status(report);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace idemlift
