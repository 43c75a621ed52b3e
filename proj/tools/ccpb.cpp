// ccpb: command-line front end for the CCPB library.
//
// Subcommands: solve, approx-error, regimes, screening, estimate channel,
// estimate electrode.  Output is CSV (17 significant digits, '#' metadata
// lines) or JSON; identical invocations produce byte-identical files.
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccpb/ccpb.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// "start:stop:points[:lin|log]" -> inclusive grid.
std::vector<double> parse_sweep(const std::string& name, const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() < 3 || parts.size() > 4)
        throw CLI::ValidationError(name, "expected start:stop:points[:lin|log]");
    double start = 0.0, stop = 0.0;
    long points = 0;
    try {
        start = std::stod(parts[0]);
        stop = std::stod(parts[1]);
        points = std::stol(parts[2]);
    } catch (const std::exception&) {
        throw CLI::ValidationError(name, "could not parse sweep numbers");
    }
    const std::string scale = parts.size() == 4 ? parts[3] : "lin";
    if (points < 2) throw CLI::ValidationError(name, "points must be >= 2");
    if (!(start < stop)) throw CLI::ValidationError(name, "start must be < stop");
    if (scale != "lin" && scale != "log")
        throw CLI::ValidationError(name, "scale must be lin or log");
    if (scale == "log" && !(start > 0.0))
        throw CLI::ValidationError(name, "log scale requires positive endpoints");

    std::vector<double> grid(points);
    for (long i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        grid[i] = scale == "log" ? start * std::pow(stop / start, t)
                                 : start + (stop - start) * t;
    }
    return grid;
}

void write_output(const std::string& out, const std::string& content) {
    if (out.empty() || out == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
}

// Key/value metadata block shared by the CSV and JSON writers.
struct Meta {
    std::vector<std::pair<std::string, std::string>> kv;
    void add(const std::string& k, const std::string& v) { kv.emplace_back(k, v); }
    void add(const std::string& k, double v) { kv.emplace_back(k, fmt17(v)); }
    void add(const std::string& k, long v) { kv.emplace_back(k, std::to_string(v)); }
};

std::string csv_header(const std::string& command, const Meta& meta) {
    std::string s = "# ccpb " + command + "\n";
    for (const auto& [k, v] : meta.kv) s += "# " + k + " = " + v + "\n";
    return s;
}

// One sweep row: column values, or missing (failed solve) with a reason.
struct Row {
    std::vector<double> cols;
    bool ok = true;
    std::string error;
};

// Run fn(i) for i in [0, n) on `jobs` threads; results land in caller-owned
// slots so output order never depends on scheduling.
template <class Fn>
void parallel_rows(long n, int jobs, Fn&& fn) {
    if (jobs < 1) jobs = 1;
    if (jobs > n) jobs = static_cast<int>(n);
    if (jobs <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int k = 0; k < jobs; ++k)
        pool.emplace_back([&] {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

std::string csv_table(const std::string& command, const Meta& meta,
                      const std::vector<std::string>& columns,
                      const std::vector<Row>& rows) {
    std::string s = csv_header(command, meta);
    for (std::size_t c = 0; c < columns.size(); ++c)
        s += (c ? "," : "") + columns[c];
    s += "\n";
    for (const auto& row : rows) {
        if (row.ok) {
            for (std::size_t c = 0; c < row.cols.size(); ++c)
                s += (c ? "," : "") + fmt17(row.cols[c]);
        } else {
            // Missing values: first column (the sweep parameter) is kept.
            s += fmt17(row.cols.at(0));
            for (std::size_t c = 1; c < columns.size(); ++c) s += ",";
        }
        s += "\n";
    }
    return s;
}

ordered_json json_table(const std::string& command, const Meta& meta,
                        const std::vector<std::string>& columns,
                        const std::vector<Row>& rows) {
    ordered_json j;
    j["command"] = command;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : meta.kv) params[k] = v;
    j["params"] = params;
    ordered_json table = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json r = ordered_json::object();
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (row.ok)
                r[columns[c]] = row.cols[c];
            else if (c == 0)
                r[columns[c]] = row.cols.at(0);
            else
                r[columns[c]] = nullptr;
        }
        if (!row.ok) r["error"] = row.error;
        table.push_back(std::move(r));
    }
    j["rows"] = std::move(table);
    return j;
}

void emit_table(const std::string& command, const Meta& meta,
                const std::vector<std::string>& columns,
                const std::vector<Row>& rows, const std::string& format,
                const std::string& out) {
    if (format == "json")
        write_output(out, json_table(command, meta, columns, rows).dump(2) + "\n");
    else
        write_output(out, csv_table(command, meta, columns, rows));
}

// ---------------------------------------------------------------- solve --

struct SolveOpts {
    double L = 0.0, V = 0.0, delta = 0.0, tol = 1e-10;
    int samples = 401;  // table rows on [0, L/2]; full profile has 2n-1
    std::string format = "csv", out;
};

void run_solve(const SolveOpts& o) {
    ccpb::ProblemParams params{o.L, o.V, o.delta};
    const int intervals = o.samples - 1;
    const ccpb::CCPBSolution sol =
        o.delta > 0.0 ? ccpb::solve_stern(params, o.tol, intervals)
                      : ccpb::solve_exact(params, o.tol, intervals);

    Meta meta;
    meta.add("L", o.L);
    meta.add("V", o.V);
    meta.add("delta", o.delta);
    meta.add("tol", o.tol);
    meta.add("samples", static_cast<long>(o.samples));
    meta.add("eps", sol.eps);
    meta.add("alpha", sol.alpha);
    meta.add("phi_x0", sol.phi_x0);
    meta.add("phi_boundary", sol.phi_boundary);
    meta.add("residual", sol.residual);
    meta.add("validity", static_cast<long>(1));

    // Full-domain profile: mirror the canonical half-table through the
    // odd symmetry, center row emitted once.
    const auto& tab = sol.samples;
    const double sgn = sol.sign();
    std::vector<Row> rows;
    rows.reserve(2 * tab.size() - 1);
    auto push = [&](double x, double phi) {
        const auto c = ccpb::concentrations(phi, sol.alpha);
        rows.push_back({{x, phi, c.p, c.n}, true, {}});
    };
    for (std::size_t i = tab.size(); i-- > 1;) push(-tab[i][1], -sgn * tab[i][0]);
    for (std::size_t i = 0; i < tab.size(); ++i) push(tab[i][1], sgn * tab[i][0]);

    emit_table("solve", meta, {"x", "phi", "p", "n"}, rows, o.format, o.out);
}

// --------------------------------------------------------- approx-error --

struct ApproxErrorOpts {
    std::string eps_sweep, L_sweep;
    double V = 0.0, tol = 1e-10;
    std::string variant = "refined";
    int jobs = 0;
    std::string format = "csv", out;
};

void run_approx_error(const ApproxErrorOpts& o) {
    const bool eps_mode = !o.eps_sweep.empty();
    if (eps_mode == !o.L_sweep.empty())
        throw CLI::ValidationError("approx-error",
                                   "exactly one of --eps-sweep / --L-sweep required");
    const auto variant = o.variant == "crude" ? ccpb::ApproxVariant::Crude
                                              : ccpb::ApproxVariant::Refined;

    Meta meta;
    meta.add("mode", std::string(eps_mode ? "eps" : "L"));
    meta.add("variant", o.variant);
    meta.add("sweep", eps_mode ? o.eps_sweep : o.L_sweep);
    if (!eps_mode) meta.add("V", o.V);
    meta.add("tol", o.tol);

    if (eps_mode) {
        const auto grid = parse_sweep("--eps-sweep", o.eps_sweep);
        std::vector<Row> rows(grid.size());
        parallel_rows(static_cast<long>(grid.size()), o.jobs, [&](long i) {
            const double e = grid[i];
            try {
                const double sup =
                    ccpb::approx_error_sup_I(ccpb::Eps{e}, variant);
                const double pred = variant == ccpb::ApproxVariant::Crude
                                        ? 2.0 * std::sqrt(e)
                                        : 2.0 * e;
                rows[i] = {{e, sup, pred,
                            ccpb::approx_valid(ccpb::Eps{e}) ? 1.0 : 0.0},
                           true,
                           {}};
            } catch (const std::exception& ex) {
                rows[i] = {{e}, false, ex.what()};
            }
        });
        emit_table("approx-error", meta,
                   {"eps", "sup_error", "predicted_error", "validity"}, rows,
                   o.format, o.out);
        return;
    }

    const auto grid = parse_sweep("--L-sweep", o.L_sweep);
    std::vector<Row> rows(grid.size());
    parallel_rows(static_cast<long>(grid.size()), o.jobs, [&](long i) {
        const double L = grid[i];
        try {
            if (o.V == 0.0) {
                rows[i] = {{L, 0.0, 0.0, 0.0, 1.0}, true, {}};
                return;
            }
            const auto sol = ccpb::solve_exact({L, std::abs(o.V), 0.0}, o.tol);
            const double sup = ccpb::approx_error_sup_x(o.V, L, o.tol);
            const double pred = ccpb::predicted_error(o.V, L);
            rows[i] = {{L, sup, pred, sol.residual,
                        ccpb::approx_valid(ccpb::Eps{sol.eps}) ? 1.0 : 0.0},
                       true,
                       {}};
        } catch (const std::exception& ex) {
            rows[i] = {{L}, false, ex.what()};
        }
    });
    emit_table("approx-error", meta,
               {"L", "sup_error", "predicted_error", "residual", "validity"},
               rows, o.format, o.out);
}

// --------------------------------------------------------------- regimes --

struct RegimesOpts {
    std::string V_sweep;
    double tol = 0.05, delta = 0.0, solver_tol = 1e-10;
    std::string criteria = "analytic";
    int jobs = 0;
    std::string format = "csv", out;
};

void run_regimes(const RegimesOpts& o) {
    const auto grid = parse_sweep("--V-sweep", o.V_sweep);
    Meta meta;
    meta.add("criteria", o.criteria);
    meta.add("tol", o.tol);
    meta.add("delta", o.delta);
    meta.add("sweep", o.V_sweep);

    std::vector<Row> rows(grid.size());
    if (o.criteria == "analytic") {
        const auto curves = ccpb::regime_boundaries(grid, o.tol);
        for (std::size_t i = 0; i < curves.size(); ++i)
            rows[i] = {{curves[i].V, curves[i].L_AB, curves[i].L_BC}, true, {}};
        emit_table("regimes", meta, {"V", "L_AB", "L_BC"}, rows, o.format, o.out);
        return;
    }

    meta.add("solver_tol", o.solver_tol);
    parallel_rows(static_cast<long>(grid.size()), o.jobs, [&](long i) {
        try {
            const auto b =
                ccpb::generalized_boundaries(grid[i], o.tol, o.delta, o.solver_tol);
            rows[i] = {{b.V, b.L_AB, b.L_BC}, true, {}};
        } catch (const std::exception& ex) {
            rows[i] = {{grid[i]}, false, ex.what()};
        }
    });
    emit_table("regimes", meta, {"V", "L_AB", "L_BC"}, rows, o.format, o.out);
}

// ------------------------------------------------------------- screening --

struct ScreeningOpts {
    double V = 0.0, tol = 1e-10;
    std::string L_sweep;
    int jobs = 0;
    std::string format = "csv", out;
};

void run_screening(const ScreeningOpts& o) {
    const auto grid = parse_sweep("--L-sweep", o.L_sweep);
    Meta meta;
    meta.add("V", o.V);
    meta.add("sweep", o.L_sweep);
    meta.add("tol", o.tol);

    std::vector<Row> rows(grid.size());
    parallel_rows(static_cast<long>(grid.size()), o.jobs, [&](long i) {
        const double L = grid[i];
        try {
            const auto sol = ccpb::solve_exact({L, o.V, 0.0}, o.tol);
            const auto scr = ccpb::screening_length(sol);
            const double inv_sqrt_at =
                1.0 / std::sqrt(ccpb::alpha_tilde(o.V, L));
            rows[i] = {{L, scr.lambda_s, scr.ratio_to_infinite, inv_sqrt_at,
                        sol.residual,
                        ccpb::approx_valid(ccpb::Eps{sol.eps}) ? 1.0 : 0.0},
                       true,
                       {}};
        } catch (const std::exception& ex) {
            rows[i] = {{L}, false, ex.what()};
        }
    });
    emit_table("screening", meta,
               {"L", "lambda_s", "ratio", "one_over_sqrt_alpha_tilde",
                "residual", "validity"},
               rows, o.format, o.out);
}

// -------------------------------------------------------------- estimate --

struct EstimateOpts {
    // channel geometry
    double r = 180.0, delta = 0.0, max_error = 0.01;
    // electrode geometry
    double phi = 0.0, porosity = 0.3, fraction = 0.0;
    bool phi_given = false;
    // physical conversions
    double concentration = 0.0, temperature = 298.0, epsilon_r = 78.5,
           voltage = 0.0;
    bool concentration_given = false, voltage_given = false;
    std::string format = "json", out;
};

void add_physical(ordered_json& results, const EstimateOpts& o) {
    ccpb::donnan::PhysicalConditions cond{
        o.concentration_given ? o.concentration : 0.1, o.temperature, o.epsilon_r,
        o.voltage};
    if (o.concentration_given) {
        results["debye_length_m"] = ccpb::donnan::debye_length(cond);
    }
    if (o.voltage_given) {
        results["nondim_voltage"] = ccpb::donnan::nondim_voltage(cond);
    }
}

void emit_estimate(const std::string& command, const ordered_json& inputs,
                   const ordered_json& results, const EstimateOpts& o) {
    ordered_json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["results"] = results;
    if (o.format == "json") {
        write_output(o.out, j.dump(2) + "\n");
        return;
    }
    // CSV: one header row of keys, one row of values.
    std::string head, vals;
    auto append = [&](const std::string& prefix, const ordered_json& obj) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!head.empty()) {
                head += ",";
                vals += ",";
            }
            head += prefix + it.key();
            if (it.value().is_number())
                vals += fmt17(it.value().get<double>());
            else
                vals += it.value().dump();
        }
    };
    append("", inputs);
    append("", results);
    write_output(o.out, "# ccpb " + command + "\n" + head + "\n" + vals + "\n");
}

void run_estimate_channel(const EstimateOpts& o) {
    ccpb::donnan::ChannelGeometry geom{o.delta, o.r};
    const auto alpha = ccpb::donnan::channel_alpha(geom);
    const double ratio = ccpb::donnan::channel_bath_ratio(o.r, o.max_error);

    ordered_json inputs;
    inputs["enrichment_r"] = o.r;
    inputs["volume_ratio_delta"] = o.delta;
    inputs["max_error"] = o.max_error;
    ordered_json results;
    results["alpha_exact"] = alpha.exact;
    results["alpha_linearized"] = alpha.linearized;
    results["bath_to_channel_ratio"] = ratio;
    add_physical(results, o);
    emit_estimate("estimate channel", inputs, results, o);
}

void run_estimate_electrode(const EstimateOpts& o) {
    double phi = o.phi;
    if (!o.phi_given) {
        if (!o.voltage_given)
            throw CLI::ValidationError("estimate electrode",
                                       "provide --phi or --voltage");
        phi = ccpb::donnan::nondim_voltage(
            {o.concentration_given ? o.concentration : 0.1, o.temperature,
             o.epsilon_r, o.voltage});
    }
    const double delta_err = o.delta > 0.0 ? o.delta : 0.01;
    const auto ratio = ccpb::donnan::electrode_bulk_ratio(phi, delta_err,
                                                          o.porosity);

    ordered_json inputs;
    inputs["phi_electrode"] = phi;
    inputs["delta_err"] = delta_err;
    inputs["porosity"] = o.porosity;
    ordered_json results;
    results["bulk_ratio_cosh_form"] = ratio.cosh_form;
    results["bulk_ratio_depletion_form"] = ratio.depletion_form;
    results["note"] =
        "cosh_form counts total adsorption, depletion_form only the coion "
        "deficit; they diverge at large phi and both are reported";
    if (o.fraction > 0.0) {
        inputs["volume_fraction_electrode"] = o.fraction;
        results["alpha"] = ccpb::donnan::electrode_alpha(
            {o.fraction, phi, o.porosity});
    }
    add_physical(results, o);
    emit_estimate("estimate electrode", inputs, results, o);
}

void add_format_out(CLI::App* cmd, std::string& format, std::string& out,
                    const char* default_format) {
    format = default_format;
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", out, "output path ('-' = stdout)");
}

void add_tol(CLI::App* cmd, double& tol) {
    cmd->add_option("--tol", tol, "solver tolerance")
        ->envname("CCPB_DEFAULT_TOL")
        ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "ccpb: charge-conserving Poisson-Boltzmann solver and analysis tools"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ccpb 1.0.0");
    const int jobs_default =
        std::max(1u, std::thread::hardware_concurrency());

    SolveOpts so;
    auto* solve = app.add_subcommand(
        "solve", "solve the two-electrode problem and write the profile");
    solve->add_option("--L", so.L, "domain length, Debye units")
        ->required()
        ->check(CLI::PositiveNumber);
    solve->add_option("--V", so.V, "applied half-voltage, thermal units")
        ->required();
    solve->add_option("--delta", so.delta, "Stern layer width")
        ->check(CLI::NonNegativeNumber);
    solve->add_option("--samples", so.samples,
                      "sample rows on the half-domain [0, L/2]")
        ->check(CLI::Range(16, 100000));
    add_tol(solve, so.tol);
    add_format_out(solve, so.format, so.out, "csv");
    solve->callback([&] { run_solve(so); });

    ApproxErrorOpts ao;
    auto* approx = app.add_subcommand(
        "approx-error", "sup-norm error of the asymptotic approximations");
    approx->add_option("--eps-sweep", ao.eps_sweep,
                       "eps sweep start:stop:points[:lin|log]");
    approx->add_option("--L-sweep", ao.L_sweep,
                       "L sweep start:stop:points[:lin|log]");
    approx->add_option("--V", ao.V, "applied half-voltage (L sweep)");
    approx->add_option("--variant", ao.variant, "crude or refined matching")
        ->check(CLI::IsMember({"crude", "refined"}));
    ao.jobs = jobs_default;
    approx->add_option("--jobs", ao.jobs, "worker threads")
        ->check(CLI::Range(1, 256));
    add_tol(approx, ao.tol);
    add_format_out(approx, ao.format, ao.out, "csv");
    approx->callback([&] { run_approx_error(ao); });

    RegimesOpts ro;
    auto* regimes =
        app.add_subcommand("regimes", "regime boundary curves L_AB(V), L_BC(V)");
    regimes->add_option("--V-sweep", ro.V_sweep,
                        "V sweep start:stop:points[:lin|log]")
        ->required();
    regimes->add_option("--tol", ro.tol, "classification tolerance")
        ->check(CLI::PositiveNumber);
    regimes->add_option("--criteria", ro.criteria, "analytic or generalized")
        ->check(CLI::IsMember({"analytic", "generalized"}));
    regimes->add_option("--delta", ro.delta, "Stern layer width (generalized)")
        ->check(CLI::NonNegativeNumber);
    regimes->add_option("--solver-tol", ro.solver_tol, "solver tolerance")
        ->envname("CCPB_DEFAULT_TOL")
        ->check(CLI::PositiveNumber);
    ro.jobs = jobs_default;
    regimes->add_option("--jobs", ro.jobs, "worker threads")
        ->check(CLI::Range(1, 256));
    add_format_out(regimes, ro.format, ro.out, "csv");
    regimes->callback([&] { run_regimes(ro); });

    ScreeningOpts sc;
    auto* screening = app.add_subcommand(
        "screening", "screening length and its finite-domain inflation");
    screening->add_option("--V", sc.V, "applied half-voltage")->required();
    screening->add_option("--L-sweep", sc.L_sweep,
                          "L sweep start:stop:points[:lin|log]")
        ->required();
    sc.jobs = jobs_default;
    screening->add_option("--jobs", sc.jobs, "worker threads")
        ->check(CLI::Range(1, 256));
    add_tol(screening, sc.tol);
    add_format_out(screening, sc.format, sc.out, "csv");
    screening->callback([&] { run_screening(sc); });

    EstimateOpts eo;
    auto* estimate = app.add_subcommand(
        "estimate", "Donnan-equilibrium depletion estimates");
    estimate->require_subcommand(1);

    auto* channel = estimate->add_subcommand(
        "channel", "ion channel connected to finite baths");
    channel->add_option("--r", eo.r, "counterion enrichment p_channel/c_bath")
        ->check(CLI::PositiveNumber);
    channel->add_option("--delta", eo.delta, "channel/bath volume ratio")
        ->check(CLI::NonNegativeNumber);
    channel->add_option("--max-error", eo.max_error,
                        "depletion budget for the ratio threshold")
        ->check(CLI::PositiveNumber);

    auto* electrode = estimate->add_subcommand(
        "electrode", "porous electrode pair at Donnan potential");
    electrode->add_option("--phi", eo.phi, "Donnan potential, thermal units")
        ->each([&](const std::string&) { eo.phi_given = true; });
    electrode->add_option("--delta", eo.delta, "depletion budget delta_err")
        ->check(CLI::PositiveNumber);
    electrode->add_option("--porosity", eo.porosity, "electrode porosity")
        ->check(CLI::Range(1e-9, 1.0));
    electrode->add_option("--fraction", eo.fraction,
                          "electrode volume fraction (enables alpha output)")
        ->check(CLI::NonNegativeNumber);

    for (auto* cmd : {channel, electrode}) {
        cmd->add_option("--concentration", eo.concentration, "bulk molarity, mol/L")
            ->each([&](const std::string&) { eo.concentration_given = true; });
        cmd->add_option("--temperature", eo.temperature, "temperature, K")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--epsilon-r", eo.epsilon_r, "relative permittivity")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--voltage", eo.voltage, "dimensional voltage, V")
            ->each([&](const std::string&) { eo.voltage_given = true; });
        add_format_out(cmd, eo.format, eo.out, "json");
    }
    channel->callback([&] { run_estimate_channel(eo); });
    electrode->callback([&] { run_estimate_electrode(eo); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
