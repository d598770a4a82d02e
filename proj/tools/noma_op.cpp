// noma-op: outage probability of dual-hop AF NOMA with MRT/RAS.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "noma/cli.hpp"

namespace {

using namespace noma::cli;

struct Common {
    std::string config;
    std::string snr_db;
    std::string axis;
    std::string points;
    std::string outputs;
    std::string user = "all";
    std::string out;
    std::uint64_t trials = 0;
    std::uint64_t seed = 1;
    int lanes = 1;
    CLI::Option* trials_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* lanes_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c, bool sweep_flags)
{
    cmd->add_option("--config", c.config, "JSON configuration file");
    c.trials_opt = cmd->add_option("--trials", c.trials, "Monte Carlo trials per point (0 disables)");
    c.seed_opt = cmd->add_option("--seed", c.seed, "64-bit seed");
    c.lanes_opt = cmd->add_option("--lanes", c.lanes, "independent random streams (and threads)")->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out, "output directory (default: CSV to stdout)");
    if (sweep_flags) {
        cmd->add_option("--snr-db", c.snr_db, "start:step:stop or comma list, in dB");
        cmd->add_option("--user", c.user, "user index or 'all'");
        cmd->add_option("--axis", c.axis, "snr_db, d1 or epsilon");
        cmd->add_option("--points", c.points, "axis points, start:step:stop or comma list");
        cmd->add_option("--outputs", c.outputs, "comma list of closed,quadrature,bounds,floor,asymptotic,mc_exact,mc_upper,oma");
    }
}

SweepSpec build_spec(const Common& c, unsigned default_outputs, bool force_outputs, std::uint64_t default_trials)
{
    SweepSpec spec = c.config.empty() ? parse_config(nlohmann::json::object()) : load_config(c.config);
    if (force_outputs) {
        spec.outputs = default_outputs;
    }
    if (default_trials > 0 && spec.trials == 0) {
        spec.trials = default_trials;
    }
    if (!c.axis.empty()) {
        spec.axis = parse_axis(c.axis);
    }
    if (!c.points.empty()) {
        try {
            spec.points = parse_range(c.points);
        } catch (const ConfigError& e) {
            throw ConfigError("--points", e.what());
        }
    }
    if (!c.snr_db.empty()) {
        std::vector<double> v;
        try {
            v = parse_range(c.snr_db);
        } catch (const ConfigError& e) {
            throw ConfigError("--snr-db", e.what());
        }
        if (spec.axis == Axis::snr_db) {
            spec.points = v;
        } else if (v.size() == 1) {
            spec.snr_db = v.front();
        } else {
            throw ConfigError("--snr-db", "a single value is expected when the axis is " + axis_name(spec.axis));
        }
    }
    if (!c.outputs.empty()) {
        spec.outputs = parse_outputs(c.outputs);
    }
    if (c.trials_opt->count()) {
        spec.trials = c.trials;
    }
    if (c.seed_opt->count()) {
        spec.seed = c.seed;
    }
    if (c.lanes_opt->count()) {
        spec.lanes = c.lanes;
    }
    if (c.user != "all") {
        try {
            std::size_t used = 0;
            const int u = std::stoi(c.user, &used);
            if (used != c.user.size()) {
                throw std::invalid_argument(c.user);
            }
            spec.users = {u};
        } catch (const std::exception&) {
            throw ConfigError("--user", "expected a user index or 'all', got '" + c.user + "'");
        }
    }
    validate_sweep(spec);
    return spec;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& out_dir, const std::string& name)
{
    if (out_dir.empty()) {
        write_csv(std::cout, rows);
        std::cout.flush();
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const std::filesystem::path path = std::filesystem::path(out_dir) / (name + ".csv");
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("--out", "cannot write '" + path.string() + "'");
    }
    write_csv(f, rows);
    if (!f) {
        throw ConfigError("--out", "cannot write '" + path.string() + "'");
    }
    std::cerr << "wrote " << path.string() << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Outage probability of dual-hop AF NOMA with MRT/RAS over Nakagami-m fading"};
    app.require_subcommand(1);

    Common analytic_c, simulate_c, sweep_c;
    auto* analytic = app.add_subcommand("analytic", "closed form, quadrature, bounds, floors, asymptotics");
    add_common(analytic, analytic_c, true);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates (exact and upper-bound SINR)");
    add_common(simulate, simulate_c, true);
    auto* sweep = app.add_subcommand("sweep", "every output selected by the configuration");
    add_common(sweep, sweep_c, true);

    ValidationOptions vopts;
    auto* validate = app.add_subcommand("validate", "closed form vs quadrature vs Monte Carlo over the preset grid");
    validate->add_option("--trials", vopts.trials, "Monte Carlo trials per point (0 skips Monte Carlo)");
    validate->add_option("--seed", vopts.seed, "64-bit seed");
    validate->add_option("--lanes", vopts.lanes, "independent random streams")->check(CLI::PositiveNumber);
    validate->add_option("--perturb-closed", vopts.closed_perturbation, "relative perturbation of the closed form")
        ->group("");

    std::string figure_id;
    std::string figure_out = "figures";
    std::uint64_t figure_trials = 100000;
    std::uint64_t figure_seed = 1;
    int figure_lanes = 1;
    auto* figure = app.add_subcommand("figure", "render a figure preset as CSV + SVG");
    figure->add_option("id", figure_id, "fig2 .. fig7")->required();
    figure->add_option("--out", figure_out, "output directory");
    figure->add_option("--trials", figure_trials, "Monte Carlo trials per point (0 disables)");
    figure->add_option("--seed", figure_seed, "64-bit seed");
    figure->add_option("--lanes", figure_lanes, "independent random streams")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*analytic) {
            const SweepSpec spec = build_spec(analytic_c, kAnalyticOutputs, true, 0);
            SweepSpec s = spec;
            s.trials = 0;
            emit_csv(run_sweep(s), analytic_c.out, "analytic");
        } else if (*simulate) {
            const SweepSpec spec = build_spec(simulate_c, kMonteCarloOutputs | out_oma, true, 100000);
            emit_csv(run_sweep(spec), simulate_c.out, "simulate");
        } else if (*sweep) {
            const SweepSpec spec = build_spec(sweep_c, 0, false, 0);
            emit_csv(run_sweep(spec), sweep_c.out, "sweep");
        } else if (*validate) {
            return run_validation(vopts, std::cout);
        } else if (*figure) {
            const FigurePreset preset = figure_preset(figure_id);
            const FigureFiles files = emit_figure(preset, figure_out, figure_trials, figure_seed, figure_lanes);
            std::cerr << "wrote " << files.csv.string() << " and " << files.svg.string() << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
