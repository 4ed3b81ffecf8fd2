// vsim - command-line front end for the voltstor library.
//
// Subcommands: solve, simulate, compare, regularize, synth.
// Exit codes: 0 success, 1 configuration/input error, 2 numerical error.
// Set VS_LOG=1 (or 2) for progress logging on stderr.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "vsim/config_io.hpp"
#include "vsim/csv.hpp"
#include "vsim/cycles.hpp"
#include "vsim/metrics.hpp"
#include "vsim/microgrid.hpp"
#include "vsim/regularization.hpp"
#include "vsim/storage.hpp"
#include "vsim/synth.hpp"
#include "vsim/vie.hpp"

#include <json.hpp>

namespace fs = std::filesystem;
using namespace vsim;

namespace {

int log_level() {
    const char* v = std::getenv("VS_LOG");
    return v ? std::atoi(v) : 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[vsim] " << msg << "\n";
}

io::OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return io::OutputFormat::csv;
    if (name == "json") return io::OutputFormat::json;
    throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

struct SolveArgs {
    std::string kernel_spec = "const:1.0";
    std::string rhs_path;
    std::string output = "solution.csv";
    std::string format = "csv";
    double alpha = 0.0;
    bool auto_alpha = false;
    double delta = 0.0;
    double h_override = 0.0;
};

int run_solve(const SolveArgs& args) {
    const auto kernel = io::parse_kernel_spec(args.kernel_spec);
    const auto rhs = io::load_timeseries_csv(args.rhs_path, io::kUnitPower);

    // The first sample is the baseline level; the continuous problem assumes
    // f(t0) = 0, so the baseline is absorbed into the first cell.
    SampledSeries f = rhs.series;
    f.values[0] = 0.0;
    if (args.h_override > 0.0) f.grid.h = args.h_override;

    double alpha = args.alpha;
    if (args.auto_alpha) {
        if (!(args.delta > 0.0)) {
            throw ConfigError("--auto-alpha needs a positive --delta noise level");
        }
        alpha = select_alpha_discrepancy(kernel, f, args.delta);
        log_info("discrepancy principle selected alpha = " + std::to_string(alpha));
    }

    const Solution sol =
        alpha > 0.0 ? solve_vie_lavrentiev(kernel, f, alpha) : solve_vie_first_kind(kernel, f);

    io::WriteMeta meta;
    meta.start_epoch_s = rhs.start_epoch_s;
    io::write_results(sol, args.output, parse_format(args.format), meta);
    std::cout << "solved " << sol.x.size() << " nodes, residual_l2 = " << sol.residual
              << (alpha > 0.0 ? " (alpha = " + std::to_string(alpha) + ")" : "") << "\n";
    return 0;
}

struct SimulateArgs {
    std::vector<std::string> configs;
    std::string pv_path;
    std::string load_path;
    std::string model_override;
    std::string kernel_spec;
    std::string output = "simulation.csv";
    std::string format = "csv";
    int jobs = 1;
};

nlohmann::ordered_json summary_json(const SimulationResult& res, const EnergySummary& summary,
                                    const MicrogridConfig& cfg, std::int64_t start_epoch) {
    nlohmann::ordered_json doc;
    doc["schema"] = "vs-1";
    doc["kind"] = "summary";
    doc["totals"] = {{"battery_in_kwh", summary.battery_in_kwh},
                     {"pv_to_batt_kwh", summary.pv_to_batt_kwh},
                     {"dg_to_batt_kwh", summary.dg_to_batt_kwh},
                     {"battery_out_kwh", summary.battery_out_kwh},
                     {"diesel_kwh", summary.diesel_kwh},
                     {"pv_used_kwh", summary.pv_used_kwh},
                     {"curtailed_kwh", summary.curtailed_kwh},
                     {"deficit_kwh", summary.deficit_kwh}};

    const auto cal = calendar_from_epoch(start_epoch, res.soc.grid.h, res.soc.size());
    try {
        doc["monthly_soc_avg_kwh"] = monthly_averages(res.soc, cal);
    } catch (const ConfigError&) {
        // shorter-than-a-year runs simply omit the monthly table
    }

    const auto cycles = count_cycles(res.soc, cfg.battery);
    doc["cycles"] = {{"equivalent_full_cycles", cycles.equivalent_full_cycles},
                     {"half_cycles", cycles.half_cycles},
                     {"mean_depth_of_discharge", cycles.mean_depth_of_discharge}};
    const double duration_h = res.soc.grid.h * static_cast<double>(res.soc.size());
    if (cfg.battery.rated_cycles && cycles.equivalent_full_cycles > 0.0 && duration_h > 0.0) {
        const double per_year = cycles.equivalent_full_cycles * 8760.0 / duration_h;
        doc["cycles"]["per_year"] = per_year;
        doc["lifetime_years"] = estimate_lifetime_years(per_year, cfg.battery);
    }
    return doc;
}

int run_simulate(const SimulateArgs& args) {
    const auto pv = io::load_timeseries_csv(args.pv_path, io::kUnitPower);
    const auto load = io::load_timeseries_csv(args.load_path, io::kUnitPower);
    if (pv.series.size() == 0 || load.series.size() == 0) {
        throw ConfigError("zero-length input series");
    }

    std::optional<PiecewiseKernel> kernel;
    if (!args.kernel_spec.empty()) kernel = io::parse_kernel_spec(args.kernel_spec);

    const bool multi = args.configs.size() > 1;
    if (multi && !fs::is_directory(args.output)) {
        throw ConfigError("with multiple configs, --output must be an existing directory");
    }

    std::atomic<int> failures{0};
    auto run_one = [&](const std::string& config_path) {
        try {
            MicrogridConfig cfg = io::load_microgrid_config(config_path);
            if (args.model_override == "linear") cfg.model_kind = ModelKind::linear;
            if (args.model_override == "volterra") cfg.model_kind = ModelKind::volterra;

            log_info("simulating " + config_path + " over " +
                     std::to_string(pv.series.size()) + " steps");
            const auto res = simulate(cfg, pv.series, load.series,
                                      kernel ? &kernel.value() : nullptr);

            std::string out = args.output;
            if (multi) {
                const std::string stem = fs::path(config_path).stem().string();
                out = (fs::path(args.output) / (stem + "." + args.format)).string();
            }
            io::WriteMeta meta;
            meta.start_epoch_s = pv.start_epoch_s;
            meta.config_hash = io::file_hash_hex(config_path);
            io::write_results(res, out, parse_format(args.format), meta);

            const auto summary = annual_energy_summary(res);
            const auto doc = summary_json(res, summary, cfg, pv.start_epoch_s);
            std::ofstream sumfile(out + ".summary.json");
            if (!sumfile) throw IoError(out + ".summary.json", "cannot open for writing");
            sumfile << doc.dump(2) << "\n";

            std::cout << out << ": battery_in " << summary.battery_in_kwh << " kWh (pv "
                      << summary.pv_to_batt_kwh << " kWh, dg " << summary.dg_to_batt_kwh
                      << " kWh), deficit " << summary.deficit_kwh << " kWh\n";
        } catch (const std::exception& e) {
            std::cerr << "error: " << config_path << ": " << e.what() << "\n";
            ++failures;
        }
    };

    if (args.jobs <= 1 || args.configs.size() == 1) {
        for (const auto& c : args.configs) run_one(c);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        const int n_threads = std::min<int>(args.jobs, static_cast<int>(args.configs.size()));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < args.configs.size(); i = next++) {
                    run_one(args.configs[i]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return failures == 0 ? 0 : 1;
}

struct CompareArgs {
    std::string a_path;
    std::string b_path;
    std::string column = "soc_kwh";
    std::string unit = "kw";
    std::string output;
};

SampledSeries load_column(const std::string& path, const CompareArgs& args) {
    std::ifstream probe(path);
    std::string header;
    std::getline(probe, header);
    probe.close();
    if (header.rfind("timestamp,soc_kwh", 0) == 0) {
        const auto sim = io::read_simulation_csv(path);
        if (args.column == "soc_kwh") return sim.soc;
        if (args.column == "batt_kw") return sim.battery_power;
        if (args.column == "diesel_kw") return sim.diesel_power;
        if (args.column == "pv_kw") return sim.pv_used;
        if (args.column == "curtailed_kw") return sim.curtailed;
        if (args.column == "deficit_kw") return sim.deficit;
        throw ConfigError("unknown column '" + args.column + "'");
    }
    return io::load_timeseries_csv(path, args.unit).series;
}

int run_compare(const CompareArgs& args) {
    const auto a = load_column(args.a_path, args);
    const auto b = load_column(args.b_path, args);
    const auto metrics = compare_models(a, b);
    std::cout << "n        " << metrics.n_points << "\n"
              << "rmse     " << metrics.rmse << "\n"
              << "mae      " << metrics.mae << "\n"
              << "mape     " << metrics.mape_pct << " %"
              << (metrics.skipped_zero_denominator
                      ? " (skipped " + std::to_string(metrics.skipped_zero_denominator) +
                            " zero-reference points)"
                      : "")
              << "\n";
    if (!args.output.empty()) {
        io::write_results(metrics, args.output, io::OutputFormat::json);
    }
    return 0;
}

struct RegularizeArgs {
    std::string rhs_path;
    std::string kernel_spec = "const:0.92";
    double delta = 0.01;
    std::uint64_t seed = 1;
    std::string output = "regularization.json";
    double h_override = 0.0;
};

int run_regularize(const RegularizeArgs& args) {
    const auto kernel = io::parse_kernel_spec(args.kernel_spec);
    const auto rhs = io::load_timeseries_csv(args.rhs_path, io::kUnitPower);
    SampledSeries clean = rhs.series;
    clean.values[0] = 0.0;
    if (args.h_override > 0.0) clean.grid.h = args.h_override;

    const Solution exact = solve_vie_first_kind(kernel, clean);

    SampledSeries noisy = inject_noise(clean, args.delta, args.seed);
    noisy.values[0] = 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < clean.size(); ++k) {
        const double d = noisy.values[k] - clean.values[k];
        acc += d * d;
    }
    const double delta_l2 = std::sqrt(clean.grid.h * acc);

    const Solution unreg = solve_vie_first_kind(kernel, noisy);
    AlphaSearchOpts search;
    const double alpha = args.delta > 0.0 ? select_alpha_discrepancy(kernel, noisy, delta_l2, search)
                                          : 0.0;
    const Solution reg = alpha > 0.0 ? solve_vie_lavrentiev(kernel, noisy, alpha) : unreg;

    const auto m_unreg = compare_models(unreg.x, exact.x);
    const auto m_reg = compare_models(reg.x, exact.x);

    // Mirrors the errors-analysis table: regularised column first.
    std::cout << "          reg (alpha=" << alpha << ")   unregularised\n";
    std::cout << "rmse      " << m_reg.rmse << "   " << m_unreg.rmse << "\n";
    std::cout << "mae       " << m_reg.mae << "   " << m_unreg.mae << "\n";
    std::cout << "mape      " << m_reg.mape_pct << " %   " << m_unreg.mape_pct << " %\n";

    nlohmann::ordered_json doc;
    doc["schema"] = "vs-1";
    doc["kind"] = "regularization_report";
    doc["delta_frac"] = args.delta;
    doc["delta_l2"] = delta_l2;
    doc["seed"] = args.seed;
    doc["alpha"] = alpha;
    doc["alpha_bracket_scaled"] = {search.alpha_lo, search.alpha_hi};
    doc["residual_clean"] = exact.residual;
    doc["residual_noisy_unregularised"] = unreg.residual;
    doc["residual_noisy_regularised"] = reg.residual;
    auto metrics_block = [](const MetricsReport& m) {
        return nlohmann::ordered_json{{"rmse", m.rmse},
                                      {"mae", m.mae},
                                      {"mape_pct", m.mape_pct},
                                      {"n_points", m.n_points},
                                      {"skipped_zero_denominator", m.skipped_zero_denominator}};
    };
    doc["noisy_unregularised_vs_clean"] = metrics_block(m_unreg);
    doc["noisy_regularised_vs_clean"] = metrics_block(m_reg);

    std::ofstream out(args.output);
    if (!out) throw IoError(args.output, "cannot open for writing");
    out << doc.dump(2) << "\n";
    return 0;
}

struct SynthArgs {
    std::string kind = "pv";
    double peak = 75.0;
    double seasonal = 0.3;
    double noise = 0.0;
    std::uint64_t seed = 0;
    int days = 365;
    std::string start = "2025-01-01T00:00:00Z";
    std::string output = "profile.csv";
};

int run_synth(const SynthArgs& args) {
    SynthProfileParams params;
    params.daily_peak_kw = args.peak;
    params.seasonal_amplitude = args.seasonal;
    params.noise_frac = args.noise;
    params.seed = args.seed;
    params.days = args.days;
    const SampledSeries series =
        args.kind == "pv" ? synth_pv_profile(params) : synth_load_profile(params);
    io::write_series_csv(series, args.kind + "_kw", args.output, io::parse_iso8601(args.start));
    std::cout << "wrote " << series.size() << " hourly samples to " << args.output << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"voltstor: Volterra-model battery storage solver and microgrid simulator"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a first-kind Volterra equation");
    solve_cmd->add_option("--kernel", solve_args.kernel_spec,
                          "Kernel spec: const:<value> or a kernel JSON file");
    solve_cmd->add_option("--rhs", solve_args.rhs_path, "Right-hand-side series CSV (kW)")
        ->required()
        ->check(CLI::ExistingFile);
    solve_cmd->add_option("--alpha", solve_args.alpha, "Lavrentiev regularisation parameter");
    solve_cmd->add_flag("--auto-alpha", solve_args.auto_alpha,
                        "Pick alpha by the discrepancy principle (needs --delta)");
    solve_cmd->add_option("--delta", solve_args.delta, "Noise level for --auto-alpha (L2 norm)");
    solve_cmd->add_option("--step", solve_args.h_override,
                          "Reinterpret the grid step width h (hours); for step-size/noise "
                          "coordination experiments");
    solve_cmd->add_option("-o,--output", solve_args.output, "Output path");
    solve_cmd->add_option("--format", solve_args.format, "csv or json");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Replay PV/load series through dispatch");
    sim_cmd->add_option("--config", sim_args.configs, "Microgrid config JSON (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    sim_cmd->add_option("--pv", sim_args.pv_path, "PV series CSV (kW)")
        ->required()
        ->check(CLI::ExistingFile);
    sim_cmd->add_option("--load", sim_args.load_path, "Load series CSV (kW)")
        ->required()
        ->check(CLI::ExistingFile);
    sim_cmd->add_option("--model", sim_args.model_override, "Override model: linear | volterra")
        ->check(CLI::IsMember({"", "linear", "volterra"}));
    sim_cmd->add_option("--kernel", sim_args.kernel_spec,
                        "Efficiency-memory kernel for the volterra model");
    sim_cmd->add_option("-o,--output", sim_args.output, "Output path (directory when multi-config)");
    sim_cmd->add_option("--format", sim_args.format, "csv or json");
    sim_cmd->add_option("--jobs", sim_args.jobs, "Parallel workers across config files")
        ->check(CLI::PositiveNumber);

    CompareArgs cmp_args;
    auto* cmp_cmd = app.add_subcommand("compare", "Metrics between two result/series files");
    cmp_cmd->add_option("a", cmp_args.a_path, "Candidate file")->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("b", cmp_args.b_path, "Reference file")->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("--column", cmp_args.column, "Column of simulation CSVs to compare");
    cmp_cmd->add_option("--unit", cmp_args.unit, "Unit tag for plain series files");
    cmp_cmd->add_option("-o,--output", cmp_args.output, "Optional metrics JSON output");

    RegularizeArgs reg_args;
    auto* reg_cmd =
        app.add_subcommand("regularize", "Clean vs noisy vs discrepancy-regularised solves");
    reg_cmd->add_option("--rhs", reg_args.rhs_path, "Clean right-hand-side series CSV (kW)")
        ->required()
        ->check(CLI::ExistingFile);
    reg_cmd->add_option("--kernel", reg_args.kernel_spec, "Kernel spec (default const:0.92)");
    reg_cmd->add_option("--delta", reg_args.delta, "Noise fraction of sup|f|");
    reg_cmd->add_option("--seed", reg_args.seed, "Noise seed");
    reg_cmd->add_option("--step", reg_args.h_override, "Reinterpret the grid step width h (hours)");
    reg_cmd->add_option("-o,--output", reg_args.output, "Report JSON path");

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic PV or load profile");
    synth_cmd->add_option("--kind", synth_args.kind, "pv or load")
        ->check(CLI::IsMember({"pv", "load"}));
    synth_cmd->add_option("--peak", synth_args.peak, "Daily peak (kW)");
    synth_cmd->add_option("--seasonal", synth_args.seasonal, "Seasonal amplitude fraction");
    synth_cmd->add_option("--noise", synth_args.noise, "Noise fraction");
    synth_cmd->add_option("--seed", synth_args.seed, "Noise seed");
    synth_cmd->add_option("--days", synth_args.days, "Number of days");
    synth_cmd->add_option("--start", synth_args.start, "Start timestamp (ISO-8601 UTC)");
    synth_cmd->add_option("-o,--output", synth_args.output, "Output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return 1;
    }

    try {
        if (*solve_cmd) return run_solve(solve_args);
        if (*sim_cmd) return run_simulate(sim_args);
        if (*cmp_cmd) return run_compare(cmp_args);
        if (*reg_cmd) return run_regularize(reg_args);
        if (*synth_cmd) return run_synth(synth_args);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
