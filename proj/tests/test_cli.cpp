#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "vsim/csv.hpp"
#include "vsim/synth.hpp"

using namespace vsim;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

/// Runs the CLI with stdout+stderr captured.
CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(VSIM_CLI_PATH) + " " + args + " 2>&1";
    CliResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 512> buf{};
    while (fgets(buf.data(), buf.size(), pipe)) result.output += buf.data();
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("vsim_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_ramp_csv(const std::string& path, std::size_t hours) {
    SampledSeries f = SampledSeries::zeros(Grid{0.0, 1.0, hours});
    for (std::size_t k = 0; k < hours; ++k) f.values[k] = static_cast<double>(k);
    io::write_series_csv(f, "value_kw", path, io::parse_iso8601("2025-01-01T00:00:00Z"));
}

void write_reference_config(const std::string& path) {
    std::ofstream out(path);
    out << R"({
  "pv_rating_kw": 75, "inverter_solar_kw": 75, "inverter_batt_kw": 72,
  "diesel_units": 2, "diesel_unit_kw": 100,
  "battery": { "capacity_kwh": 384, "soc_min_frac": 0.2, "soc_max_frac": 1.0,
               "v_max_kw": 72, "eta": 0.8, "rated_cycles": 3000,
               "initial_soc_frac": 0.5 },
  "diesel_on_soc_frac": 0.2, "diesel_off_soc_frac": 0.8,
  "model": "linear"
})";
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("cli: --help exits 0, bad flags exit 1") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("solve --help").exit_code == 0);
    CHECK(run_cli("--definitely-not-a-flag").exit_code == 1);
    CHECK(run_cli("").exit_code == 1); // a subcommand is required
}

TEST_CASE("cli: solve recovers x == 1 from a ramp") {
    TempDir dir;
    const auto rhs = dir.file("ramp.csv");
    write_ramp_csv(rhs, 25);
    const auto out = dir.file("x.csv");

    const auto res = run_cli("solve --kernel const:1.0 --rhs " + rhs + " -o " + out);
    CHECK(res.exit_code == 0);

    const auto sol = io::load_timeseries_csv(out, io::kUnitRamp);
    REQUIRE(sol.series.size() == 24);
    for (double v : sol.series.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cli: lavrentiev path via --alpha") {
    TempDir dir;
    const auto rhs = dir.file("ramp.csv");
    write_ramp_csv(rhs, 25);
    const auto out = dir.file("x.json");

    const auto res =
        run_cli("solve --kernel const:0.92 --alpha 0.422 --rhs " + rhs + " -o " + out +
                " --format json");
    CHECK(res.exit_code == 0);
    const std::string text = read_text(out);
    CHECK(text.find("\"kind\": \"solution\"") != std::string::npos);
    CHECK(text.find("\"residual_l2\"") != std::string::npos);
}

TEST_CASE("cli: missing rhs file exits 1 and writes nothing") {
    TempDir dir;
    const auto out = dir.file("never.csv");
    const auto res = run_cli("solve --rhs " + dir.file("absent.csv") + " -o " + out);
    CHECK(res.exit_code == 1);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("cli: degenerate inputs and broken configs exit 1") {
    TempDir dir;
    const auto one_row = dir.file("one.csv");
    std::ofstream(one_row) << "timestamp,value_kw\n2025-01-01T00:00:00Z,1.0\n";
    CHECK(run_cli("solve --rhs " + one_row).exit_code == 1);

    const auto cfg = dir.file("bad.json");
    std::ofstream(cfg) << R"({"battery": {"capacity_kwh": -5}, "typo_key": 1})";
    const auto pv = dir.file("pv.csv");
    write_ramp_csv(pv, 5);
    CHECK(run_cli("simulate --config " + cfg + " --pv " + pv + " --load " + pv).exit_code == 1);
}

TEST_CASE("cli: simulate reference config end to end") {
    TempDir dir;
    const auto cfg = dir.file("grid.json");
    write_reference_config(cfg);

    const auto pv = dir.file("pv.csv");
    const auto load = dir.file("load.csv");
    CHECK(run_cli("synth --kind pv --peak 75 --days 10 --seasonal 0.2 --seed 3 -o " + pv)
              .exit_code == 0);
    CHECK(run_cli("synth --kind load --peak 40 --days 10 --seasonal 0.2 --noise 0.05 --seed 4 -o " +
                  load)
              .exit_code == 0);

    const auto out_lin = dir.file("lin.csv");
    const auto out_vol = dir.file("vol.csv");
    CHECK(run_cli("simulate --config " + cfg + " --pv " + pv + " --load " + load + " -o " +
                  out_lin + " --model linear")
              .exit_code == 0);
    CHECK(run_cli("simulate --config " + cfg + " --pv " + pv + " --load " + load + " -o " +
                  out_vol + " --model volterra")
              .exit_code == 0);
    CHECK(fs::exists(out_lin + ".summary.json"));

    // The two result files feed compare; near-identical trajectories.
    const auto cmp = run_cli("compare " + out_vol + " " + out_lin);
    CHECK(cmp.exit_code == 0);
    CHECK(cmp.output.find("mape") != std::string::npos);

    // Inputs are never mutated.
    const std::string before = read_text(pv);
    CHECK(run_cli("compare " + out_lin + " " + out_lin).exit_code == 0);
    CHECK(read_text(pv) == before);
}

TEST_CASE("cli: compare identical files gives zero metrics") {
    TempDir dir;
    const auto a = dir.file("a.csv");
    write_ramp_csv(a, 10);
    const auto out = dir.file("m.json");
    const auto res = run_cli("compare " + a + " " + a + " --unit kw -o " + out);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("rmse     0") != std::string::npos);
    CHECK(read_text(out).find("\"rmse\": 0.0") != std::string::npos);
}

TEST_CASE("cli: compare mismatched lengths exits 1") {
    TempDir dir;
    const auto a = dir.file("a.csv");
    const auto b = dir.file("b.csv");
    write_ramp_csv(a, 10);
    write_ramp_csv(b, 12);
    CHECK(run_cli("compare " + a + " " + b + " --unit kw").exit_code == 1);
}

TEST_CASE("cli: regularize clean data collapses to one solution") {
    TempDir dir;
    const auto rhs = dir.file("ramp.csv");
    write_ramp_csv(rhs, 40);
    const auto out = dir.file("reg.json");
    const auto res = run_cli("regularize --rhs " + rhs + " --delta 0 --seed 5 -o " + out);
    CHECK(res.exit_code == 0);
    const std::string text = read_text(out);
    CHECK(text.find("\"kind\": \"regularization_report\"") != std::string::npos);
    // delta = 0: unregularised and regularised agree with the clean solve
    CHECK(text.find("\"mape_pct\": 0.0") != std::string::npos);
}

TEST_CASE("cli: regularize beats the raw solve on a stiff fine-grid problem") {
    TempDir dir;
    // Minute-spaced ramp: differencing amplifies the noise by 1/h = 60.
    SampledSeries f = SampledSeries::zeros(Grid{0.0, 1.0 / 60.0, 1001});
    for (std::size_t k = 0; k < f.size(); ++k) f.values[k] = f.grid.node(k);
    const auto rhs = dir.file("fine_ramp.csv");
    io::write_series_csv(f, "value_kw", rhs, io::parse_iso8601("2025-01-01T00:00:00Z"));

    const auto out = dir.file("reg.json");
    const auto res =
        run_cli("regularize --rhs " + rhs + " --kernel const:1.0 --delta 0.01 --seed 7 -o " + out);
    CHECK(res.exit_code == 0);

    std::ifstream in(out);
    nlohmann::json doc;
    in >> doc;
    const double mape_reg = doc["noisy_regularised_vs_clean"]["mape_pct"].get<double>();
    const double mape_unreg = doc["noisy_unregularised_vs_clean"]["mape_pct"].get<double>();
    CHECK(mape_reg < mape_unreg);
    // The selected alpha sits inside the scaled search bracket and meets the
    // discrepancy target within 10%.
    const double alpha = doc["alpha"].get<double>();
    const double scale = (1.0 / 60.0) * 1.0;
    CHECK(alpha >= doc["alpha_bracket_scaled"][0].get<double>() * scale);
    CHECK(alpha <= doc["alpha_bracket_scaled"][1].get<double>() * scale);
    const double delta_l2 = doc["delta_l2"].get<double>();
    const double resid = doc["residual_noisy_regularised"].get<double>();
    CHECK(std::abs(resid - delta_l2) <= 0.1 * delta_l2);
}

TEST_CASE("cli: numerical failure exits 2") {
    TempDir dir;
    const auto rhs = dir.file("ramp.csv");
    write_ramp_csv(rhs, 10);
    // A zero kernel has a singular diagonal at the very first node.
    const auto res = run_cli("solve --kernel const:0.0 --rhs " + rhs);
    CHECK(res.exit_code == 2);
}

TEST_CASE("cli: multi-config simulate with --jobs writes one result per config") {
    TempDir dir;
    const auto cfg_a = dir.file("grid_a.json");
    const auto cfg_b = dir.file("grid_b.json");
    write_reference_config(cfg_a);
    write_reference_config(cfg_b);

    const auto pv = dir.file("pv.csv");
    const auto load = dir.file("load.csv");
    REQUIRE(run_cli("synth --kind pv --days 3 --seed 1 -o " + pv).exit_code == 0);
    REQUIRE(run_cli("synth --kind load --peak 30 --days 3 --seed 2 -o " + load).exit_code == 0);

    const auto out_dir = dir.file("runs");
    fs::create_directories(out_dir);
    const auto res = run_cli("simulate --config " + cfg_a + " --config " + cfg_b + " --pv " + pv +
                             " --load " + load + " --jobs 2 -o " + out_dir);
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(out_dir + "/grid_a.csv"));
    CHECK(fs::exists(out_dir + "/grid_b.csv"));
}

TEST_CASE("cli: regularize with noise reports alpha inside the bracket") {
    TempDir dir;
    const auto rhs = dir.file("ramp.csv");
    write_ramp_csv(rhs, 60);
    const auto out = dir.file("reg.json");
    const auto res = run_cli("regularize --rhs " + rhs + " --delta 0.01 --seed 7 -o " + out);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("unregularised") != std::string::npos);

    const std::string text = read_text(out);
    CHECK(text.find("\"alpha\"") != std::string::npos);
    CHECK(text.find("\"residual_noisy_regularised\"") != std::string::npos);
}
