#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "config.hpp"
#include "experiments.hpp"
#include "telecom/errors.hpp"

using namespace telecom;
using namespace telecom::cli;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Strips the only field that varies between identical runs.
std::string without_wall_time(std::string text) {
    const auto pos = text.find("\"wall_time_ms\"");
    if (pos == std::string::npos) return text;
    const auto end = text.find('\n', pos);
    text.erase(pos, end - pos);
    return text;
}

fs::path temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("telecom-cli-" + tag);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parser: scalars, records, arrays, comments") {
    const char* text = R"(
# top comment
seed = 42
gamma = 1.5          # trailing comment
label = "demo-run"
flag = true
reward = { kind = "uniform", b = 1.0 }
duration = { kind = "pareto", gamma = 1.5, u_min = 2.0 }
t_grid = [100, 1000, 1e4]
check = ["stable", "prelimit"]
)";
    Config cfg = Config::parse_text(text);
    CHECK(cfg.number("seed") == 42.0);
    CHECK(cfg.number("gamma") == 1.5);
    CHECK(cfg.string_or("label", "") == "demo-run");
    CHECK(cfg.boolean_or("flag", false));
    CHECK(cfg.number_or("absent", 7.0) == 7.0);
    auto reward = cfg.reward_law("reward");
    CHECK(reward.kind() == RewardLaw::Kind::uniform);
    auto duration = cfg.duration_law("duration");
    CHECK(duration.u_min() == 2.0);
    auto grid = cfg.number_array("t_grid");
    REQUIRE(grid.size() == 3);
    CHECK(grid[2] == 1e4);
    auto phases = cfg.string_array_or("check", {});
    REQUIRE(phases.size() == 2);
    CHECK(phases[1] == "prelimit");
}

TEST_CASE("config parser: discrete law and error paths") {
    Config cfg = Config::parse_text(
        "reward = { kind = \"discrete\", points = [0.3, 0.7], weights = [1, 3] }\n");
    auto law = cfg.reward_law("reward");
    CHECK(law.kind() == RewardLaw::Kind::discrete);
    CHECK(law.ess_sup() == 0.7);

    CHECK_THROWS_AS(Config::parse_text("key 42\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_text("key = \"unterminated\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_text("key = 1.2.3\n"), ConfigError);
    Config bad = Config::parse_text("reward = { kind = \"bogus\" }\n");
    CHECK_THROWS_AS(bad.reward_law("reward"), ConfigError);
    CHECK_THROWS_AS(bad.number("reward"), ConfigError);
    CHECK_THROWS_AS(bad.at("missing"), ConfigError);
}

TEST_CASE("csv quoting and number formatting") {
    CHECK(csv_quote("plain") == "plain");
    CHECK(csv_quote("a,b") == "\"a,b\"");
    CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(format_double(0.5) == "0.5");
    const double v = 0.1 + 0.2;
    CHECK(std::stod(format_double(v)) == v);  // round trip
}

TEST_CASE("constants experiment produces the reference row") {
    Config cfg = Config::parse_text(
        "gamma = 1.5\nreward = { kind = \"uniform\", b = 1.0 }\nkappa_grid = [0.5]\n"
        "replicates = 1000\nseed = 3\n");
    RunResult r = run_experiment("constants", cfg);
    REQUIRE(r.rows.size() == 1);
    REQUIRE(r.rows[0].theory.has_value());
    CHECK(*r.rows[0].theory == doctest::Approx(1.027231).epsilon(1e-5));
    REQUIRE(r.rows[0].p_hat.has_value());
    CHECK(*r.rows[0].p_hat == doctest::Approx(1.027231).epsilon(1e-5));  // quadrature path
}

TEST_CASE("self-test experiment passes") {
    Config cfg = Config::parse_text("gamma = 1.5\nreward = { kind = \"uniform\", b = 1.0 }\n");
    RunResult r = run_experiment("measure-selftest", cfg);
    CHECK(r.passed);
    CHECK(r.rows.size() >= 5);
    for (const auto& row : r.rows) {
        REQUIRE(row.ratio.has_value());
        CHECK(*row.ratio <= 1.0);
    }
}

TEST_CASE("unknown experiment is a config error") {
    Config cfg;
    CHECK_THROWS_AS(run_experiment("ld-bogus", cfg), ConfigError);
}

TEST_CASE("plot data: empty results give a header-only table") {
    fs::path dir = temp_dir("plot-empty");
    fs::path json_path = dir / "empty.json";
    {
        std::ofstream js(json_path);
        js << R"({"experiment":"ld-moderate","rows":[],"series":{}})";
    }
    fs::path out = dir / "plot.csv";
    emit_plot_data(json_path.string(), out.string());
    CHECK(read_file(out) == "series,x,y,y_low,y_high\n");
    CHECK_THROWS_AS(emit_plot_data((dir / "missing.json").string(), out.string()),
                    ConfigError);
    fs::path broken = dir / "broken.json";
    {
        std::ofstream js(broken);
        js << "{not json";
    }
    CHECK_THROWS_AS(emit_plot_data(broken.string(), out.string()), ConfigError);
}

TEST_CASE("outputs are deterministic and machine readable") {
    Config cfg = Config::parse_text(
        "gamma = 1.5\nreward = { kind = \"uniform\", b = 1.0 }\n"
        "t_grid = [100]\nrho_rule = { kind = \"linear\", kappa = 0.5 }\n"
        "replicates = 5000\nseed = 11\n");
    fs::path dir_a = temp_dir("det-a");
    fs::path dir_b = temp_dir("det-b");
    RunResult r1 = run_experiment("ld-intermediate", cfg);
    RunResult r2 = run_experiment("ld-intermediate", cfg);
    std::string csv_a = write_outputs(r1, cfg, dir_a.string(), 1.0);
    std::string csv_b = write_outputs(r2, cfg, dir_b.string(), 2.0);
    CHECK(read_file(csv_a) == read_file(csv_b));
    const std::string ja = without_wall_time(read_file(dir_a / "ld-intermediate.json"));
    const std::string jb = without_wall_time(read_file(dir_b / "ld-intermediate.json"));
    CHECK(ja == jb);

    // Summary parses and contains the resolved config and diagnostics.
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(
        read_file(dir_a / "ld-intermediate.json"));
    CHECK(j["config"]["replicates"] == 5000);
    CHECK(j["rows"].size() == 1);
    CHECK(j["diagnostics"].size() == 1);
    CHECK(j["diagnostics"][0].contains("remainder_bound"));

    // Plot table from the summary.
    fs::path plot = dir_a / "plot.csv";
    emit_plot_data((dir_a / "ld-intermediate.json").string(), plot.string());
    const std::string plotted = read_file(plot);
    CHECK(plotted.find("p_hat_scaled") != std::string::npos);
    CHECK(plotted.find("theory") != std::string::npos);
}

#ifdef TELECOM_LDE_BIN
TEST_CASE("binary runs end to end with identical bytes") {
    fs::path dir = temp_dir("bin");
    fs::path conf = dir / "run.conf";
    {
        std::ofstream c(conf);
        c << "gamma = 1.5\nreward = { kind = \"uniform\", b = 1.0 }\n"
          << "t_grid = [100]\nrho_rule = { kind = \"linear\", kappa = 0.5 }\n"
          << "replicates = 4000\nseed = 5\n";
    }
    const std::string bin = TELECOM_LDE_BIN;
    auto run = [&](const std::string& out) {
        const std::string cmd = bin + " ld-intermediate --config " + conf.string() +
                                " --out " + out + " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    REQUIRE(run((dir / "a").string()) == 0);
    REQUIRE(run((dir / "b").string()) == 0);
    CHECK(read_file(dir / "a" / "ld-intermediate.csv") ==
          read_file(dir / "b" / "ld-intermediate.csv"));
    CHECK(without_wall_time(read_file(dir / "a" / "ld-intermediate.json")) ==
          without_wall_time(read_file(dir / "b" / "ld-intermediate.json")));

    // Invalid configuration: nonzero exit and a machine-readable record.
    const std::string bad_cmd = bin + " ld-moderate --config " + (dir / "none.conf").string() +
                                " > " + (dir / "err.json").string() + " 2>/dev/null";
    CHECK(std::system(bad_cmd.c_str()) != 0);
    nlohmann::ordered_json err = nlohmann::ordered_json::parse(read_file(dir / "err.json"));
    CHECK(err["error"]["code"] == "config");
}
#endif
