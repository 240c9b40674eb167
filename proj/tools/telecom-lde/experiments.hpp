#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace telecom::cli {

inline constexpr const char* kVersion = "0.1.0";

struct ResultRow {
    std::string experiment;
    std::optional<double> t;
    std::optional<double> rho;
    std::optional<double> p_hat;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<double> theory;
    std::optional<double> ratio;
    std::string method;
    long long replicates = 0;
    std::uint64_t seed = 0;
};

struct SeriesPoint {
    double x = 0.0;
    double y = 0.0;
    std::optional<double> y_low;
    std::optional<double> y_high;
};

struct Series {
    std::string name;
    std::vector<SeriesPoint> points;
};

struct RunResult {
    std::string experiment;
    bool passed = true;  // meaningful for the self-test experiment
    std::vector<ResultRow> rows;
    std::vector<std::string> warnings;
    std::vector<Series> series;
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::array();
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

// Executes one named experiment. Throws telecom::Error subclasses on invalid
// configuration or numeric failure.
RunResult run_experiment(const std::string& name, const Config& cfg);

// Writes <out>/<experiment><label>.csv and .json; returns the CSV path.
std::string write_outputs(const RunResult& result, const Config& cfg,
                          const std::string& out_dir, double wall_ms);

// Converts a run-summary JSON into a long-form plot table (series,x,y,...).
void emit_plot_data(const std::string& results_json_path, const std::string& out_csv_path);

// RFC-4180-style CSV field quoting.
std::string csv_quote(const std::string& field);
// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace telecom::cli
