#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "experiments.hpp"
#include "telecom/errors.hpp"

namespace {

using telecom::cli::Config;

struct CommonArgs {
    std::string config_path;
    long long seed = -1;
    long long replicates = -1;
    long long threads = -1;
    std::string out_dir;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "experiment config file");
    sub->add_option("--seed", args.seed, "override the config seed");
    sub->add_option("--replicates", args.replicates, "override the replicate count");
    sub->add_option("--threads", args.threads, "worker threads (0 = hardware)");
    sub->add_option("--out", args.out_dir, "output directory (default: results)");
}

int run_named(const std::string& name, const CommonArgs& args) {
    Config cfg = args.config_path.empty() ? Config{} : Config::parse_file(args.config_path);
    if (args.seed >= 0) cfg.set_number("seed", static_cast<double>(args.seed));
    if (args.replicates >= 0) {
        cfg.set_number("replicates", static_cast<double>(args.replicates));
    }
    if (args.threads >= 0) cfg.set_number("threads", static_cast<double>(args.threads));
    const std::string out_dir =
        !args.out_dir.empty() ? args.out_dir : cfg.string_or("out", "results");

    const auto start = std::chrono::steady_clock::now();
    telecom::cli::RunResult result = telecom::cli::run_experiment(name, cfg);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    const std::string csv = telecom::cli::write_outputs(result, cfg, out_dir, wall_ms);
    for (const std::string& w : result.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    std::cout << name << ": " << result.rows.size() << " row(s) -> " << csv << '\n';
    if (!result.passed) {
        std::cerr << "self-test checks failed; see " << csv << '\n';
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workload large-deviation experiments"};
    app.require_subcommand(1);

    const std::vector<std::string> experiments = {
        "limit-check", "ld-moderate",  "ld-intermediate", "ld-multisession",
        "ld-ultra",    "constants",    "measure-selftest"};

    std::map<std::string, CommonArgs> args_by_name;
    for (const std::string& name : experiments) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        add_common(sub, args_by_name[name]);
    }

    std::string plot_results, plot_out = "plot.csv";
    auto* plot = app.add_subcommand("plot-data", "convert a run summary to plot rows");
    plot->add_option("--results", plot_results, "run-summary JSON")->required();
    plot->add_option("--out", plot_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        for (const std::string& name : experiments) {
            if (app.got_subcommand(name)) {
                return run_named(name, args_by_name[name]);
            }
        }
        if (app.got_subcommand("plot-data")) {
            telecom::cli::emit_plot_data(plot_results, plot_out);
            std::cout << "plot-data -> " << plot_out << '\n';
            return 0;
        }
    } catch (const telecom::Error& e) {
        nlohmann::ordered_json err;
        err["error"]["code"] = e.code();
        err["error"]["message"] = e.what();
        std::cout << err.dump(2) << '\n';
        return 1;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"]["code"] = "internal";
        err["error"]["message"] = e.what();
        std::cout << err.dump(2) << '\n';
        return 1;
    }
    return 0;
}
