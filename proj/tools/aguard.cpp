// Command-line front end: run scenarios, analyze logs, list presets, verify.
//
// Exit codes: 0 success, 1 other failure, 2 configuration error, 3 divergence.

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "aerobat_guard/metrics.hpp"
#include "aerobat_guard/pid.hpp"
#include "aerobat_guard/run_log.hpp"
#include "aerobat_guard/scenario.hpp"
#include "aerobat_guard/simulation.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kDiverged = 3;

std::vector<aguard::metrics::MetricsReport> analyze_files(const std::vector<std::string>& paths) {
    std::vector<aguard::metrics::MetricsReport> out;
    for (const auto& path : paths) {
        const aguard::RunLog log = aguard::read_log(path);
        if (log.rows.empty()) throw std::runtime_error(path + ": log has no rows");
        out.push_back(aguard::analyze_log(log, log.rows.front().setpoint, 100.0, path));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aerobat guard simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    std::optional<std::string> preset;
    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write its CSV log");
    run_cmd->add_option("scenario", scenario_path, "Scenario YAML file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--seed", seed, "Override sim.seed");
    run_cmd->add_option("--duration", duration, "Override sim.duration in seconds");
    run_cmd->add_option("--preset", preset, "Position gain preset")->check(CLI::IsMember({"test1", "test2", "test3", "test4", "test5"}));
    run_cmd->add_option("--out", out_path, "Log path (default <name>.csv)");

    std::vector<std::string> log_paths;
    std::string report_path;
    bool csv = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "RMS, stability and score of run logs (cm)");
    analyze_cmd->add_option("logs", log_paths, "CSV logs")->required()->check(CLI::ExistingFile);
    analyze_cmd->add_flag("--csv", csv, "Print CSV instead of a table");
    analyze_cmd->add_option("--out", report_path, "Also write the CSV report here");

    auto* presets_cmd = app.add_subcommand("presets", "Position gain presets");
    auto* presets_list = presets_cmd->add_subcommand("list", "Print the preset table");
    presets_cmd->require_subcommand(1);

    std::vector<std::string> verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
    verify_cmd->add_option("args", verify_args, "Arguments passed to the suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            aguard::Scenario s = aguard::load_scenario(scenario_path);
            if (seed) s.seed = *seed;
            if (duration) s.duration = *duration;
            if (preset) s.apply_preset(*preset);
            s.validate();
            if (out_path.empty()) out_path = s.name + ".csv";
            const aguard::RunLog log = aguard::run(s);
            aguard::write_log(out_path, log);
            const auto report = aguard::analyze_log(log, s.setpoint, 100.0, s.name);
            aguard::metrics::write_report_table(std::cout, std::vector{report});
            fmt::print("log: {} ({} rows, {} control steps)\n", out_path, log.rows.size(), log.control_steps);
            if (log.diverged) {
                fmt::print(stderr, "diverged: {}\n", log.halt_reason);
                return kDiverged;
            }
        } else if (*analyze_cmd) {
            const auto reports = analyze_files(log_paths);
            if (csv) aguard::metrics::write_report_csv(std::cout, reports);
            else aguard::metrics::write_report_table(std::cout, reports);
            if (!report_path.empty()) {
                std::ofstream out(report_path);
                if (!out) throw std::runtime_error("cannot write " + report_path);
                aguard::metrics::write_report_csv(out, reports);
            }
        } else if (*presets_list) {
            fmt::print("{:<6} {:>8} {:>7} {:>8} {:>8} {:>7} {:>8} {:>8} {:>7} {:>8}\n", "name", "x.kp", "x.ki", "x.kd",
                       "y.kp", "y.ki", "y.kd", "z.kp", "z.ki", "z.kd");
            for (const auto& p : aguard::control::kPositionPresets) {
                fmt::print("{:<6} {:>8.3f} {:>7.3f} {:>8.3f} {:>8.3f} {:>7.3f} {:>8.3f} {:>8.3f} {:>7.3f} {:>8.3f}\n",
                           p.name, p.x.kp, p.x.ki, p.x.kd, p.y.kp, p.y.ki, p.y.kd, p.z.kp, p.z.ki, p.z.kd);
            }
        } else if (*verify_cmd) {
            const char* env = std::getenv("AGUARD_ACCEPTANCE_BIN");
            std::string cmd = env ? env : AGUARD_ACCEPTANCE_BIN;
            for (const auto& a : verify_args) cmd += " '" + a + "'";
            const int status = std::system(cmd.c_str());
            return status == 0 ? 0 : 1;
        }
    } catch (const aguard::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
