// Copyright 2026 The pulseq Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line front end: pulseq <simulate|compile|sweep|magnus|report>
//   --config <path> [--out <dir>] [--jobs <k>] [--dt <step>]
//
// Exit status is 0 on success, 2 for configuration or argument problems
// and 3 when the numerics fail (blow-up or quadrature non-convergence).

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pulseq/analysis.hpp"
#include "pulseq/config.hpp"
#include "pulseq/experiments.hpp"
#include "pulseq/integrator.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// PULSEQ_SEED_LOG takes a spdlog level name (trace, debug, info, warn,
// error, critical, off). Unset means warn.
void configure_logging() {
    spdlog::set_default_logger(spdlog::stderr_color_mt("pulseq"));
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char *env = std::getenv("PULSEQ_SEED_LOG")) {
        const auto level = spdlog::level::from_str(env);
        if (level == spdlog::level::off && std::string(env) != "off") {
            spdlog::warn("PULSEQ_SEED_LOG: unknown level '{}', keeping warn", env);
        } else {
            spdlog::set_level(level);
        }
    }
}

using Command = std::function<pulseq::RunResult(const pulseq::ExperimentConfig &,
                                                const pulseq::RunOptions &)>;

} // namespace

int main(int argc, char **argv) {
    configure_logging();

    CLI::App app{"Pulse-level gate simulator for coupled charge qubits"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    unsigned jobs = 0;
    std::optional<double> dt;

    const std::map<std::string, std::pair<std::string, Command>> commands = {
        {"simulate", {"integrate one gate or schedule and write its trajectory",
                      pulseq::cmd_simulate}},
        {"compile", {"emit a gate's pulse schedule and timing table",
                     pulseq::cmd_compile}},
        {"sweep", {"sweep the rise time and fit the error law", pulseq::cmd_sweep}},
        {"magnus", {"average-Hamiltonian terms of one pulse edge",
                    pulseq::cmd_magnus}},
        {"report", {"physical time scales for a Josephson energy",
                    pulseq::cmd_report}},
    };
    for (const auto &[name, entry] : commands) {
        auto *sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", config_path, "experiment configuration (JSON)")
            ->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--jobs", jobs, "sweep worker threads (0: all cores)");
        sub->add_option("--dt", dt, "override the integrator step")
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    const std::string chosen = app.get_subcommands().front()->get_name();
    try {
        const auto config = pulseq::load_config(config_path);
        pulseq::RunOptions options;
        options.out_dir = out_dir;
        options.jobs = jobs;
        options.dt = dt;
        spdlog::info("{}: config {}, output {}", chosen, config_path, out_dir);
        const auto result = commands.at(chosen).second(config, options);
        for (const auto &w : result.warnings) {
            spdlog::warn("{}", w);
        }
        for (const auto &f : result.files) {
            spdlog::info("wrote {}", (std::filesystem::path(out_dir) / f).string());
        }
        std::cout << result.summary;
        if (!result.summary.empty() && result.summary.back() != '\n') {
            std::cout << '\n';
        }
        return 0;
    } catch (const pulseq::ConfigError &e) {
        spdlog::error("config error: {}", e.what());
        return kExitConfig;
    } catch (const pulseq::InvalidArgument &e) {
        spdlog::error("invalid argument: {}", e.what());
        return kExitConfig;
    } catch (const pulseq::NumericalError &e) {
        spdlog::error("numerical failure: {}", e.what());
        return kExitNumerical;
    } catch (const pulseq::ConvergenceError &e) {
        spdlog::error("quadrature did not converge: {}", e.what());
        return kExitNumerical;
    } catch (const std::exception &e) {
        spdlog::error("{}", e.what());
        return 1;
    }
}
