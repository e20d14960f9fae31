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

/**
 * @file experiments.hpp
 * The batch commands behind the command line tool. Each command reads a
 * parsed configuration, writes its files into the output directory and
 * returns a manifest describing what it did. Outputs depend only on the
 * configuration and the dt override, never on the worker count.
 */
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pulseq/config.hpp"
#include "pulseq/gatecomp.hpp"

namespace pulseq {

inline constexpr const char *kManifestFormat = "pulseq-manifest/1";

struct RunOptions {
    std::filesystem::path out_dir = ".";
    unsigned jobs = 0; // 0: hardware concurrency
    std::optional<double> dt;
};

struct RunResult {
    std::vector<std::string> files; // names relative to out_dir
    nlohmann::json manifest;
    std::vector<std::string> warnings;
    std::string summary; // short human-readable result
};

/// Compiles experiment.gate for `kind` at rise parameter `epsilon`.
GateProgram compile_gate(const ExperimentConfig &config, ModelKind kind,
                         double epsilon);

RunResult cmd_simulate(const ExperimentConfig &config, const RunOptions &options);
RunResult cmd_compile(const ExperimentConfig &config, const RunOptions &options);
RunResult cmd_sweep(const ExperimentConfig &config, const RunOptions &options);
RunResult cmd_magnus(const ExperimentConfig &config, const RunOptions &options);
RunResult cmd_report(const ExperimentConfig &config, const RunOptions &options);

/// Real and imaginary entry tables of a matrix.
nlohmann::json matrix_to_json(const CMatrix &m);

} // namespace pulseq
