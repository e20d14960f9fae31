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
 * @file config.hpp
 * Experiment configuration documents (JSON, format_version 1).
 *
 * Every key is checked against the schema below; anything unknown is an
 * error, and the message names the offending field by its dotted path.
 *
 *   format_version   1 (required)
 *   model            "ideal" | "charge" (required)
 *   n_qubits         2..4, default 2
 *   controls         {field, exchange, josephson, charging}
 *   coupling         {m, n} or {ratio}, plus optional pair_counting
 *   pulse            {epsilon | epsilon_over_tau_op, idle_margin,
 *                     nonnegative_controls}
 *   integrator       {dt, record_stride, renormalize_every}
 *   experiment       {gate, control, target, input, gamma, epsilon_grid,
 *                     models, segment}
 *   schedule         {total_duration, nonnegative_controls, params: [...]}
 *   device           {josephson_micro_ev}
 *   output           {prefix}
 */
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pulseq/gatecomp.hpp"
#include "pulseq/hamiltonian.hpp"
#include "pulseq/pulse.hpp"
#include "pulseq/qcore.hpp"

namespace pulseq {

inline constexpr int kConfigFormatVersion = 1;

/// Malformed or inconsistent configuration; `field` is a dotted path.
class ConfigError : public InvalidArgument {
  public:
    ConfigError(const std::string &field, const std::string &message);
    [[nodiscard]] const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

struct CouplingConfig {
    std::optional<int> m;
    std::optional<int> n;
    std::optional<double> ratio;
    PairCounting pair_counting = PairCounting::unordered;
};

struct PulseConfig {
    std::optional<double> epsilon;
    std::optional<double> epsilon_over_tau_op;
    double idle_margin = kDefaultIdleMargin;
    std::optional<bool> nonnegative_controls;
};

struct IntegratorSection {
    std::optional<double> dt;
    std::size_t record_stride = 1;
    std::optional<std::size_t> renormalize_every;
};

struct ExperimentSection {
    std::string gate = "cnot";
    int control = 0;
    int target = 1;
    std::string input = "11";
    double gamma = 0.0;
    std::vector<double> epsilon_grid;
    std::vector<std::string> models;
    std::string segment = "linear_ramp";
};

struct ExperimentConfig {
    ModelKind model = ModelKind::ideal;
    int n_qubits = 2;
    double field = 1.0;
    double exchange = 1.0;
    double josephson = 1.0;
    double charging = 2.0;
    CouplingConfig coupling;
    PulseConfig pulse;
    IntegratorSection integrator;
    ExperimentSection experiment;
    std::optional<Schedule> schedule;
    double josephson_micro_ev = 50.0;
    std::string output_prefix = "run";

    /// hbar/B for the ideal model, hbar/E_C for the charge model.
    [[nodiscard]] double tau_op() const;
    /// Absolute epsilon from either pulse.epsilon or pulse.epsilon_over_tau_op.
    [[nodiscard]] double epsilon() const;
    /// Solved coupling; ConfigError when m and n are not both given.
    [[nodiscard]] CouplingParams coupling_params() const;
    /// E_L / E_J from either (m, n) or the explicit ratio.
    [[nodiscard]] std::optional<double> coupling_ratio() const;
    [[nodiscard]] CompileOptions compile_options() const;
    [[nodiscard]] Model model_instance() const;
};

ExperimentConfig parse_config(const nlohmann::json &document);
ExperimentConfig load_config(const std::filesystem::path &path);
/// Canonical form with every default filled in; parses back to an equal
/// configuration.
nlohmann::json config_to_json(const ExperimentConfig &config);

nlohmann::json schedule_to_json(const Schedule &schedule);
Schedule schedule_from_json(const nlohmann::json &document,
                            const std::string &where = "schedule");

} // namespace pulseq
