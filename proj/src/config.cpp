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

#include "pulseq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

namespace pulseq {

using nlohmann::json;

ConfigError::ConfigError(const std::string &field, const std::string &message)
    : InvalidArgument(field + ": " + message), field_(field) {}

namespace {

const std::set<std::string> kGates{"cnot", "cpf", "hadamard", "u_ph", "u_2b"};
const std::set<std::string> kSegments{"linear_ramp", "tanh_ramp", "constant"};

std::string join(const std::string &where, const std::string &key) {
    return where.empty() ? key : where + "." + key;
}

void require_object(const json &node, const std::string &where) {
    if (!node.is_object()) {
        throw ConfigError(where.empty() ? "<root>" : where,
                          "expected an object");
    }
}

void check_keys(const json &node, std::initializer_list<const char *> allowed,
                const std::string &where) {
    require_object(node, where);
    for (const auto &item : node.items()) {
        const bool known =
            std::any_of(allowed.begin(), allowed.end(),
                        [&](const char *k) { return item.key() == k; });
        if (!known) {
            throw ConfigError(join(where, item.key()), "unknown key");
        }
    }
}

double number_at(const json &node, const std::string &field) {
    if (!node.is_number()) {
        throw ConfigError(field, "expected a number");
    }
    const double v = node.get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError(field, "must be finite");
    }
    return v;
}

double positive_at(const json &node, const std::string &field) {
    const double v = number_at(node, field);
    if (!(v > 0.0)) {
        throw ConfigError(field, "must be positive");
    }
    return v;
}

int integer_at(const json &node, const std::string &field) {
    if (!node.is_number_integer()) {
        throw ConfigError(field, "expected an integer");
    }
    return node.get<int>();
}

std::size_t count_at(const json &node, const std::string &field) {
    const int v = integer_at(node, field);
    if (v < 1) {
        throw ConfigError(field, "must be at least 1");
    }
    return static_cast<std::size_t>(v);
}

bool bool_at(const json &node, const std::string &field) {
    if (!node.is_boolean()) {
        throw ConfigError(field, "expected true or false");
    }
    return node.get<bool>();
}

std::string string_at(const json &node, const std::string &field) {
    if (!node.is_string()) {
        throw ConfigError(field, "expected a string");
    }
    return node.get<std::string>();
}

std::string counting_name(PairCounting c) {
    return c == PairCounting::ordered ? "ordered" : "unordered";
}

void parse_controls(const json &node, ExperimentConfig &cfg) {
    check_keys(node, {"field", "exchange", "josephson", "charging"}, "controls");
    if (node.contains("field")) {
        cfg.field = positive_at(node["field"], "controls.field");
    }
    if (node.contains("exchange")) {
        cfg.exchange = positive_at(node["exchange"], "controls.exchange");
    }
    if (node.contains("josephson")) {
        cfg.josephson = positive_at(node["josephson"], "controls.josephson");
    }
    if (node.contains("charging")) {
        cfg.charging = positive_at(node["charging"], "controls.charging");
    }
}

void parse_coupling(const json &node, ExperimentConfig &cfg) {
    check_keys(node, {"m", "n", "ratio", "pair_counting"}, "coupling");
    auto &c = cfg.coupling;
    if (node.contains("m")) {
        c.m = integer_at(node["m"], "coupling.m");
    }
    if (node.contains("n")) {
        c.n = integer_at(node["n"], "coupling.n");
    }
    if (node.contains("ratio")) {
        c.ratio = positive_at(node["ratio"], "coupling.ratio");
    }
    if (node.contains("pair_counting")) {
        const auto text = string_at(node["pair_counting"], "coupling.pair_counting");
        if (text == "unordered") {
            c.pair_counting = PairCounting::unordered;
        } else if (text == "ordered") {
            c.pair_counting = PairCounting::ordered;
        } else {
            throw ConfigError("coupling.pair_counting",
                              "expected \"unordered\" or \"ordered\"");
        }
    }
    if (c.m.has_value() != c.n.has_value()) {
        throw ConfigError(c.m ? "coupling.n" : "coupling.m",
                          "m and n must be given together");
    }
    if (c.m && c.ratio) {
        throw ConfigError("coupling.ratio", "give either (m, n) or ratio");
    }
    if (c.m) {
        try {
            solve_coupling(*c.m, *c.n);
        } catch (const InvalidArgument &e) {
            throw ConfigError(*c.n == 0 ? "coupling.n" : "coupling", e.what());
        }
    }
}

void parse_pulse(const json &node, ExperimentConfig &cfg) {
    check_keys(node,
               {"epsilon", "epsilon_over_tau_op", "idle_margin",
                "nonnegative_controls"},
               "pulse");
    auto &p = cfg.pulse;
    if (node.contains("epsilon")) {
        p.epsilon = number_at(node["epsilon"], "pulse.epsilon");
        if (*p.epsilon < 0.0) {
            throw ConfigError("pulse.epsilon", "must be non-negative");
        }
    }
    if (node.contains("epsilon_over_tau_op")) {
        p.epsilon_over_tau_op =
            number_at(node["epsilon_over_tau_op"], "pulse.epsilon_over_tau_op");
        if (*p.epsilon_over_tau_op < 0.0) {
            throw ConfigError("pulse.epsilon_over_tau_op",
                              "must be non-negative");
        }
    }
    if (p.epsilon && p.epsilon_over_tau_op) {
        throw ConfigError("pulse.epsilon",
                          "give either epsilon or epsilon_over_tau_op");
    }
    if (node.contains("idle_margin")) {
        p.idle_margin = positive_at(node["idle_margin"], "pulse.idle_margin");
    }
    if (node.contains("nonnegative_controls")) {
        p.nonnegative_controls = bool_at(node["nonnegative_controls"],
                                         "pulse.nonnegative_controls");
    }
}

void parse_integrator(const json &node, ExperimentConfig &cfg) {
    check_keys(node, {"dt", "record_stride", "renormalize_every"}, "integrator");
    auto &s = cfg.integrator;
    if (node.contains("dt") && !node["dt"].is_null()) {
        s.dt = positive_at(node["dt"], "integrator.dt");
    }
    if (node.contains("record_stride")) {
        s.record_stride = count_at(node["record_stride"], "integrator.record_stride");
    }
    if (node.contains("renormalize_every") && !node["renormalize_every"].is_null()) {
        s.renormalize_every =
            count_at(node["renormalize_every"], "integrator.renormalize_every");
    }
}

void parse_experiment(const json &node, ExperimentConfig &cfg) {
    check_keys(node,
               {"gate", "control", "target", "input", "gamma", "epsilon_grid",
                "models", "segment"},
               "experiment");
    auto &e = cfg.experiment;
    if (node.contains("gate")) {
        e.gate = string_at(node["gate"], "experiment.gate");
        if (kGates.count(e.gate) == 0) {
            throw ConfigError("experiment.gate",
                              "expected one of cnot, cpf, hadamard, u_ph, u_2b");
        }
    }
    if (node.contains("control")) {
        e.control = integer_at(node["control"], "experiment.control");
    }
    if (node.contains("target")) {
        e.target = integer_at(node["target"], "experiment.target");
    }
    if (node.contains("input")) {
        e.input = string_at(node["input"], "experiment.input");
    }
    if (node.contains("gamma")) {
        e.gamma = number_at(node["gamma"], "experiment.gamma");
    }
    if (node.contains("epsilon_grid")) {
        const auto &grid = node["epsilon_grid"];
        if (!grid.is_array()) {
            throw ConfigError("experiment.epsilon_grid", "expected an array");
        }
        e.epsilon_grid.clear();
        for (std::size_t k = 0; k < grid.size(); ++k) {
            e.epsilon_grid.push_back(positive_at(
                grid[k], "experiment.epsilon_grid[" + std::to_string(k) + "]"));
        }
    }
    if (node.contains("models")) {
        const auto &models = node["models"];
        if (!models.is_array()) {
            throw ConfigError("experiment.models", "expected an array");
        }
        e.models.clear();
        for (std::size_t k = 0; k < models.size(); ++k) {
            const std::string field =
                "experiment.models[" + std::to_string(k) + "]";
            const auto name = string_at(models[k], field);
            try {
                parse_model(name);
            } catch (const InvalidArgument &) {
                throw ConfigError(field, "expected \"ideal\" or \"charge\"");
            }
            e.models.push_back(name);
        }
    }
    if (node.contains("segment")) {
        e.segment = string_at(node["segment"], "experiment.segment");
        if (kSegments.count(e.segment) == 0) {
            throw ConfigError("experiment.segment",
                              "expected linear_ramp, tanh_ramp or constant");
        }
    }
}

void validate_operands(const ExperimentConfig &cfg) {
    const auto &e = cfg.experiment;
    const bool two_qubit = e.gate != "hadamard";
    if (e.target < 0 || e.target >= cfg.n_qubits) {
        throw ConfigError("experiment.target", "qubit index outside the register");
    }
    if (two_qubit) {
        if (e.control < 0 || e.control >= cfg.n_qubits) {
            throw ConfigError("experiment.control",
                              "qubit index outside the register");
        }
        if (e.control == e.target) {
            throw ConfigError("experiment.target",
                              "must differ from experiment.control");
        }
    }
    if (e.input.size() != static_cast<std::size_t>(cfg.n_qubits) ||
        e.input.find_first_not_of("01") != std::string::npos) {
        throw ConfigError("experiment.input",
                          "expected a bit string with one digit per qubit");
    }
}

} // namespace

double ExperimentConfig::tau_op() const {
    return model == ModelKind::ideal ? 1.0 / field : 1.0 / charging;
}

double ExperimentConfig::epsilon() const {
    if (pulse.epsilon) {
        return *pulse.epsilon;
    }
    if (pulse.epsilon_over_tau_op) {
        return *pulse.epsilon_over_tau_op * tau_op();
    }
    return 0.0;
}

CouplingParams ExperimentConfig::coupling_params() const {
    if (!coupling.m || !coupling.n) {
        throw ConfigError("coupling", "gate compilation needs coupling m and n");
    }
    return solve_coupling(*coupling.m, *coupling.n);
}

std::optional<double> ExperimentConfig::coupling_ratio() const {
    if (coupling.ratio) {
        return coupling.ratio;
    }
    if (coupling.m) {
        return coupling_params().ratio;
    }
    return std::nullopt;
}

CompileOptions ExperimentConfig::compile_options() const {
    CompileOptions o;
    o.n_qubits = n_qubits;
    o.epsilon = epsilon();
    o.idle_margin = pulse.idle_margin;
    o.nonnegative_controls = pulse.nonnegative_controls;
    o.field = field;
    o.exchange = exchange;
    o.josephson = josephson;
    o.charging = charging;
    o.pair_counting = coupling.pair_counting;
    return o;
}

Model ExperimentConfig::model_instance() const {
    if (model == ModelKind::ideal) {
        return IdealModel{n_qubits};
    }
    ChargeModel charge{n_qubits, 0.0, coupling.pair_counting};
    if (auto ratio = coupling_ratio()) {
        const double per_pair =
            coupling.pair_counting == PairCounting::ordered ? 2.0 : 1.0;
        charge.coupling_energy = per_pair * *ratio * josephson;
    }
    return charge;
}

nlohmann::json schedule_to_json(const Schedule &schedule) {
    json params = json::array();
    for (const auto &ps : schedule.params()) {
        json pulses = json::array();
        for (const auto &p : ps.pulses) {
            pulses.push_back({{"t_a", p.rise_center},
                              {"t_b", p.fall_center},
                              {"epsilon", p.epsilon},
                              {"height", p.height}});
        }
        params.push_back({{"parameter", ps.parameter.name()},
                          {"base_amplitude", ps.base_amplitude},
                          {"pulses", pulses}});
    }
    return {{"total_duration", schedule.total_duration()},
            {"nonnegative_controls", schedule.nonnegative_controls()},
            {"params", params}};
}

Schedule schedule_from_json(const nlohmann::json &document,
                            const std::string &where) {
    check_keys(document, {"total_duration", "nonnegative_controls", "params"},
               where);
    if (!document.contains("total_duration")) {
        throw ConfigError(join(where, "total_duration"), "missing");
    }
    const double total =
        positive_at(document["total_duration"], join(where, "total_duration"));
    const bool nonnegative =
        document.contains("nonnegative_controls")
            ? bool_at(document["nonnegative_controls"],
                      join(where, "nonnegative_controls"))
            : false;
    std::vector<ParamSchedule> params;
    if (document.contains("params")) {
        const auto &list = document["params"];
        if (!list.is_array()) {
            throw ConfigError(join(where, "params"), "expected an array");
        }
        for (std::size_t k = 0; k < list.size(); ++k) {
            const std::string at =
                join(where, "params[" + std::to_string(k) + "]");
            const auto &entry = list[k];
            check_keys(entry, {"parameter", "base_amplitude", "pulses"}, at);
            if (!entry.contains("parameter")) {
                throw ConfigError(join(at, "parameter"), "missing");
            }
            ParamSchedule ps;
            try {
                ps.parameter = ControlId::parse(
                    string_at(entry["parameter"], join(at, "parameter")));
            } catch (const ConfigError &) {
                throw;
            } catch (const InvalidArgument &e) {
                throw ConfigError(join(at, "parameter"), e.what());
            }
            ps.base_amplitude =
                entry.contains("base_amplitude")
                    ? number_at(entry["base_amplitude"], join(at, "base_amplitude"))
                    : 1.0;
            if (entry.contains("pulses")) {
                const auto &pulses = entry["pulses"];
                if (!pulses.is_array()) {
                    throw ConfigError(join(at, "pulses"), "expected an array");
                }
                for (std::size_t j = 0; j < pulses.size(); ++j) {
                    const std::string pat =
                        join(at, "pulses[" + std::to_string(j) + "]");
                    const auto &pn = pulses[j];
                    check_keys(pn, {"t_a", "t_b", "epsilon", "height"}, pat);
                    for (const char *key : {"t_a", "t_b"}) {
                        if (!pn.contains(key)) {
                            throw ConfigError(join(pat, key), "missing");
                        }
                    }
                    RectPulse p;
                    p.rise_center = number_at(pn["t_a"], join(pat, "t_a"));
                    p.fall_center = number_at(pn["t_b"], join(pat, "t_b"));
                    p.epsilon = pn.contains("epsilon")
                                    ? number_at(pn["epsilon"], join(pat, "epsilon"))
                                    : 0.0;
                    p.height = pn.contains("height")
                                   ? number_at(pn["height"], join(pat, "height"))
                                   : 1.0;
                    try {
                        p.validate();
                    } catch (const InvalidArgument &e) {
                        throw ConfigError(pat, e.what());
                    }
                    ps.pulses.push_back(p);
                }
            }
            params.push_back(std::move(ps));
        }
    }
    try {
        return Schedule(std::move(params), total, nonnegative);
    } catch (const InvalidArgument &e) {
        throw ConfigError(where, e.what());
    }
}

ExperimentConfig parse_config(const nlohmann::json &document) {
    check_keys(document,
               {"format_version", "model", "n_qubits", "controls", "coupling",
                "pulse", "integrator", "experiment", "schedule", "device",
                "output"},
               "");
    if (!document.contains("format_version")) {
        throw ConfigError("format_version", "missing");
    }
    if (integer_at(document["format_version"], "format_version") !=
        kConfigFormatVersion) {
        throw ConfigError("format_version",
                          "unsupported version (expected " +
                              std::to_string(kConfigFormatVersion) + ")");
    }
    if (!document.contains("model")) {
        throw ConfigError("model", "missing");
    }
    ExperimentConfig cfg;
    try {
        cfg.model = parse_model(string_at(document["model"], "model"));
    } catch (const ConfigError &) {
        throw;
    } catch (const InvalidArgument &) {
        throw ConfigError("model", "expected \"ideal\" or \"charge\"");
    }
    if (document.contains("n_qubits")) {
        cfg.n_qubits = integer_at(document["n_qubits"], "n_qubits");
        if (cfg.n_qubits < 1 || cfg.n_qubits > kMaxQubits) {
            throw ConfigError("n_qubits", "must be between 1 and 4");
        }
    }
    if (document.contains("controls")) {
        parse_controls(document["controls"], cfg);
    }
    if (document.contains("coupling")) {
        parse_coupling(document["coupling"], cfg);
    }
    if (document.contains("pulse")) {
        parse_pulse(document["pulse"], cfg);
    }
    if (document.contains("integrator")) {
        parse_integrator(document["integrator"], cfg);
    }
    if (document.contains("experiment")) {
        parse_experiment(document["experiment"], cfg);
    }
    if (cfg.experiment.input.size() != static_cast<std::size_t>(cfg.n_qubits) &&
        !(document.contains("experiment") &&
          document["experiment"].contains("input"))) {
        cfg.experiment.input = std::string(static_cast<std::size_t>(cfg.n_qubits), '1');
    }
    validate_operands(cfg);
    if (document.contains("device")) {
        const auto &dev = document["device"];
        check_keys(dev, {"josephson_micro_ev"}, "device");
        if (dev.contains("josephson_micro_ev")) {
            cfg.josephson_micro_ev =
                positive_at(dev["josephson_micro_ev"], "device.josephson_micro_ev");
        }
    }
    if (document.contains("output")) {
        const auto &out = document["output"];
        check_keys(out, {"prefix"}, "output");
        if (out.contains("prefix")) {
            cfg.output_prefix = string_at(out["prefix"], "output.prefix");
            if (cfg.output_prefix.empty() ||
                cfg.output_prefix.find('/') != std::string::npos) {
                throw ConfigError("output.prefix",
                                  "must be a non-empty file name stem");
            }
        }
    }
    if (document.contains("schedule")) {
        cfg.schedule = schedule_from_json(document["schedule"], "schedule");
        try {
            check_controls(cfg.model_instance(), *cfg.schedule);
        } catch (const InvalidArgument &e) {
            throw ConfigError("schedule", e.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("--config", "cannot open " + path.string());
    }
    json document;
    try {
        document = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(document);
}

nlohmann::json config_to_json(const ExperimentConfig &cfg) {
    json doc;
    doc["format_version"] = kConfigFormatVersion;
    doc["model"] = model_name(cfg.model);
    doc["n_qubits"] = cfg.n_qubits;
    doc["controls"] = {{"field", cfg.field},
                       {"exchange", cfg.exchange},
                       {"josephson", cfg.josephson},
                       {"charging", cfg.charging}};
    json coupling = {{"pair_counting", counting_name(cfg.coupling.pair_counting)}};
    if (cfg.coupling.m) {
        coupling["m"] = *cfg.coupling.m;
        coupling["n"] = *cfg.coupling.n;
    }
    if (cfg.coupling.ratio) {
        coupling["ratio"] = *cfg.coupling.ratio;
    }
    doc["coupling"] = coupling;
    json pulse = {{"idle_margin", cfg.pulse.idle_margin}};
    if (cfg.pulse.epsilon) {
        pulse["epsilon"] = *cfg.pulse.epsilon;
    }
    if (cfg.pulse.epsilon_over_tau_op) {
        pulse["epsilon_over_tau_op"] = *cfg.pulse.epsilon_over_tau_op;
    }
    if (cfg.pulse.nonnegative_controls) {
        pulse["nonnegative_controls"] = *cfg.pulse.nonnegative_controls;
    }
    doc["pulse"] = pulse;
    json integrator = {{"record_stride", cfg.integrator.record_stride}};
    integrator["dt"] = cfg.integrator.dt ? json(*cfg.integrator.dt) : json(nullptr);
    integrator["renormalize_every"] =
        cfg.integrator.renormalize_every
            ? json(*cfg.integrator.renormalize_every)
            : json(nullptr);
    doc["integrator"] = integrator;
    const auto &e = cfg.experiment;
    doc["experiment"] = {{"gate", e.gate},         {"control", e.control},
                         {"target", e.target},     {"input", e.input},
                         {"gamma", e.gamma},       {"epsilon_grid", e.epsilon_grid},
                         {"models", e.models},     {"segment", e.segment}};
    if (cfg.schedule) {
        doc["schedule"] = schedule_to_json(*cfg.schedule);
    }
    doc["device"] = {{"josephson_micro_ev", cfg.josephson_micro_ev}};
    doc["output"] = {{"prefix", cfg.output_prefix}};
    return doc;
}

} // namespace pulseq
