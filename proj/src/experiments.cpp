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

#include "pulseq/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pulseq/analysis.hpp"
#include "pulseq/integrator.hpp"

namespace pulseq {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path &dir, const std::string &name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + (dir / name).string());
    }
    return out;
}

void write_json(const fs::path &dir, const std::string &name,
                const json &doc) {
    auto out = open_output(dir, name);
    out << doc.dump(2) << "\n";
}

void finish(RunResult &result, const std::string &command,
            const ExperimentConfig &config, json derived,
            const RunOptions &options) {
    const std::string name = config.output_prefix + "_" + command + "_manifest.json";
    result.files.push_back(name);
    result.manifest = {{"format", kManifestFormat},
                       {"command", command},
                       {"config", config_to_json(config)},
                       {"derived", std::move(derived)},
                       {"outputs", result.files},
                       {"warnings", result.warnings}};
    write_json(options.out_dir, name, result.manifest);
}

StateVector input_state(const ExperimentConfig &config) {
    return StateVector::from_bits(config.experiment.input);
}

json coupling_json(const CouplingParams &p) {
    return {{"m", p.m},           {"n", p.n},     {"ratio_EL_EJ", p.ratio},
            {"tau", p.tau},       {"phi", p.phi}, {"theta", p.theta}};
}

std::vector<std::string> schedule_warnings(const Schedule &schedule,
                                           double margin, double dt) {
    std::vector<std::string> out;
    for (const auto &v : validate_idle(schedule, margin)) {
        out.push_back("idle: " + v.describe());
    }
    for (auto &w : validate_boundaries(schedule, margin)) {
        out.push_back("boundary: " + w);
    }
    for (auto &w : check_time_step(dt, schedule)) {
        out.push_back("dt: " + w);
    }
    return out;
}

double chosen_dt(const ExperimentConfig &config, const RunOptions &options,
                 const Schedule &schedule) {
    if (options.dt) {
        return *options.dt;
    }
    if (config.integrator.dt) {
        return *config.integrator.dt;
    }
    return default_time_step(schedule);
}

} // namespace

nlohmann::json matrix_to_json(const CMatrix &m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row_re = json::array();
        json row_im = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row_re.push_back(m(r, c).real());
            row_im.push_back(m(r, c).imag());
        }
        re.push_back(row_re);
        im.push_back(row_im);
    }
    return {{"real", re}, {"imag", im}};
}

GateProgram compile_gate(const ExperimentConfig &config, ModelKind kind,
                         double epsilon) {
    CompileOptions options = config.compile_options();
    options.epsilon = epsilon;
    const auto &e = config.experiment;
    const int i = e.control;
    const int j = e.target;
    if (e.gate == "hadamard") {
        return hadamard_program(j, kind, options);
    }
    if (kind == ModelKind::ideal) {
        if (e.gate == "cnot") {
            return ideal_cnot_program(i, j, options);
        }
        if (e.gate == "cpf") {
            return ideal_cpf_program(i, j, options);
        }
        if (e.gate == "u_2b") {
            if (e.gamma == 0.0) {
                throw ConfigError("experiment.gamma", "u_2b needs a nonzero angle");
            }
            return u2b_program(i, j, e.gamma, options);
        }
        throw ConfigError("experiment.gate", e.gate + " needs the charge model");
    }
    if (e.gate == "u_2b") {
        throw ConfigError("experiment.gate", "u_2b needs the ideal model");
    }
    const CouplingParams params = config.coupling_params();
    if (e.gate == "cnot") {
        return charge_cnot_program(i, j, params, options);
    }
    if (e.gate == "cpf") {
        return cpf_program(i, j, params, options);
    }
    return u_ph_program(i, j, params, options);
}

RunResult cmd_simulate(const ExperimentConfig &config,
                       const RunOptions &options) {
    RunResult result;
    json derived;
    Model model = config.model_instance();
    std::optional<GateProgram> program;
    Schedule schedule;
    if (config.schedule) {
        schedule = *config.schedule;
    } else {
        program = compile_gate(config, config.model, config.epsilon());
        schedule = program->schedule;
        model = program->model;
        if (program->coupling) {
            derived["coupling"] = coupling_json(*program->coupling);
        }
    }
    const double dt = chosen_dt(config, options, schedule);
    result.warnings = schedule_warnings(schedule, config.pulse.idle_margin, dt);

    IntegratorConfig icfg;
    icfg.dt = dt;
    icfg.record_stride = config.integrator.record_stride;
    icfg.renormalize_every = config.integrator.renormalize_every;
    const StateVector psi = input_state(config);
    const auto h = make_hamiltonian(model, schedule);
    const auto traj = evolve(psi, h, 0.0, schedule.total_duration(), icfg);

    const std::string prefix = config.output_prefix;
    {
        auto out = open_output(options.out_dir, prefix + "_trajectory.csv");
        write_trajectory_csv(out, traj);
        result.files.push_back(prefix + "_trajectory.csv");
    }
    {
        auto out = open_output(options.out_dir, prefix + "_pulses.csv");
        std::vector<const ParamSchedule *> columns;
        for (const auto &ps : schedule.params()) {
            columns.push_back(&ps);
        }
        std::sort(columns.begin(), columns.end(),
                  [](const ParamSchedule *a, const ParamSchedule *b) {
                      return a->parameter < b->parameter;
                  });
        out << "t";
        for (const auto *ps : columns) {
            out << "," << ps->parameter.name();
        }
        out << "\n";
        for (double t : traj.times) {
            out << format_float(t);
            for (const auto *ps : columns) {
                out << "," << format_float(ps->value(t));
            }
            out << "\n";
        }
        result.files.push_back(prefix + "_pulses.csv");
    }

    derived["tau_op"] = config.tau_op();
    derived["epsilon"] = schedule.max_epsilon();
    derived["dt"] = dt;
    derived["duration"] = schedule.total_duration();
    derived["steps"] = traj.steps;
    derived["max_norm_drift"] = traj.max_norm_drift;
    derived["final_probabilities"] = traj.probabilities.back();
    std::ostringstream summary;
    summary << "final populations:";
    const auto &final_p = traj.probabilities.back();
    for (std::size_t k = 0; k < final_p.size(); ++k) {
        summary << " p_" << basis_label(k, psi.n_qubits()) << "="
                << format_float(final_p[k]);
    }
    if (program) {
        const CVector ideal = apply(program->reference_unitary, psi);
        Eigen::Index best = 0;
        ideal.cwiseAbs2().maxCoeff(&best);
        const std::string label =
            basis_label(static_cast<std::size_t>(best), psi.n_qubits());
        derived["expected_output"] = label;
        derived["expected_population"] =
            final_p[static_cast<std::size_t>(best)];
        derived["gate"] = program->name;
        summary << "\nexpected output |" << label << "> population "
                << format_float(final_p[static_cast<std::size_t>(best)]);
    }
    result.summary = summary.str();
    finish(result, "simulate", config, derived, options);
    return result;
}

RunResult cmd_compile(const ExperimentConfig &config,
                      const RunOptions &options) {
    RunResult result;
    const GateProgram program =
        compile_gate(config, config.model, config.epsilon());
    result.warnings = schedule_warnings(
        program.schedule, program.idle_margin,
        chosen_dt(config, options, program.schedule));
    const std::string prefix = config.output_prefix;
    write_json(options.out_dir, prefix + "_schedule.json",
               schedule_to_json(program.schedule));
    result.files.push_back(prefix + "_schedule.json");

    auto out = open_output(options.out_dir, prefix + "_timing.txt");
    out << "# gate " << program.name << ", model "
        << model_name(program.kind) << ", epsilon "
        << format_float(program.epsilon) << ", duration "
        << format_float(program.duration()) << "\n";
    if (program.coupling) {
        out << "# E_L/E_J = " << format_float(program.coupling->ratio)
            << ", tau = " << format_float(program.coupling->tau)
            << " hbar/E_J, phi = " << format_float(program.coupling->phi)
            << "\n";
    }
    char line[160];
    std::snprintf(line, sizeof line, "%-18s %-10s %-19s %-19s %s\n",
                  "segment", "parameter", "t_a", "t_b", "angle");
    out << line;
    for (const auto &row : program.timing_table()) {
        std::snprintf(line, sizeof line, "%-18s %-10s %-19s %-19s %s\n",
                      row.segment.c_str(), row.parameter.c_str(),
                      format_float(row.t_a).c_str(),
                      format_float(row.t_b).c_str(),
                      format_float(row.angle).c_str());
        out << line;
    }
    result.files.push_back(prefix + "_timing.txt");

    json derived = {{"gate", program.name},
                    {"model", model_name(program.kind)},
                    {"segments", program.segments.size()},
                    {"duration", program.duration()},
                    {"tau_op", program.tau_op}};
    if (program.coupling) {
        derived["coupling"] = coupling_json(*program.coupling);
        derived["u_ph_segments"] = program.count_segments(
            "U_ph[" + std::to_string(config.experiment.control) + "," +
            std::to_string(config.experiment.target) + "]");
    }
    std::ostringstream summary;
    summary << program.name << " (" << model_name(program.kind) << "): "
            << program.segments.size() << " segments, duration "
            << format_float(program.duration());
    result.summary = summary.str();
    finish(result, "compile", config, derived, options);
    return result;
}

RunResult cmd_sweep(const ExperimentConfig &config, const RunOptions &options) {
    const auto &grid = config.experiment.epsilon_grid;
    if (grid.size() < 6) {
        throw ConfigError("experiment.epsilon_grid",
                          "a sweep needs at least 6 points");
    }
    RunResult result;
    json derived = json::object();
    std::vector<std::string> models = config.experiment.models;
    if (models.empty()) {
        models.push_back(model_name(config.model));
    }
    std::ostringstream summary;
    for (const auto &name : models) {
        const ModelKind kind = parse_model(name);
        const GateProgram program = compile_gate(config, kind, 0.0);
        SweepOptions sopts;
        sopts.jobs = options.jobs;
        sopts.dt = options.dt ? options.dt : config.integrator.dt;
        const auto record = sweep_rise_time(program, input_state(config), grid,
                                            program.tau_op, sopts);
        const std::string csv_name =
            config.output_prefix + "_sweep_" + name + ".csv";
        auto out = open_output(options.out_dir, csv_name);
        out << "epsilon_over_tau_op,success_prob,fidelity,fidelity_perturbative\n";
        for (const auto &s : record.samples) {
            out << format_float(s.x) << "," << format_float(s.success) << ","
                << format_float(s.fidelity) << ","
                << format_float(s.fidelity_perturbative) << "\n";
        }
        result.files.push_back(csv_name);

        const json fit = {{"c", record.fit.c},
                          {"p", record.fit.p},
                          {"residual", record.fit.residual},
                          {"prefactor", record.fit.prefactor},
                          {"quadratic_points", record.fit.quadratic_points},
                          {"power_points", record.fit.power_points},
                          {"tau_op", record.tau_op},
                          {"gate", program.name},
                          {"model", name}};
        const std::string fit_name =
            config.output_prefix + "_fit_" + name + ".json";
        write_json(options.out_dir, fit_name, fit);
        result.files.push_back(fit_name);
        derived[name] = fit;

        double worst = 1.0;
        for (const auto &s : record.samples) {
            worst = std::min(worst, s.success);
        }
        summary << name << ": c = " << format_float(record.fit.c)
                << ", p = " << format_float(record.fit.p)
                << ", lowest success " << format_float(worst) << "\n";
    }
    result.summary = summary.str();
    finish(result, "sweep", config, derived, options);
    return result;
}

RunResult cmd_magnus(const ExperimentConfig &config,
                     const RunOptions &options) {
    const double eps = config.epsilon();
    if (!(eps > 0.0)) {
        throw ConfigError("pulse.epsilon", "magnus needs a positive epsilon");
    }
    const auto ratio = config.coupling_ratio();
    if (!ratio) {
        throw ConfigError("coupling", "magnus needs a coupling (m, n) or ratio");
    }
    const double ej = config.josephson;
    const double el = *ratio * ej;
    const PairCounting counting = config.coupling.pair_counting;
    const std::string &segment = config.experiment.segment;

    QuadratureConfig qcfg;
    qcfg.max_spacing = eps / 10.0;
    const HamiltonianFn h =
        segment == "linear_ramp" ? linear_ramp_hamiltonian(ej, el, eps, counting)
        : segment == "tanh_ramp"
            ? tanh_ramp_hamiltonian(ej, el, eps, counting)
            : HamiltonianFn::constant(make_hamiltonian(
                  ChargeModel{2, el, counting},
                  Schedule({{ControlId::josephson(0), ej, {{0.0, 1.0, 0.0, 1.0}}},
                            {ControlId::josephson(1), ej, {{0.0, 1.0, 0.0, 1.0}}}},
                           1.0))(0.5));
    const auto terms = magnus_terms(h, 0.0, 2.0 * eps, qcfg, segment);
    const OperatorMatrix closed =
        segment == "constant" ? OperatorMatrix::zero(2)
                              : linear_ramp_h1_closed_form(ej, el, eps, counting);
    const double diff = max_abs(terms.h1_bar.entries() - closed.entries());
    const double scale = max_abs(closed.entries());
    const bool relative = scale > 0.0;
    const double deviation = relative ? diff / scale : diff;

    json doc = {{"segment", segment},
                {"epsilon", eps},
                {"josephson", ej},
                {"coupling_energy", el},
                {"pair_counting",
                 counting == PairCounting::ordered ? "ordered" : "unordered"},
                {"interval", {0.0, 2.0 * eps}},
                {"h0_bar", matrix_to_json(terms.h0_bar.entries())},
                {"h1_bar", matrix_to_json(terms.h1_bar.entries())},
                {"closed_form", matrix_to_json(closed.entries())},
                {"closed_form_model", "linear ramp: -(E_J g eps/30)(ZY + YZ)"},
                {"deviation", deviation},
                {"deviation_kind", relative ? "relative" : "absolute"}};
    RunResult result;
    const std::string name = config.output_prefix + "_magnus.json";
    write_json(options.out_dir, name, doc);
    result.files.push_back(name);
    std::ostringstream summary;
    summary << segment << ": H1 deviation from the linear-ramp closed form "
            << format_float(deviation) << " (" << doc["deviation_kind"].get<std::string>()
            << ")";
    result.summary = summary.str();
    finish(result, "magnus", config, {{"deviation", deviation}}, options);
    return result;
}

RunResult cmd_report(const ExperimentConfig &config,
                     const RunOptions &options) {
    const auto report = timescale_report(config.josephson_micro_ev);
    RunResult result;
    std::ostringstream text;
    text << report.text;
    if (auto ratio = config.coupling_ratio()) {
        text << "E_L/E_J = " << *ratio << "\n";
    }
    if (config.coupling.m) {
        const auto p = config.coupling_params();
        text << "joint E_J pulse length tau = " << p.tau << " hbar/E_J = "
             << p.tau * report.hbar_over_ej_ps << " ps\n";
    }
    const std::string name = config.output_prefix + "_report.txt";
    auto out = open_output(options.out_dir, name);
    out << text.str();
    result.files.push_back(name);
    result.summary = text.str();
    finish(result, "report", config,
           {{"hbar_over_ej_ps", report.hbar_over_ej_ps},
            {"rise_time_exceeds_gate", report.rise_time_exceeds_gate}},
           options);
    return result;
}

} // namespace pulseq
