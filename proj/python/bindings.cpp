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

// Python bindings for the compiler, simulator and analysis layers.
// Matrices cross the boundary as complex128 numpy arrays; states are
// addressed by bit strings ("11") or amplitude vectors.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pulseq/analysis.hpp"
#include "pulseq/config.hpp"
#include "pulseq/experiments.hpp"
#include "pulseq/gatecomp.hpp"
#include "pulseq/integrator.hpp"

namespace py = pybind11;
using namespace pulseq;

namespace {

StateVector to_state(const py::object &obj, int n_qubits) {
    if (py::isinstance<py::str>(obj)) {
        return StateVector::from_bits(obj.cast<std::string>());
    }
    return StateVector(n_qubits, obj.cast<CVector>());
}

CompileOptions make_options(double epsilon, double idle_margin,
                            std::optional<bool> nonnegative, double josephson,
                            double charging, double field, double exchange) {
    CompileOptions o;
    o.epsilon = epsilon;
    o.idle_margin = idle_margin;
    o.nonnegative_controls = nonnegative;
    o.josephson = josephson;
    o.charging = charging;
    o.field = field;
    o.exchange = exchange;
    return o;
}

ExperimentConfig config_from_text(const std::string &text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("document", e.what());
    }
    return parse_config(doc);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pulse-level simulation of gates on coupled charge qubits";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<CouplingParams>(m, "CouplingParams")
        .def_readonly("m", &CouplingParams::m)
        .def_readonly("n", &CouplingParams::n)
        .def_readonly("ratio", &CouplingParams::ratio)
        .def_readonly("tau", &CouplingParams::tau)
        .def_readonly("phi", &CouplingParams::phi)
        .def_readonly("theta", &CouplingParams::theta)
        .def("__repr__", [](const CouplingParams &p) {
            return "CouplingParams(m=" + std::to_string(p.m) +
                   ", n=" + std::to_string(p.n) +
                   ", ratio=" + format_float(p.ratio) +
                   ", tau=" + format_float(p.tau) + ")";
        });
    m.def("solve_coupling", &solve_coupling, py::arg("m"), py::arg("n"),
          "E_L/E_J ratio, joint pulse length and phases for the integers (m, n).");

    py::class_<GateProgram>(m, "GateProgram")
        .def_readonly("name", &GateProgram::name)
        .def_property_readonly("model",
                               [](const GateProgram &p) { return model_name(p.kind); })
        .def_readonly("n_qubits", &GateProgram::n_qubits)
        .def_readonly("epsilon", &GateProgram::epsilon)
        .def_readonly("tau_op", &GateProgram::tau_op)
        .def_readonly("coupling", &GateProgram::coupling)
        .def_property_readonly("duration", &GateProgram::duration)
        .def_property_readonly("segment_labels",
                               [](const GateProgram &p) {
                                   std::vector<std::string> out;
                                   for (const auto &s : p.segments) {
                                       out.push_back(s.label);
                                   }
                                   return out;
                               })
        .def_property_readonly("reference_unitary",
                               [](const GateProgram &p) {
                                   return p.reference_unitary.entries();
                               })
        .def_property_readonly("target",
                               [](const GateProgram &p) { return p.target.entries(); })
        .def_property_readonly("schedule_json",
                               [](const GateProgram &p) {
                                   return schedule_to_json(p.schedule).dump();
                               })
        .def("with_epsilon", &GateProgram::with_epsilon, py::arg("epsilon"))
        .def("count_segments", &GateProgram::count_segments, py::arg("label"));

    m.def(
        "compile_gate",
        [](const std::string &gate, const std::string &model, int control,
           int target, int m_int, int n_int, double epsilon, double idle_margin,
           std::optional<bool> nonnegative, double josephson, double charging,
           double field, double exchange, double gamma) {
            const auto opts = make_options(epsilon, idle_margin, nonnegative,
                                           josephson, charging, field, exchange);
            const ModelKind kind = parse_model(model);
            if (gate == "hadamard") {
                return hadamard_program(target, kind, opts);
            }
            if (kind == ModelKind::ideal) {
                if (gate == "cnot") {
                    return ideal_cnot_program(control, target, opts);
                }
                if (gate == "cpf") {
                    return ideal_cpf_program(control, target, opts);
                }
                if (gate == "u_2b") {
                    return u2b_program(control, target, gamma, opts);
                }
                throw InvalidArgument("gate '" + gate + "' is not available on the ideal model");
            }
            const auto params = solve_coupling(m_int, n_int);
            if (gate == "cnot") {
                return charge_cnot_program(control, target, params, opts);
            }
            if (gate == "cpf") {
                return cpf_program(control, target, params, opts);
            }
            if (gate == "u_ph") {
                return u_ph_program(control, target, params, opts);
            }
            throw InvalidArgument("gate '" + gate + "' is not available on the charge model");
        },
        py::arg("gate"), py::arg("model"), py::arg("control") = 0,
        py::arg("target") = 1, py::arg("m") = 1, py::arg("n") = 3,
        py::arg("epsilon") = 0.0, py::arg("idle_margin") = kDefaultIdleMargin,
        py::arg("nonnegative_controls") = py::none(), py::arg("josephson") = 1.0,
        py::arg("charging") = 2.0, py::arg("field") = 1.0,
        py::arg("exchange") = 1.0, py::arg("gamma") = 0.0,
        "Compile a gate (cnot, cpf, hadamard, u_ph, u_2b) to a pulse program.");

    m.def(
        "simulate",
        [](const GateProgram &program, const py::object &input,
           std::optional<double> dt) {
            const auto r = simulate_program(
                program, to_state(input, program.n_qubits), dt);
            py::dict out;
            out["amplitudes"] = r.output.amplitudes();
            out["probabilities"] = r.output.probabilities();
            out["success"] = r.success;
            out["fidelity"] = r.fidelity;
            out["max_norm_drift"] = r.max_norm_drift;
            return out;
        },
        py::arg("program"), py::arg("input"), py::arg("dt") = py::none(),
        "Integrate the program on one input and compare with the ideal output.");

    m.def(
        "propagator",
        [](const GateProgram &program, std::optional<double> dt) {
            auto cfg = default_integrator(program.schedule);
            if (dt) {
                cfg.dt = *dt;
            }
            const auto h = make_hamiltonian(program.model, program.schedule);
            return propagator(h, 0.0, program.duration(), cfg).entries();
        },
        py::arg("program"), py::arg("dt") = py::none());

    m.def(
        "sweep_rise_time",
        [](const GateProgram &program, const std::string &input,
           std::vector<double> grid, unsigned jobs) {
            SweepOptions opts;
            opts.jobs = jobs;
            const auto rec = sweep_rise_time(program, StateVector::from_bits(input),
                                             std::move(grid), program.tau_op, opts);
            py::list samples;
            for (const auto &s : rec.samples) {
                py::dict d;
                d["x"] = s.x;
                d["epsilon"] = s.epsilon;
                d["success"] = s.success;
                d["fidelity"] = s.fidelity;
                d["fidelity_perturbative"] = s.fidelity_perturbative;
                samples.append(d);
            }
            py::dict fit;
            fit["c"] = rec.fit.c;
            fit["p"] = rec.fit.p;
            fit["residual"] = rec.fit.residual;
            py::dict out;
            out["samples"] = samples;
            out["fit"] = fit;
            return out;
        },
        py::arg("program"), py::arg("input"), py::arg("grid"), py::arg("jobs") = 0,
        "Sweep eps/tau_op over the grid and fit the error law.");

    m.def(
        "fit_error_law",
        [](const std::vector<double> &x, const std::vector<double> &y) {
            const auto f = fit_error_law(x, y);
            return py::dict(py::arg("c") = f.c, py::arg("p") = f.p,
                            py::arg("residual") = f.residual);
        },
        py::arg("x"), py::arg("y"));

    m.def(
        "magnus_linear_ramp",
        [](double josephson, double coupling_energy, double epsilon) {
            QuadratureConfig cfg;
            cfg.max_spacing = epsilon / 10.0;
            const auto h = linear_ramp_hamiltonian(josephson, coupling_energy, epsilon);
            const auto terms = magnus_terms(h, 0.0, 2.0 * epsilon, cfg);
            return py::make_tuple(terms.h0_bar.entries(), terms.h1_bar.entries(),
                                  linear_ramp_h1_closed_form(josephson, coupling_energy,
                                                             epsilon)
                                      .entries());
        },
        py::arg("josephson"), py::arg("coupling_energy"), py::arg("epsilon"),
        "(H0, H1, closed-form H1) over one linear ramp of both Josephson energies.");

    m.def(
        "expm_hermitian",
        [](const CMatrix &h, double t) {
            const int n = static_cast<int>(std::log2(static_cast<double>(h.rows())) + 0.5);
            return reference_expm(OperatorMatrix(n, h), t).entries();
        },
        py::arg("h"), py::arg("t"), "exp(-i h t) by eigendecomposition.");

    m.def(
        "cnot_matrix",
        [](int i, int j, int n) { return cnot_matrix(i, j, n).entries(); },
        py::arg("control"), py::arg("target"), py::arg("n_qubits") = 2);

    m.def(
        "phase_insensitive_distance",
        [](const CMatrix &a, const CMatrix &b) { return phase_insensitive_distance(a, b); },
        py::arg("a"), py::arg("b"));

    m.def(
        "run",
        [](const std::string &command, const std::string &config_text,
           const std::string &out_dir, unsigned jobs, std::optional<double> dt) {
            const auto cfg = config_from_text(config_text);
            RunOptions opts;
            opts.out_dir = out_dir;
            opts.jobs = jobs;
            opts.dt = dt;
            RunResult r;
            if (command == "simulate") {
                r = cmd_simulate(cfg, opts);
            } else if (command == "compile") {
                r = cmd_compile(cfg, opts);
            } else if (command == "sweep") {
                r = cmd_sweep(cfg, opts);
            } else if (command == "magnus") {
                r = cmd_magnus(cfg, opts);
            } else if (command == "report") {
                r = cmd_report(cfg, opts);
            } else {
                throw InvalidArgument("unknown command '" + command + "'");
            }
            return r.manifest.dump();
        },
        py::arg("command"), py::arg("config"), py::arg("out_dir"),
        py::arg("jobs") = 0, py::arg("dt") = py::none(),
        "Run a CLI command from a JSON config string; returns the manifest JSON.");
}
