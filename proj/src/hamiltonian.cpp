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

#include "pulseq/hamiltonian.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <utility>

namespace pulseq {

HamiltonianFn::HamiltonianFn(int n_qubits, Evaluator evaluator,
                             std::vector<double> breakpoints)
    : n_qubits_(n_qubits),
      dim_(static_cast<Eigen::Index>(dimension_of(n_qubits))),
      evaluator_(std::move(evaluator)), breakpoints_(std::move(breakpoints)) {
    if (!evaluator_) {
        throw InvalidArgument("Hamiltonian evaluator is empty");
    }
}

HamiltonianFn HamiltonianFn::constant(const OperatorMatrix &h) {
    return {h.n_qubits(), [m = h.entries()](double, CMatrix &out) { out = m; }};
}

HamiltonianFn HamiltonianFn::scaled(std::function<double(double)> envelope,
                                    const OperatorMatrix &h) {
    return {h.n_qubits(),
            [f = std::move(envelope), m = h.entries()](double t, CMatrix &out) {
                out = f(t) * m;
            }};
}

void HamiltonianFn::evaluate(double t, CMatrix &out) const {
    if (out.rows() != dim_ || out.cols() != dim_) {
        out.resize(dim_, dim_);
    }
    evaluator_(t, out);
}

OperatorMatrix HamiltonianFn::operator()(double t) const {
    CMatrix m(dim_, dim_);
    evaluate(t, m);
    return {n_qubits_, std::move(m)};
}

double ChargeModel::pair_factor() const {
    const double per_pair = pair_counting == PairCounting::ordered ? 2.0 : 1.0;
    return per_pair / coupling_energy;
}

int model_qubits(const Model &model) {
    return std::visit([](const auto &m) { return m.n_qubits; }, model);
}

namespace {

bool is_ideal_control(ControlKind kind) {
    return kind == ControlKind::field_x || kind == ControlKind::field_y ||
           kind == ControlKind::field_z || kind == ControlKind::exchange;
}

Axis field_axis(ControlKind kind) {
    switch (kind) {
    case ControlKind::field_x:
        return Axis::x;
    case ControlKind::field_y:
        return Axis::y;
    default:
        return Axis::z;
    }
}

void check_qubit(const ControlId &id, int n_qubits) {
    const bool bad = id.qubit < 0 || id.qubit >= n_qubits ||
                     (id.kind == ControlKind::exchange &&
                      (id.partner < 0 || id.partner >= n_qubits));
    if (bad) {
        throw InvalidArgument("control " + id.name() + " addresses a qubit " +
                              "outside a " + std::to_string(n_qubits) +
                              "-qubit register");
    }
}

OperatorMatrix exchange_operator(int i, int j, int n) {
    return embed_pauli(Axis::x, i, n) * embed_pauli(Axis::x, j, n) +
           embed_pauli(Axis::y, i, n) * embed_pauli(Axis::y, j, n);
}

OperatorMatrix yy_operator(int i, int j, int n) {
    return embed_pauli(Axis::y, i, n) * embed_pauli(Axis::y, j, n);
}

// Single-control term: coefficient value(t) * op.
struct LinearTerm {
    ParamSchedule control;
    CMatrix op;
};

// Product term for a pair of Josephson controls.
struct PairTerm {
    std::size_t first;
    std::size_t second;
    CMatrix op;
};

struct CompiledModel {
    std::vector<LinearTerm> linear;
    std::vector<PairTerm> pairs;
};

} // namespace

void check_controls(const Model &model, const Schedule &schedule) {
    const int n = model_qubits(model);
    dimension_of(n);
    const bool ideal = std::holds_alternative<IdealModel>(model);
    int josephson_controls = 0;
    for (const auto &ps : schedule.params()) {
        const auto &id = ps.parameter;
        check_qubit(id, n);
        if (ideal != is_ideal_control(id.kind)) {
            throw InvalidArgument("control " + id.name() +
                                  " is not available on the " +
                                  (ideal ? "ideal" : "charge") + " model");
        }
        if (id.kind == ControlKind::josephson) {
            ++josephson_controls;
        }
    }
    if (!ideal && josephson_controls >= 2) {
        const auto &charge = std::get<ChargeModel>(model);
        if (!(charge.coupling_energy > 0.0)) {
            throw InvalidArgument(
                "coupling energy E_L must be positive when two Josephson "
                "controls are scheduled");
        }
    }
}

namespace {

CompiledModel compile_model(const Model &model, const Schedule &schedule) {
    check_controls(model, schedule);
    const int n = model_qubits(model);
    CompiledModel compiled;
    if (std::holds_alternative<IdealModel>(model)) {
        for (const auto &ps : schedule.params()) {
            const auto &id = ps.parameter;
            if (id.kind == ControlKind::exchange) {
                compiled.linear.push_back(
                    {ps, -0.5 * exchange_operator(id.qubit, id.partner, n)
                                    .entries()});
            } else {
                compiled.linear.push_back(
                    {ps, -embed_pauli(field_axis(id.kind), id.qubit, n)
                              .entries()});
            }
        }
        return compiled;
    }

    const auto &charge = std::get<ChargeModel>(model);
    std::vector<std::size_t> josephson_slots;
    for (const auto &ps : schedule.params()) {
        const auto &id = ps.parameter;
        const Axis axis = id.kind == ControlKind::charging ? Axis::z : Axis::x;
        if (id.kind == ControlKind::josephson) {
            josephson_slots.push_back(compiled.linear.size());
        }
        compiled.linear.push_back(
            {ps, -0.5 * embed_pauli(axis, id.qubit, n).entries()});
    }
    for (std::size_t a = 0; a < josephson_slots.size(); ++a) {
        for (std::size_t b = a + 1; b < josephson_slots.size(); ++b) {
            const int qa = compiled.linear[josephson_slots[a]].control.parameter.qubit;
            const int qb = compiled.linear[josephson_slots[b]].control.parameter.qubit;
            compiled.pairs.push_back(
                {josephson_slots[a], josephson_slots[b],
                 -charge.pair_factor() * yy_operator(qa, qb, n).entries()});
        }
    }
    return compiled;
}

void evaluate_compiled(const CompiledModel &compiled, double t,
                       std::vector<double> &values, CMatrix &out) {
    out.setZero();
    values.resize(compiled.linear.size());
    for (std::size_t k = 0; k < compiled.linear.size(); ++k) {
        const double v = compiled.linear[k].control.value(t);
        values[k] = v;
        if (v != 0.0) {
            out += v * compiled.linear[k].op;
        }
    }
    for (const auto &pair : compiled.pairs) {
        const double g = values[pair.first] * values[pair.second];
        if (g != 0.0) {
            out += g * pair.op;
        }
    }
}

} // namespace

OperatorMatrix ideal_hamiltonian(const IdealModel &model,
                                 const Schedule &schedule, double t) {
    return make_hamiltonian(model, schedule)(t);
}

OperatorMatrix charge_hamiltonian(const ChargeModel &model,
                                  const Schedule &schedule, double t) {
    return make_hamiltonian(model, schedule)(t);
}

HamiltonianFn make_hamiltonian(const Model &model, Schedule schedule) {
    auto compiled =
        std::make_shared<const CompiledModel>(compile_model(model, schedule));
    const int n = model_qubits(model);
    return {n,
            [compiled](double t, CMatrix &out) {
                thread_local std::vector<double> values;
                evaluate_compiled(*compiled, t, values, out);
            },
            schedule.breakpoints()};
}

OperatorMatrix coupled_pair_hamiltonian(double josephson,
                                        double coupling_energy) {
    if (!(coupling_energy > 0.0)) {
        throw InvalidArgument("coupling energy E_L must be positive");
    }
    const double e_int = josephson * josephson / coupling_energy;
    OperatorMatrix h = Complex{-0.5 * josephson, 0.0} *
                       (embed_pauli(Axis::x, 0, 2) + embed_pauli(Axis::x, 1, 2));
    h -= Complex{e_int, 0.0} * yy_operator(0, 1, 2);
    return h;
}

OperatorMatrix ry_frame() {
    // exp(-i pi/4 sy) = (I - i sy) / sqrt(2); the two factors commute.
    using namespace std::complex_literals;
    const CMatrix single =
        (CMatrix::Identity(2, 2) - 1i * pauli(Axis::y)) / std::numbers::sqrt2;
    return embed_single(single, 0, 2) * embed_single(single, 1, 2);
}

OperatorMatrix transformed_hph(double josephson, double coupling_energy) {
    if (!(josephson > 0.0) || !(coupling_energy > 0.0)) {
        throw InvalidArgument("E_J and E_L must be positive");
    }
    const double e_int = josephson * josephson / coupling_energy;
    const double a = coupling_energy / josephson;
    CMatrix m(4, 4);
    m << a, 0, 0, -1, //
        0, 0, 1, 0,   //
        0, 1, 0, 0,   //
        -1, 0, 0, -a;
    return {2, -e_int * m};
}

} // namespace pulseq
