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

#include "pulseq/gatecomp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <utility>

#include "pulseq/integrator.hpp"

namespace pulseq {

namespace {

using namespace std::complex_literals;
constexpr double kPi = std::numbers::pi;
// Reference products must match their targets at this level.
constexpr double kCompileTolerance = 1e-9;

void check_pair(int i, int j, int n_qubits) {
    dimension_of(n_qubits);
    if (i < 0 || j < 0 || i >= n_qubits || j >= n_qubits) {
        throw InvalidArgument("qubit operand outside the register");
    }
    if (i == j) {
        throw InvalidArgument("two-qubit gate needs distinct operands");
    }
}

std::size_t bit_of(std::size_t index, int qubit, int n_qubits) {
    return (index >> static_cast<unsigned>(n_qubits - 1 - qubit)) & 1U;
}

std::string indexed(const std::string &head, int q) {
    return head + "[" + std::to_string(q) + "]";
}

std::string indexed(const std::string &head, int i, int j) {
    return head + "[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

} // namespace

OperatorMatrix cnot_matrix(int i, int j, int n_qubits) {
    check_pair(i, j, n_qubits);
    const std::size_t dim = dimension_of(n_qubits);
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim),
                              static_cast<Eigen::Index>(dim));
    const std::size_t flip = std::size_t{1}
                             << static_cast<unsigned>(n_qubits - 1 - j);
    for (std::size_t col = 0; col < dim; ++col) {
        const std::size_t row = bit_of(col, i, n_qubits) ? col ^ flip : col;
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
    }
    return {n_qubits, std::move(m)};
}

OperatorMatrix cpf_matrix(int i, int j, int n_qubits) {
    check_pair(i, j, n_qubits);
    const std::size_t dim = dimension_of(n_qubits);
    CMatrix m = CMatrix::Identity(static_cast<Eigen::Index>(dim),
                                  static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
        if (bit_of(k, i, n_qubits) && bit_of(k, j, n_qubits)) {
            m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = -1.0;
        }
    }
    return {n_qubits, std::move(m)};
}

OperatorMatrix hadamard_matrix(int qubit, int n_qubits) {
    const CMatrix h = (pauli(Axis::x) + pauli(Axis::z)) / std::numbers::sqrt2;
    return embed_single(h, qubit, n_qubits);
}

GateSpec cnot_spec(int i, int j, int n_qubits) {
    return {"cnot", cnot_matrix(i, j, n_qubits), i, j};
}

OperatorMatrix u2b(double gamma) {
    CMatrix m = CMatrix::Identity(4, 4);
    m(1, 1) = std::cos(gamma);
    m(2, 2) = std::cos(gamma);
    m(1, 2) = 1i * std::sin(gamma);
    m(2, 1) = 1i * std::sin(gamma);
    return {2, std::move(m)};
}

OperatorMatrix u_ph_analytic(double phi) {
    const Complex ep = std::exp(Complex{0.0, phi});
    const Complex em = std::conj(ep);
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = m(3, 3) = 0.5 * (1.0 + ep);
    m(0, 3) = m(3, 0) = 0.5 * (1.0 - ep);
    m(1, 1) = m(2, 2) = 0.5 * (1.0 + em);
    m(1, 2) = m(2, 1) = 0.5 * (1.0 - em);
    return {2, std::move(m)};
}

CouplingParams solve_coupling(int m, int n) {
    if (m < 1) {
        throw InvalidArgument("coupling index m must be at least 1");
    }
    if (n == 0) {
        throw InvalidArgument("coupling index n must be nonzero");
    }
    const double odd = 2.0 * m - 1.0;
    const double four_n = 4.0 * std::abs(n);
    if (!(four_n > odd)) {
        throw InvalidArgument(
            "no real E_L/E_J for these indices: need 4|n| > 2m - 1");
    }
    CouplingParams p;
    p.m = m;
    p.n = n;
    const double q = four_n / odd;
    p.ratio = std::sqrt(q * q - 1.0);
    p.tau = 0.25 * kPi * std::sqrt(four_n * four_n - odd * odd);
    p.phi = 0.25 * kPi * odd;
    p.theta = n * kPi;
    return p;
}

double reconstructed_theta(const CouplingParams &params) {
    // With E_J = 1: E_int = 1 / a and the {|00>, |11>} block rotates at
    // sqrt(1 + a^2) E_int. Only |n| is recoverable from the spectrum.
    const double a = params.ratio;
    return std::sqrt(1.0 + a * a) / a * params.tau;
}

std::string model_name(ModelKind kind) {
    return kind == ModelKind::ideal ? "ideal" : "charge";
}

ModelKind parse_model(const std::string &text) {
    if (text == "ideal") {
        return ModelKind::ideal;
    }
    if (text == "charge") {
        return ModelKind::charge;
    }
    throw InvalidArgument("unknown model '" + text + "'");
}

namespace {

void check_options(const CompileOptions &o) {
    dimension_of(o.n_qubits);
    if (!(o.epsilon >= 0.0) || !std::isfinite(o.epsilon)) {
        throw InvalidArgument("epsilon must be a finite non-negative number");
    }
    if (!(o.idle_margin > 0.0)) {
        throw InvalidArgument("idle margin must be positive");
    }
    for (double v : {o.field, o.exchange, o.josephson, o.charging}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidArgument("control amplitudes must be positive");
        }
    }
}

Model build_model(ModelKind kind, const CompileOptions &o,
                  const std::optional<CouplingParams> &coupling) {
    if (kind == ModelKind::ideal) {
        return IdealModel{o.n_qubits};
    }
    ChargeModel charge{o.n_qubits, 0.0, o.pair_counting};
    if (coupling) {
        // Keep the physical sy sy strength E_J^2/E_L fixed whatever the
        // pair-counting convention.
        const double per_pair =
            o.pair_counting == PairCounting::ordered ? 2.0 : 1.0;
        charge.coupling_energy = per_pair * coupling->ratio * o.josephson;
    }
    return charge;
}

double base_for(const ControlId &id, const CompileOptions &o) {
    switch (id.kind) {
    case ControlKind::charging:
        return o.charging;
    case ControlKind::josephson:
        return o.josephson;
    case ControlKind::exchange:
        return o.exchange;
    default:
        return o.field;
    }
}

std::string angle_text(double angle) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", angle);
    return buf;
}

/// Accumulates segments and evaluates their ideal-limit unitaries.
class ProgramBuilder {
  public:
    ProgramBuilder(std::string name, ModelKind kind, const CompileOptions &o,
                   std::optional<CouplingParams> coupling = std::nullopt)
        : options_(o) {
        check_options(o);
        program_.name = std::move(name);
        program_.kind = kind;
        program_.model = build_model(kind, o, coupling);
        program_.n_qubits = o.n_qubits;
        program_.epsilon = o.epsilon;
        program_.idle_margin = o.idle_margin;
        program_.nonnegative_controls =
            o.nonnegative_controls.value_or(kind == ModelKind::ideal);
        program_.tau_op = kind == ModelKind::ideal ? 1.0 / o.field
                                                   : 1.0 / o.charging;
        program_.coupling = coupling;
    }

    [[nodiscard]] bool nonnegative() const {
        return program_.nonnegative_controls;
    }

    void add(std::string label, double duration,
             std::vector<ControlLevel> controls, double angle) {
        if (!(duration > 0.0)) {
            throw InvalidArgument("segment " + label +
                                  " has non-positive duration");
        }
        for (const auto &c : controls) {
            register_control(c.id);
        }
        ProgramSegment seg{std::move(label), duration, std::move(controls),
                           OperatorMatrix::identity(program_.n_qubits), angle};
        seg.unitary = segment_unitary(seg);
        program_.segments.push_back(std::move(seg));
    }

    void append(const std::vector<ProgramSegment> &segments) {
        for (const auto &seg : segments) {
            for (const auto &c : seg.controls) {
                register_control(c.id);
            }
            program_.segments.push_back(seg);
        }
    }

    /// exp(i a sigma_axis) on the ideal model.
    void ideal_rotation(Axis axis, int q, double a) {
        const char name = axis_name(axis);
        if (a < 0.0 && nonnegative()) {
            a += kPi; // same rotation up to a global sign
        }
        const double height = a < 0.0 ? -1.0 : 1.0;
        add(indexed(std::string(1, name), q) + "(" + angle_text(a) + ")",
            std::abs(a) / options_.field,
            {{ControlId::field(name, q), height}}, a);
    }

    /// i H on the ideal model: field along (1, 0, 1)/sqrt(2) for B t = pi/2.
    void ideal_hadamard(int q) {
        const double h = 1.0 / std::numbers::sqrt2;
        add(indexed("H", q), 0.5 * kPi / options_.field,
            {{ControlId::field('x', q), h}, {ControlId::field('z', q), h}},
            0.5 * kPi);
    }

    void exchange(int i, int j, double gamma) {
        if (gamma < 0.0 && nonnegative()) {
            gamma += kPi;
        }
        const double height = gamma < 0.0 ? -1.0 : 1.0;
        add(indexed("U_2b", i, j), std::abs(gamma) / options_.exchange,
            {{ControlId::exchange(i, j), height}}, gamma);
    }

    /// exp(i theta sigma / 2) through E_C (z) or E_J (x) on the charge model.
    void charge_rotation(Axis axis, int q, double theta) {
        if (theta < 0.0 && nonnegative()) {
            theta += 2.0 * kPi;
        }
        const bool z = axis == Axis::z;
        const ControlId id = z ? ControlId::charging(q) : ControlId::josephson(q);
        const double amplitude = z ? options_.charging : options_.josephson;
        const double height = theta < 0.0 ? -1.0 : 1.0;
        add(indexed(z ? "z" : "x", q) + "(" + angle_text(theta) + ")",
            std::abs(theta) / amplitude, {{id, height}}, theta);
    }

    void charge_hadamard(int q) {
        charge_rotation(Axis::z, q, 0.5 * kPi);
        charge_rotation(Axis::x, q, 0.5 * kPi);
        charge_rotation(Axis::z, q, 0.5 * kPi);
    }

    void joint_josephson(int i, int j, const CouplingParams &params) {
        add(indexed("U_ph", i, j), params.tau / options_.josephson,
            {{ControlId::josephson(i), 1.0}, {ControlId::josephson(j), 1.0}},
            params.phi);
    }

    void set_phase(Complex phase) { program_.global_phase = phase; }

    GateProgram finish(OperatorMatrix target) {
        program_.target = std::move(target);
        layout_program(program_);
        const double miss = phase_insensitive_distance(
            program_.target.entries(), program_.reference_unitary.entries());
        if (miss > kCompileTolerance) {
            std::ostringstream msg;
            msg << "compiled " << program_.name
                << " does not realize its target (deviation " << miss << ")";
            throw InvalidArgument(msg.str());
        }
        return std::move(program_);
    }

    [[nodiscard]] const GateProgram &program() const { return program_; }

  private:
    void register_control(const ControlId &id) {
        for (const auto &entry : program_.base_amplitudes) {
            if (entry.first == id) {
                return;
            }
        }
        program_.base_amplitudes.emplace_back(id, base_for(id, options_));
    }

    OperatorMatrix segment_unitary(const ProgramSegment &seg) const {
        std::vector<ParamSchedule> params;
        for (const auto &c : seg.controls) {
            params.push_back({c.id, base_for(c.id, options_),
                              {RectPulse{0.0, seg.duration, 0.0, c.height}}});
        }
        const Schedule schedule(std::move(params), seg.duration, false);
        const auto h = make_hamiltonian(program_.model, schedule);
        return reference_expm(h(0.5 * seg.duration), seg.duration);
    }

    CompileOptions options_;
    GateProgram program_;
};

std::vector<ProgramSegment> cpf_segments(int i, int j,
                                         const CouplingParams &params,
                                         const CompileOptions &options) {
    // The correction signs are settled by checking the product rather than
    // trusting a convention; the printed ordering does not hold in general.
    const OperatorMatrix target = cpf_matrix(i, j, options.n_qubits);
    const std::pair<int, int> candidates[] = {{1, -1}, {-1, 1}, {1, 1}, {-1, -1}};
    for (auto [si, sj] : candidates) {
        ProgramBuilder b("cpf", ModelKind::charge, options, params);
        b.joint_josephson(i, j, params);
        b.charge_rotation(Axis::z, i, -kPi);
        b.joint_josephson(i, j, params);
        b.charge_rotation(Axis::z, i, 2.0 * si * params.phi);
        b.charge_rotation(Axis::z, j, 2.0 * sj * params.phi);
        try {
            return b.finish(target).segments;
        } catch (const InvalidArgument &) {
            continue;
        }
    }
    throw InvalidArgument("no z-correction signs turn the U_ph sequence into "
                          "a controlled phase flip for m = " +
                          std::to_string(params.m) +
                          ", n = " + std::to_string(params.n));
}

} // namespace

std::vector<std::pair<double, double>> GateProgram::windows() const {
    std::vector<std::pair<double, double>> out;
    const double gap = idle_margin * epsilon;
    double t = gap;
    for (const auto &seg : segments) {
        out.emplace_back(t, t + seg.duration);
        t += seg.duration + gap;
    }
    return out;
}

void layout_program(GateProgram &program) {
    if (program.segments.empty()) {
        throw InvalidArgument("program has no segments");
    }
    std::vector<ParamSchedule> params;
    for (const auto &[id, base] : program.base_amplitudes) {
        params.push_back({id, base, {}});
    }
    const auto windows = program.windows();
    CMatrix reference = CMatrix::Identity(
        static_cast<Eigen::Index>(dimension_of(program.n_qubits)),
        static_cast<Eigen::Index>(dimension_of(program.n_qubits)));
    for (std::size_t k = 0; k < program.segments.size(); ++k) {
        const auto &seg = program.segments[k];
        for (const auto &c : seg.controls) {
            auto it = std::find_if(params.begin(), params.end(),
                                   [&](const ParamSchedule &ps) {
                                       return ps.parameter == c.id;
                                   });
            it->pulses.push_back({windows[k].first, windows[k].second,
                                  program.epsilon, c.height});
        }
        reference = seg.unitary.entries() * reference;
    }
    const double total = windows.back().second +
                         program.idle_margin * program.epsilon;
    program.schedule =
        Schedule(std::move(params), total, program.nonnegative_controls);
    program.reference_unitary =
        OperatorMatrix(program.n_qubits, program.global_phase * reference);
}

GateProgram GateProgram::with_epsilon(double eps) const {
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw InvalidArgument("epsilon must be a finite non-negative number");
    }
    GateProgram copy = *this;
    copy.epsilon = eps;
    layout_program(copy);
    return copy;
}

std::vector<TimingRow> GateProgram::timing_table() const {
    std::vector<TimingRow> rows;
    const auto w = windows();
    for (std::size_t k = 0; k < segments.size(); ++k) {
        for (const auto &c : segments[k].controls) {
            rows.push_back({segments[k].label, c.id.name(), w[k].first,
                            w[k].second, segments[k].angle});
        }
    }
    return rows;
}

std::size_t GateProgram::count_segments(const std::string &label) const {
    return static_cast<std::size_t>(
        std::count_if(segments.begin(), segments.end(),
                      [&](const ProgramSegment &s) { return s.label == label; }));
}

GateProgram ideal_cnot_program(int i, int j, const CompileOptions &options) {
    check_pair(i, j, options.n_qubits);
    ProgramBuilder b("cnot", ModelKind::ideal, options);
    b.ideal_hadamard(i);
    b.exchange(i, j, 0.25 * kPi);
    b.ideal_rotation(Axis::x, i, 0.5 * kPi);
    b.exchange(i, j, 0.25 * kPi);
    b.ideal_rotation(Axis::x, i, 0.25 * kPi);
    b.ideal_rotation(Axis::x, j, -0.25 * kPi);
    b.ideal_hadamard(i);
    b.set_phase(std::exp(Complex{0.0, 0.25 * kPi}));
    return b.finish(cnot_matrix(i, j, options.n_qubits));
}

GateProgram ideal_cpf_program(int i, int j, const CompileOptions &options) {
    check_pair(i, j, options.n_qubits);
    const GateProgram cnot = ideal_cnot_program(i, j, options);
    ProgramBuilder b("cpf", ModelKind::ideal, options);
    b.ideal_hadamard(j);
    b.append(cnot.segments);
    b.ideal_hadamard(j);
    return b.finish(cpf_matrix(i, j, options.n_qubits));
}

GateProgram u_ph_program(int i, int j, const CouplingParams &params,
                         const CompileOptions &options) {
    check_pair(i, j, options.n_qubits);
    ProgramBuilder b("u_ph", ModelKind::charge, options, params);
    b.joint_josephson(i, j, params);
    // Target: the coupled-pair evolution itself, on whichever pair is used.
    const auto &charge = std::get<ChargeModel>(b.program().model);
    const Schedule s({{ControlId::josephson(i), options.josephson, {{0.0, 1.0, 0.0, 1.0}}},
                      {ControlId::josephson(j), options.josephson, {{0.0, 1.0, 0.0, 1.0}}}},
                     1.0);
    const auto h = make_hamiltonian(charge, s)(0.5);
    return b.finish(reference_expm(h, params.tau / options.josephson));
}

GateProgram u2b_program(int i, int j, double gamma,
                        const CompileOptions &options) {
    check_pair(i, j, options.n_qubits);
    if (gamma == 0.0) {
        throw InvalidArgument("u_2b angle must be nonzero");
    }
    ProgramBuilder b("u_2b", ModelKind::ideal, options);
    b.exchange(i, j, gamma);
    // Embed the 4x4 gate on (i, j) through its exchange generator.
    const OperatorMatrix generator =
        Complex{0.5, 0.0} *
        (embed_pauli(Axis::x, i, options.n_qubits) *
             embed_pauli(Axis::x, j, options.n_qubits) +
         embed_pauli(Axis::y, i, options.n_qubits) *
             embed_pauli(Axis::y, j, options.n_qubits));
    return b.finish(reference_expm(generator, -gamma));
}

GateProgram cpf_program(int i, int j, const CouplingParams &params,
                        const CompileOptions &options) {
    check_pair(i, j, options.n_qubits);
    ProgramBuilder b("cpf", ModelKind::charge, options, params);
    b.append(cpf_segments(i, j, params, options));
    return b.finish(cpf_matrix(i, j, options.n_qubits));
}

GateProgram charge_cnot_program(int i, int j, const CouplingParams &params,
                                const CompileOptions &options) {
    check_pair(i, j, options.n_qubits);
    ProgramBuilder b("cnot", ModelKind::charge, options, params);
    b.charge_hadamard(j);
    b.append(cpf_segments(i, j, params, options));
    b.charge_hadamard(j);
    return b.finish(cnot_matrix(i, j, options.n_qubits));
}

GateProgram hadamard_program(int j, ModelKind kind,
                             const CompileOptions &options) {
    dimension_of(options.n_qubits);
    if (j < 0 || j >= options.n_qubits) {
        throw InvalidArgument("qubit operand outside the register");
    }
    ProgramBuilder b("hadamard", kind, options);
    if (kind == ModelKind::ideal) {
        b.ideal_hadamard(j);
    } else {
        b.charge_hadamard(j);
    }
    return b.finish(hadamard_matrix(j, options.n_qubits));
}

double reference_deviation(const GateProgram &program,
                           const OperatorMatrix &simulated) {
    return phase_insensitive_distance(program.reference_unitary.entries(),
                                      simulated.entries());
}

} // namespace pulseq
