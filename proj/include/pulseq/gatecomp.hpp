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
 * @file gatecomp.hpp
 * Analytic gate matrices, the inductive-coupling parameter solver and the
 * compiler from gates to rectangular pulse schedules.
 *
 * Rotation conventions follow from the model Hamiltonians:
 *  - ideal model, H = -B sigma_a: a pulse of length t gives exp(+i B t sigma_a);
 *  - charge model, H = -E/2 sigma_a: a pulse of length t gives
 *    exp(+i E t sigma_a / 2).
 * A program is a list of serial segments. Its schedule is laid out with a
 * lead-in of margin*eps, then every segment followed by a gap of margin*eps,
 * so the same program can be re-laid out for any rise parameter.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pulseq/hamiltonian.hpp"
#include "pulseq/pulse.hpp"
#include "pulseq/qcore.hpp"

namespace pulseq {

struct GateSpec {
    std::string name;
    OperatorMatrix target;
    int control = -1;
    int target_qubit = -1;
};

/// Permutation flipping qubit j when qubit i is 1.
OperatorMatrix cnot_matrix(int i, int j, int n_qubits);
/// diag(1, ..., -1 on q_i = q_j = 1).
OperatorMatrix cpf_matrix(int i, int j, int n_qubits);
/// (sigma_x + sigma_z) / sqrt(2) on one qubit of an n-qubit register.
OperatorMatrix hadamard_matrix(int qubit, int n_qubits);

GateSpec cnot_spec(int i, int j, int n_qubits);

/// Identity on {|00>, |11>}, [[cos g, i sin g], [i sin g, cos g]] on
/// {|01>, |10>}.
OperatorMatrix u2b(double gamma);

/**
 * Two-qubit gate of coupled charge qubits in the entries printed for it:
 * the {|00>, |11>} block is 1/2 [[1 + e^{i phi}, 1 - e^{i phi}], ...] and
 * the {|01>, |10>} block is 1/2 [[1 + e^{-i phi}, 1 - e^{-i phi}], ...].
 * It equals exp(i phi/2 (sy sy + sz sz)).
 */
OperatorMatrix u_ph_analytic(double phi);

struct CouplingParams {
    int m = 1;
    int n = 3;
    double ratio = 0.0; // E_L / E_J
    double tau = 0.0;   // hbar / E_J units
    double phi = 0.0;
    double theta = 0.0;
};

/**
 * E_L / E_J = sqrt((4n / (2m - 1))^2 - 1),
 * tau = (pi/4) sqrt((4n)^2 - (2m - 1)^2), phi = (pi/4)(2m - 1), theta = n pi.
 * Needs m >= 1, n != 0 and 4|n| > 2m - 1.
 */
CouplingParams solve_coupling(int m, int n);

/// theta reconstructed from ratio and tau as sqrt(1 + a^2) E_int tau.
double reconstructed_theta(const CouplingParams &params);

enum class ModelKind { ideal, charge };

std::string model_name(ModelKind kind);
ModelKind parse_model(const std::string &text);

struct CompileOptions {
    int n_qubits = 2;
    double epsilon = 0.0;
    double idle_margin = kDefaultIdleMargin;
    /// Defaults to true for the ideal model and false for the charge model.
    std::optional<bool> nonnegative_controls;
    double field = 1.0;     // B, ideal model
    double exchange = 1.0;  // J, ideal model
    double josephson = 1.0; // E_J, charge model
    double charging = 2.0;  // E_C, charge model
    PairCounting pair_counting = PairCounting::unordered;
};

struct ControlLevel {
    ControlId id;
    double height = 1.0; // multiple of the control's base amplitude
};

struct ProgramSegment {
    std::string label;
    double duration = 0.0;
    std::vector<ControlLevel> controls;
    OperatorMatrix unitary = OperatorMatrix::identity(1); // ideal limit
    double angle = 0.0;     // rotation angle realized, as reported
};

struct TimingRow {
    std::string segment;
    std::string parameter;
    double t_a = 0.0;
    double t_b = 0.0;
    double angle = 0.0;
};

/**
 * Compiled gate: serial segments plus the schedule laid out for one rise
 * parameter. reference_unitary is the product of the segment unitaries.
 */
struct GateProgram {
    std::string name;
    ModelKind kind = ModelKind::ideal;
    Model model;
    int n_qubits = 2;
    std::vector<std::pair<ControlId, double>> base_amplitudes;
    std::vector<ProgramSegment> segments;
    double epsilon = 0.0;
    double idle_margin = kDefaultIdleMargin;
    bool nonnegative_controls = true;
    double tau_op = 1.0;
    std::optional<CouplingParams> coupling;
    /// Explicit global phase carried into the reference, e.g. e^{i pi/4}.
    Complex global_phase{1.0, 0.0};
    OperatorMatrix reference_unitary = OperatorMatrix::identity(2);
    /// The gate this program is meant to realize (up to global phase).
    OperatorMatrix target = OperatorMatrix::identity(2);
    Schedule schedule;

    [[nodiscard]] double duration() const { return schedule.total_duration(); }
    /// Start and end time of every segment in the current layout.
    [[nodiscard]] std::vector<std::pair<double, double>> windows() const;
    /// Same program laid out for another rise parameter.
    [[nodiscard]] GateProgram with_epsilon(double epsilon) const;
    [[nodiscard]] std::vector<TimingRow> timing_table() const;
    /// Number of segments with exactly this label, e.g. "U_ph[0,1]".
    [[nodiscard]] std::size_t count_segments(const std::string &label) const;
};

/// Rebuilds schedule and reference unitary from segments and layout fields.
void layout_program(GateProgram &program);

/// H_i e^{i pi/4} e^{-i pi sx_j/4} e^{i pi sx_i/4} U2b(pi/4) e^{i pi sx_i/2}
/// U2b(pi/4) H_i, right factor first in time.
GateProgram ideal_cnot_program(int i, int j, const CompileOptions &options = {});

/// H_j, CNOT, H_j on the ideal model.
GateProgram ideal_cpf_program(int i, int j, const CompileOptions &options = {});

/// Joint E_J pulse of length tau with both charging energies off.
GateProgram u_ph_program(int i, int j, const CouplingParams &params,
                         const CompileOptions &options = {});

/// Exchange pulse realizing u2b(gamma) on the ideal model.
GateProgram u2b_program(int i, int j, double gamma,
                        const CompileOptions &options = {});

/**
 * U_ph, z_i(pi), U_ph, then single-qubit z corrections of magnitude phi on
 * both qubits. The correction signs are the ones whose product validates
 * against diag(1, 1, 1, -1); InvalidArgument if none does.
 */
GateProgram cpf_program(int i, int j, const CouplingParams &params,
                        const CompileOptions &options = {});

/// H_j, CPF, H_j on the charge model.
GateProgram charge_cnot_program(int i, int j, const CouplingParams &params,
                                const CompileOptions &options = {});

/// Ideal: one pulse along (B, 0, B)/sqrt(2). Charge: z(pi/2) x(pi/2) z(pi/2).
GateProgram hadamard_program(int j, ModelKind kind,
                             const CompileOptions &options = {});

/// Largest basis-column deviation between the simulated propagator and the
/// reference after optimal global phase alignment.
double reference_deviation(const GateProgram &program,
                           const OperatorMatrix &simulated);

} // namespace pulseq
