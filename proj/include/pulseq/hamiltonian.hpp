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
 * @file hamiltonian.hpp
 * Time-dependent Hamiltonians for the two register models.
 *
 * Ideal qubits:
 *   H = - sum_i B_i . sigma^(i) - 1/2 sum_{i<j} J_ij (sx sx + sy sy)
 *
 * Charge qubits coupled through a shared inductor:
 *   H = - 1/2 sum_i [E_Ci sz^(i) + E_Ji sx^(i)] - sum_pairs g_ij sy sy,
 *   g_ij = E_Ji E_Jj / E_L.
 *
 * With PairCounting::unordered (the default) each unordered pair
 * contributes once, so two qubits with equal E_J see -E_J^2/E_L sy sy.
 * PairCounting::ordered sums over i != j and doubles the coupling.
 */
#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "pulseq/pulse.hpp"
#include "pulseq/qcore.hpp"

namespace pulseq {

/**
 * Hermitian operator-valued function of time. Evaluation is pure and may
 * run concurrently. `breakpoints` lists times where H(t) may jump; solvers
 * and quadratures split their grids there.
 */
class HamiltonianFn {
  public:
    using Evaluator = std::function<void(double, CMatrix &)>;

    HamiltonianFn(int n_qubits, Evaluator evaluator,
                  std::vector<double> breakpoints = {});

    static HamiltonianFn constant(const OperatorMatrix &h);
    /// f(t) * h for a fixed operator h.
    static HamiltonianFn scaled(std::function<double(double)> envelope,
                                const OperatorMatrix &h);

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<double> &breakpoints() const noexcept {
        return breakpoints_;
    }

    /// Writes H(t) into `out`, resizing it if needed.
    void evaluate(double t, CMatrix &out) const;
    [[nodiscard]] OperatorMatrix operator()(double t) const;

  private:
    int n_qubits_;
    Eigen::Index dim_;
    Evaluator evaluator_;
    std::vector<double> breakpoints_;
};

struct IdealModel {
    int n_qubits = 2;
};

enum class PairCounting { unordered, ordered };

struct ChargeModel {
    int n_qubits = 2;
    double coupling_energy = 0.0; // E_L
    PairCounting pair_counting = PairCounting::unordered;

    /// sy sy coefficient per unit E_Ji E_Jj.
    [[nodiscard]] double pair_factor() const;
};

using Model = std::variant<IdealModel, ChargeModel>;

int model_qubits(const Model &model);

/// Throws InvalidArgument when the schedule drives a control the model does
/// not have, addresses a qubit out of range, or couples qubits with E_L <= 0.
void check_controls(const Model &model, const Schedule &schedule);

OperatorMatrix ideal_hamiltonian(const IdealModel &model,
                                 const Schedule &schedule, double t);
OperatorMatrix charge_hamiltonian(const ChargeModel &model,
                                  const Schedule &schedule, double t);

/// Precompiled evaluator for the model driven by the schedule. The schedule
/// is copied; breakpoints are the schedule's pulse edges.
HamiltonianFn make_hamiltonian(const Model &model, Schedule schedule);

/**
 * Two charge qubits with equal Josephson energy, charging terms off:
 *   H_ph = -E_J/2 sx^(0) - E_J/2 sx^(1) - (E_J^2/E_L) sy sy.
 */
OperatorMatrix coupled_pair_hamiltonian(double josephson,
                                        double coupling_energy);

/// R_y = exp[-i pi/4 (sy^(0) + sy^(1))] on two qubits.
OperatorMatrix ry_frame();

/**
 * Closed form of R_y^dagger H_ph R_y:
 *   -E_int [[a, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, -a]],
 * E_int = E_J^2 / E_L, a = E_L / E_J. It does not mix span{|00>, |11>}
 * with span{|01>, |10>}.
 */
OperatorMatrix transformed_hph(double josephson, double coupling_energy);

} // namespace pulseq
