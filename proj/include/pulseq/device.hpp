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
 * @file device.hpp
 * Maps charge-qubit circuit parameters onto the control energies that enter
 * the Hamiltonian, and fixes the dimensionless unit system (hbar = 1,
 * energies in units of a reference energy, times in hbar / E_ref).
 *
 * Physical functions use SI units (farad, volt, henry, joule). The flux
 * quantum is Phi_0 = hbar / 2e; only the ratio Phi_X / Phi_0 enters the
 * Josephson energy, so the convention only matters for coupling_energy().
 *
 * The two-state truncation assumes E_C << Delta and k_B T << E_C. Those
 * conditions are not modeled.
 */
#pragma once

#include <string>
#include <vector>

namespace pulseq::device {

inline constexpr double kElementaryCharge = 1.602176634e-19; // C
inline constexpr double kHbar = 1.054571817e-34;             // J s
inline constexpr double kFluxQuantum = kHbar / (2.0 * kElementaryCharge);
inline constexpr double kHbarMicroEvPs = 0.6582119569;       // ueV ps
inline constexpr double kMicroEv = 1e-6 * kElementaryCharge; // J

struct DeviceParams {
    double charging_energy = 0.0;      // E_C = e^2 / 2(C_g + 2 C_J0)
    double josephson_energy0 = 0.0;    // single-junction E_J0
    double gate_capacitance = 0.0;     // C_g
    double junction_capacitance = 0.0; // C_J0
    double inductance = 0.0;           // L
    double reference_energy = 0.0;     // E_ref

    /// Throws InvalidArgument unless every parameter is strictly positive.
    void validate() const;
};

/// Per-qubit sigma_z and sigma_x sources plus the shared coupling scale.
struct ControlEnergies {
    std::vector<double> charging;  // E_Ci
    std::vector<double> josephson; // E_Ji
    double coupling = 0.0;         // E_L
};

/// E_Ci = 4 E_C (C_g V_g / e - 1). Zero at the degeneracy point.
double gate_charge_energy(double charging_energy, double gate_capacitance,
                          double gate_voltage);

/// Same as gate_charge_energy with the reduced gate charge n_g = C_g V_g / e.
double gate_charge_energy_reduced(double charging_energy, double gate_charge);

/// E_J(Phi_X) = 2 E_J0 cos(pi Phi_X / Phi_0), taking flux_ratio = Phi_X/Phi_0.
double effective_josephson(double josephson_energy0, double flux_ratio);

/// (2 C_J0 / C_qb)^2 with 1/C_qb = 1/(2 C_J0) + 1/C_g.
double capacitance_factor(double junction_capacitance, double gate_capacitance);

/// E_L = Phi_0^2 / (pi^2 L) * (2 C_J0 / C_qb)^2, in joules.
double coupling_energy(double inductance, double junction_capacitance,
                       double gate_capacitance);

/// Charging energy e^2 / 2(C_g + 2 C_J0), in joules.
double charging_energy_from_capacitances(double gate_capacitance,
                                         double junction_capacitance);

/**
 * Dimensionless units: energies divided by E_ref, times measured in
 * hbar / E_ref.
 */
class UnitSystem {
  public:
    explicit UnitSystem(double reference_energy);

    [[nodiscard]] double reference_energy() const noexcept { return ref_; }

    [[nodiscard]] double to_dimensionless(double energy) const {
        return energy / ref_;
    }
    [[nodiscard]] double to_physical(double coefficient) const {
        return coefficient * ref_;
    }
    [[nodiscard]] ControlEnergies to_dimensionless(
        const ControlEnergies &energies) const;
    [[nodiscard]] ControlEnergies to_physical(
        const ControlEnergies &coefficients) const;

    /// Physical time for a dimensionless duration; `hbar` must be given in
    /// the same energy unit as E_ref times the desired time unit.
    [[nodiscard]] double time_to_physical(double duration, double hbar) const {
        return duration * hbar / ref_;
    }
    [[nodiscard]] double time_to_dimensionless(double time, double hbar) const {
        return time * ref_ / hbar;
    }

  private:
    double ref_;
};

/// Control energies for one qubit type repeated n times, with E_L derived
/// from the circuit.
ControlEnergies control_energies(const DeviceParams &params, int n_qubits,
                                 double gate_charge, double flux_ratio);

/// Soft checks of the two-state operating regime. Never throws.
std::vector<std::string> regime_warnings(const ControlEnergies &energies);

} // namespace pulseq::device
