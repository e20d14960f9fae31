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

#include "pulseq/device.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pulseq/qcore.hpp"

namespace pulseq::device {

namespace {

void require_positive(double value, const char *name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidArgument(std::string(name) + " must be positive");
    }
}

} // namespace

void DeviceParams::validate() const {
    require_positive(charging_energy, "charging_energy");
    require_positive(josephson_energy0, "josephson_energy0");
    require_positive(gate_capacitance, "gate_capacitance");
    require_positive(junction_capacitance, "junction_capacitance");
    require_positive(inductance, "inductance");
    require_positive(reference_energy, "reference_energy");
}

double gate_charge_energy_reduced(double charging_energy, double gate_charge) {
    require_positive(charging_energy, "charging_energy");
    return 4.0 * charging_energy * (gate_charge - 1.0);
}

double gate_charge_energy(double charging_energy, double gate_capacitance,
                          double gate_voltage) {
    return gate_charge_energy_reduced(
        charging_energy, gate_capacitance * gate_voltage / kElementaryCharge);
}

double effective_josephson(double josephson_energy0, double flux_ratio) {
    require_positive(josephson_energy0, "josephson_energy0");
    // cos(pi/2) is not exactly zero in floating point.
    const double c = std::cos(std::numbers::pi * flux_ratio);
    return 2.0 * josephson_energy0 * (std::abs(c) < 1e-15 ? 0.0 : c);
}

double capacitance_factor(double junction_capacitance,
                          double gate_capacitance) {
    require_positive(junction_capacitance, "junction_capacitance");
    require_positive(gate_capacitance, "gate_capacitance");
    const double two_cj = 2.0 * junction_capacitance;
    const double c_qb = 1.0 / (1.0 / two_cj + 1.0 / gate_capacitance);
    const double r = two_cj / c_qb;
    return r * r;
}

double coupling_energy(double inductance, double junction_capacitance,
                       double gate_capacitance) {
    require_positive(inductance, "inductance");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return kFluxQuantum * kFluxQuantum / (pi2 * inductance) *
           capacitance_factor(junction_capacitance, gate_capacitance);
}

double charging_energy_from_capacitances(double gate_capacitance,
                                         double junction_capacitance) {
    require_positive(junction_capacitance, "junction_capacitance");
    require_positive(gate_capacitance, "gate_capacitance");
    return kElementaryCharge * kElementaryCharge /
           (2.0 * (gate_capacitance + 2.0 * junction_capacitance));
}

UnitSystem::UnitSystem(double reference_energy) : ref_(reference_energy) {
    if (!(reference_energy > 0.0) || !std::isfinite(reference_energy)) {
        throw InvalidArgument("reference energy must be positive and finite");
    }
}

ControlEnergies UnitSystem::to_dimensionless(
    const ControlEnergies &energies) const {
    ControlEnergies out = energies;
    for (double &e : out.charging) {
        e /= ref_;
    }
    for (double &e : out.josephson) {
        e /= ref_;
    }
    out.coupling /= ref_;
    return out;
}

ControlEnergies UnitSystem::to_physical(
    const ControlEnergies &coefficients) const {
    ControlEnergies out = coefficients;
    for (double &e : out.charging) {
        e *= ref_;
    }
    for (double &e : out.josephson) {
        e *= ref_;
    }
    out.coupling *= ref_;
    return out;
}

ControlEnergies control_energies(const DeviceParams &params, int n_qubits,
                                 double gate_charge, double flux_ratio) {
    params.validate();
    dimension_of(n_qubits);
    ControlEnergies out;
    out.charging.assign(
        static_cast<std::size_t>(n_qubits),
        gate_charge_energy_reduced(params.charging_energy, gate_charge));
    out.josephson.assign(
        static_cast<std::size_t>(n_qubits),
        effective_josephson(params.josephson_energy0, flux_ratio));
    out.coupling = coupling_energy(params.inductance,
                                   params.junction_capacitance,
                                   params.gate_capacitance);
    return out;
}

std::vector<std::string> regime_warnings(const ControlEnergies &energies) {
    std::vector<std::string> warnings;
    const std::size_t n =
        std::min(energies.charging.size(), energies.josephson.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double ec = std::abs(energies.charging[i]);
        const double ej = std::abs(energies.josephson[i]);
        if (ej > 0.0 && ec > 0.0 && ej > 0.1 * ec) {
            std::ostringstream msg;
            msg << "qubit " << i << ": E_J/E_C = " << ej / ec
                << " is not << 1; two-state truncation may be inaccurate";
            warnings.push_back(msg.str());
        }
    }
    if (!energies.josephson.empty() && energies.coupling <= 0.0) {
        warnings.emplace_back("coupling energy E_L is not positive");
    }
    return warnings;
}

} // namespace pulseq::device
