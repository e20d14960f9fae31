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
 * @file analysis.hpp
 * Average-Hamiltonian (Magnus) terms, fidelities, rise-time sweeps and
 * power-law fits.
 *
 * Over an interval of length T:
 *   H0 = (1/T) int H(t) dt
 *   H1 = (-i / 2T) int_0^T dt2 int_0^t2 dt1 [H(t2), H(t1)]
 * so that U(T) ~ exp(-i T (H0 + H1)).
 */
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulseq/gatecomp.hpp"
#include "pulseq/hamiltonian.hpp"
#include "pulseq/qcore.hpp"

namespace pulseq {

/// Quadrature refinement did not settle within the node budget.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct QuadratureConfig {
    double rel_tol = 1e-8;
    /// Changes below this absolute max-norm count as converged, so exactly
    /// vanishing terms do not stall the relative test.
    double abs_tol = 1e-13;
    /// Upper bound on the node spacing; set to eps/10 for tanh ramps.
    double max_spacing = 0.0;
    std::size_t initial_intervals = 32;
    /// Refinement stops before level * initial_intervals exceeds this.
    std::size_t max_intervals = std::size_t{1} << 21;
};

OperatorMatrix magnus_h0(const HamiltonianFn &h, double t0, double t1,
                         const QuadratureConfig &cfg = {});
OperatorMatrix magnus_h0(const HamiltonianFn &h, double tau,
                         const QuadratureConfig &cfg = {});
OperatorMatrix magnus_h1(const HamiltonianFn &h, double t0, double t1,
                         const QuadratureConfig &cfg = {});
OperatorMatrix magnus_h1(const HamiltonianFn &h, double tau,
                         const QuadratureConfig &cfg = {});

struct MagnusTerms {
    OperatorMatrix h0_bar;
    OperatorMatrix h1_bar;
    double t0 = 0.0;
    double t1 = 0.0;
    std::string source;
};

MagnusTerms magnus_terms(const HamiltonianFn &h, double t0, double t1,
                         const QuadratureConfig &cfg = {},
                         std::string source = {});

/**
 * Coupled pair with both Josephson energies on the linear ramp
 * E_J(t) = E_J t / (2 eps) over [0, 2 eps] and charging terms off.
 */
HamiltonianFn linear_ramp_hamiltonian(double josephson, double coupling_energy,
                                      double epsilon,
                                      PairCounting counting = PairCounting::unordered);

/// Same pair on the rising tanh edge centred at eps, over [0, 2 eps].
HamiltonianFn tanh_ramp_hamiltonian(double josephson, double coupling_energy,
                                    double epsilon,
                                    PairCounting counting = PairCounting::unordered);

/**
 * Closed form of H1 for the linear ramp:
 *   -(E_J g eps / 30)(sz sy + sy sz),
 * g the sy sy coefficient at full ramp (E_J^2/E_L for unordered pairs,
 * 2 E_J^2/E_L for ordered ones, which gives E_J^3 eps / (15 E_L)).
 */
OperatorMatrix linear_ramp_h1_closed_form(double josephson,
                                          double coupling_energy,
                                          double epsilon,
                                          PairCounting counting = PairCounting::unordered);

struct FidelityEstimate {
    double fidelity = 1.0;
    double eta_dispersion = 0.0; // <eta^2> - <eta>^2
    double epsilon = 0.0;
    /// Set when |H1| T exceeds 0.3 and the expansion is doubtful.
    bool outside_validity = false;
};

/// |<U psi_in | psi_out>|^2.
FidelityEstimate gate_fidelity(const StateVector &psi_in,
                               const OperatorMatrix &u_ideal,
                               const StateVector &psi_out,
                               double epsilon = 0.0);

/// 1 - eps^2 <Delta eta^2> with eta = H1 T / eps.
FidelityEstimate fidelity_perturbative(const StateVector &psi_in,
                                       const OperatorMatrix &h1_bar,
                                       double tau, double epsilon);

/**
 * Error Hamiltonian in the interaction frame of the sharp schedule:
 *   H_err(t) = U0(t)^dagger [H_eps(t) - H_0(t)] U0(t),
 * U0 the exact propagator of the sharp-edged schedule H_0. The smooth
 * evolution factors as U_eps(T) = U0(T) U_err(T).
 */
HamiltonianFn interaction_error_hamiltonian(const Model &model,
                                            const Schedule &smooth);

/**
 * Perturbative fidelity of a program at its current epsilon, from the
 * Magnus average of the interaction-frame error Hamiltonian over the full
 * schedule duration.
 */
FidelityEstimate program_fidelity_perturbative(const GateProgram &program,
                                               const StateVector &psi_in,
                                               const QuadratureConfig &cfg = {});

struct SimulationResult {
    StateVector output;
    double success = 0.0;  // population of the ideal output basis state
    double fidelity = 0.0; // squared overlap with the ideal output
    double max_norm_drift = 0.0;
};

/// Runs the program at its current epsilon on one input. dt defaults to
/// the schedule's default step.
SimulationResult simulate_program(const GateProgram &program,
                                  const StateVector &psi_in,
                                  std::optional<double> dt = std::nullopt);

struct SweepPoint {
    double x = 0.0; // epsilon / tau_op
    double epsilon = 0.0;
    double success = 0.0;
    double fidelity = 0.0;
    double fidelity_perturbative = 1.0;
};

struct PowerFit {
    double c = 0.0;        // 1 - y = c x^2, least squares on x <= x_max
    double p = 0.0;        // log-log exponent
    double prefactor = 0.0; // exp(intercept) of the log-log fit
    double residual = 0.0; // rms of log residuals
    std::size_t quadratic_points = 0;
    std::size_t power_points = 0;
};

struct FitOptions {
    double x_max = 1.0;
    double noise_floor = 1e-10;
};

/// Fits 1 - y ~ c x^2 and 1 - y ~ a x^p. Points with 1 - y below the floor
/// are left out of the exponent fit; p is NaN with fewer than two left.
PowerFit fit_error_law(const std::vector<double> &x,
                       const std::vector<double> &y,
                       const FitOptions &options = {});

struct SweepOptions {
    unsigned jobs = 0; // 0: hardware concurrency
    std::optional<double> dt;
    bool perturbative = true;
    FitOptions fit;
    QuadratureConfig quadrature;
};

struct SweepRecord {
    std::vector<SweepPoint> samples;
    double tau_op = 1.0;
    PowerFit fit;
};

/**
 * Recompiles the program at eps = x tau_op for every grid value x,
 * simulates it on psi_in and fits the error law to 1 - success.
 * Needs at least six distinct positive grid values; samples come back
 * sorted by x regardless of worker count.
 */
SweepRecord sweep_rise_time(const GateProgram &program,
                            const StateVector &psi_in,
                            std::vector<double> x_grid, double tau_op,
                            const SweepOptions &options = {});

struct TimescaleReport {
    double josephson_micro_ev = 0.0;
    double hbar_over_ej_ps = 0.0;
    double rise_time_low_ps = 30.0;
    double rise_time_high_ps = 40.0;
    bool rise_time_exceeds_gate = false;
    std::string text;
};

TimescaleReport timescale_report(double josephson_micro_ev);

} // namespace pulseq
