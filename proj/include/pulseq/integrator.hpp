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
 * @file integrator.hpp
 * Fixed-step classical Runge-Kutta integration of i d/dt psi = H(t) psi.
 *
 * The interval is split at the Hamiltonian's breakpoints and each piece is
 * covered by equal steps no longer than dt. Stage times that land exactly
 * on a piece boundary are moved one ulp inwards, so a sharp pulse edge is
 * always sampled from the side that belongs to the current piece. With
 * that, an ideal-limit schedule is integrated with plain RK4 accuracy
 * instead of a first-order error from the discontinuity.
 */
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulseq/hamiltonian.hpp"
#include "pulseq/pulse.hpp"
#include "pulseq/qcore.hpp"

namespace pulseq {

/// Non-finite amplitudes during integration, carrying where it happened.
class NumericalError : public std::runtime_error {
  public:
    NumericalError(const std::string &what, std::size_t step, double time);

    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] double time() const noexcept { return time_; }

  private:
    std::size_t step_;
    double time_;
};

inline constexpr double kDefaultMaxStep = 1e-3;

struct IntegratorConfig {
    double dt = kDefaultMaxStep;
    /// Renormalize the state every k steps; nullopt leaves drift visible.
    std::optional<std::size_t> renormalize_every;
    /// Steps between recorded trajectory samples (the final state is
    /// always recorded).
    std::size_t record_stride = 1;

    void validate() const;
};

/// min(eps_min / 10, width_min / 100, 1e-3) for the schedule.
double default_time_step(const Schedule &schedule);

/// Config with the default step for `schedule`.
IntegratorConfig default_integrator(const Schedule &schedule);

/**
 * Reasons the step violates the resolution rules (dt <= eps/10 for every
 * smooth pulse and dt <= width/100 for the shortest pulse). Empty when the
 * step is fine. The integrator itself does not enforce these.
 */
std::vector<std::string> check_time_step(double dt, const Schedule &schedule);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> probabilities;
    StateVector final_state;
    std::size_t steps = 0;
    /// Largest |norm - 1| seen after any step.
    double max_norm_drift = 0.0;
};

Trajectory evolve(const StateVector &psi0, const HamiltonianFn &h, double t0,
                  double t1, const IntegratorConfig &cfg);

/// Full propagator; column k is the evolved basis state k.
OperatorMatrix propagator(const HamiltonianFn &h, double t0, double t1,
                          const IntegratorConfig &cfg);

/// exp(-i H t) from a Hermitian eigendecomposition. Throws InvalidArgument
/// when H is not Hermitian.
OperatorMatrix reference_expm(const OperatorMatrix &h, double t);

/// CSV with header "t,p_00,p_01,..." and 12 significant digits.
void write_trajectory_csv(std::ostream &out, const Trajectory &trajectory);

/// printf-style "%.11e" used for every exported float.
std::string format_float(double value);

} // namespace pulseq
