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
 * @file pulse.hpp
 * Rectangular control pulses with tanh kink/anti-kink edges and the
 * per-parameter schedules built from them.
 */
#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pulseq {

inline constexpr double kDefaultIdleMargin = 10.0;

/**
 * Rectangular pulse of unit height centered edges at rise_center and
 * fall_center:
 *
 *   P(t) = 1/2 [tanh((t - t_a) / (eps/2)) + tanh((t_b - t) / (eps/2))]
 *
 * The rise/fall time is about 2 eps. eps == 0 is the sharp limit, an
 * exact indicator of [t_a, t_b).
 */
struct RectPulse {
    double rise_center = 0.0; // t_a
    double fall_center = 0.0; // t_b
    double epsilon = 0.0;
    double height = 1.0;

    [[nodiscard]] double width() const noexcept {
        return fall_center - rise_center;
    }
    [[nodiscard]] bool is_sharp() const noexcept { return epsilon == 0.0; }
    /// Width exceeds two rise parameters, so the pulse reaches ~tanh(2).
    [[nodiscard]] bool reaches_full_height() const noexcept {
        return width() > 2.0 * epsilon;
    }
    /// Throws InvalidArgument for non-positive width or negative epsilon.
    void validate() const;

    auto operator<=>(const RectPulse &) const = default;
};

/// Envelope value times height.
double rect_value(const RectPulse &pulse, double t);

enum class ControlKind { charging, josephson, field_x, field_y, field_z, exchange };

/**
 * Identifies one scheduled control: E_C[i], E_J[i], B_x[i], B_y[i], B_z[i]
 * or J[i,j] (stored with qubit < partner).
 */
struct ControlId {
    ControlKind kind = ControlKind::charging;
    int qubit = 0;
    int partner = -1;

    static ControlId charging(int q) { return {ControlKind::charging, q, -1}; }
    static ControlId josephson(int q) { return {ControlKind::josephson, q, -1}; }
    static ControlId field(char axis, int q);
    static ControlId exchange(int i, int j);

    /// Parses the names produced by name(), e.g. "E_J[1]" or "J[0,1]".
    static ControlId parse(std::string_view text);
    [[nodiscard]] std::string name() const;

    auto operator<=>(const ControlId &) const = default;
};

struct ParamSchedule {
    ControlId parameter;
    double base_amplitude = 0.0;
    std::vector<RectPulse> pulses;

    /// base_amplitude * sum of pulse values.
    [[nodiscard]] double value(double t) const;
};

/**
 * A set of per-control schedules over [0, total_duration]. Immutable once
 * built; ideal_limit() and validate_idle() return new values.
 */
class Schedule {
  public:
    Schedule() = default;
    Schedule(std::vector<ParamSchedule> params, double total_duration,
             bool nonnegative_controls = false);

    [[nodiscard]] const std::vector<ParamSchedule> &params() const noexcept {
        return params_;
    }
    [[nodiscard]] double total_duration() const noexcept { return duration_; }
    [[nodiscard]] bool nonnegative_controls() const noexcept {
        return nonnegative_;
    }

    [[nodiscard]] const ParamSchedule *find(const ControlId &id) const;
    [[nodiscard]] bool contains(const ControlId &id) const {
        return find(id) != nullptr;
    }

    /// Control value at t. Throws InvalidArgument for an unknown control.
    [[nodiscard]] double value(const ControlId &id, double t) const;
    /// Control value at t, or 0 when the control is not scheduled.
    [[nodiscard]] double value_or_zero(const ControlId &id, double t) const;

    /// Sorted, de-duplicated pulse edges strictly inside (0, duration).
    [[nodiscard]] std::vector<double> breakpoints() const;
    /// Smallest positive epsilon over all pulses, if any pulse is smooth.
    [[nodiscard]] std::optional<double> min_epsilon() const;
    [[nodiscard]] double max_epsilon() const;
    /// Shortest pulse width, if there are pulses at all.
    [[nodiscard]] std::optional<double> min_width() const;
    [[nodiscard]] std::size_t pulse_count() const;

  private:
    std::vector<ParamSchedule> params_;
    double duration_ = 0.0;
    bool nonnegative_ = false;
};

/// Same schedule with every pulse made sharp (eps -> 0).
Schedule ideal_limit(const Schedule &schedule);

struct IdleViolation {
    ControlId parameter;
    std::size_t first = 0;  // index of the earlier pulse
    std::size_t second = 0; // index of the later pulse
    double gap = 0.0;
    double required = 0.0;

    [[nodiscard]] std::string describe() const;
};

/**
 * Checks that consecutive pulses on the same control are separated by at
 * least margin * eps (eps taken as the larger of the two pulses' values).
 * Reports rather than throws.
 */
std::vector<IdleViolation> validate_idle(const Schedule &schedule,
                                         double margin = kDefaultIdleMargin);

/// Pulses whose tails would be cut off by t = 0 or t = total_duration,
/// i.e. closer than margin * eps to either end.
std::vector<std::string> validate_boundaries(const Schedule &schedule,
                                             double margin = kDefaultIdleMargin);

} // namespace pulseq
