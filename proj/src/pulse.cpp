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

#include "pulseq/pulse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "pulseq/qcore.hpp"

namespace pulseq {

void RectPulse::validate() const {
    if (!std::isfinite(rise_center) || !std::isfinite(fall_center) ||
        !std::isfinite(epsilon) || !std::isfinite(height)) {
        throw InvalidArgument("pulse fields must be finite");
    }
    if (!(fall_center > rise_center)) {
        throw InvalidArgument("pulse width must be positive (t_b > t_a)");
    }
    if (epsilon < 0.0) {
        throw InvalidArgument("pulse epsilon must be non-negative");
    }
}

double rect_value(const RectPulse &pulse, double t) {
    if (pulse.is_sharp()) {
        return (t >= pulse.rise_center && t < pulse.fall_center) ? pulse.height
                                                                 : 0.0;
    }
    const double w = 0.5 * pulse.epsilon;
    return 0.5 * pulse.height *
           (std::tanh((t - pulse.rise_center) / w) +
            std::tanh((pulse.fall_center - t) / w));
}

ControlId ControlId::field(char axis, int q) {
    switch (axis) {
    case 'x':
        return {ControlKind::field_x, q, -1};
    case 'y':
        return {ControlKind::field_y, q, -1};
    case 'z':
        return {ControlKind::field_z, q, -1};
    default:
        throw InvalidArgument(std::string("unknown field axis '") + axis + "'");
    }
}

ControlId ControlId::exchange(int i, int j) {
    if (i == j) {
        throw InvalidArgument("exchange coupling needs two distinct qubits");
    }
    return {ControlKind::exchange, std::min(i, j), std::max(i, j)};
}

std::string ControlId::name() const {
    std::ostringstream out;
    switch (kind) {
    case ControlKind::charging:
        out << "E_C[" << qubit << "]";
        break;
    case ControlKind::josephson:
        out << "E_J[" << qubit << "]";
        break;
    case ControlKind::field_x:
        out << "B_x[" << qubit << "]";
        break;
    case ControlKind::field_y:
        out << "B_y[" << qubit << "]";
        break;
    case ControlKind::field_z:
        out << "B_z[" << qubit << "]";
        break;
    case ControlKind::exchange:
        out << "J[" << qubit << "," << partner << "]";
        break;
    }
    return out.str();
}

namespace {

int parse_index(std::string_view text, std::string_view whole) {
    int value = -1;
    const auto *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || value < 0) {
        throw InvalidArgument("bad qubit index in control name '" +
                              std::string(whole) + "'");
    }
    return value;
}

} // namespace

ControlId ControlId::parse(std::string_view text) {
    const auto open = text.find('[');
    if (open == std::string_view::npos || text.back() != ']') {
        throw InvalidArgument("malformed control name '" + std::string(text) +
                              "'");
    }
    const std::string_view head = text.substr(0, open);
    const std::string_view args = text.substr(open + 1, text.size() - open - 2);
    if (head == "J") {
        const auto comma = args.find(',');
        if (comma == std::string_view::npos) {
            throw InvalidArgument("exchange control needs two indices: '" +
                                  std::string(text) + "'");
        }
        return exchange(parse_index(args.substr(0, comma), text),
                        parse_index(args.substr(comma + 1), text));
    }
    const int q = parse_index(args, text);
    if (head == "E_C") {
        return charging(q);
    }
    if (head == "E_J") {
        return josephson(q);
    }
    if (head.size() == 3 && head.substr(0, 2) == "B_") {
        return field(head[2], q);
    }
    throw InvalidArgument("unknown control '" + std::string(text) + "'");
}

double ParamSchedule::value(double t) const {
    double sum = 0.0;
    for (const auto &p : pulses) {
        sum += rect_value(p, t);
    }
    return base_amplitude * sum;
}

Schedule::Schedule(std::vector<ParamSchedule> params, double total_duration,
                   bool nonnegative_controls)
    : params_(std::move(params)), duration_(total_duration),
      nonnegative_(nonnegative_controls) {
    if (!(total_duration > 0.0) || !std::isfinite(total_duration)) {
        throw InvalidArgument("schedule duration must be positive");
    }
    for (std::size_t i = 0; i < params_.size(); ++i) {
        auto &ps = params_[i];
        for (std::size_t j = 0; j < i; ++j) {
            if (params_[j].parameter == ps.parameter) {
                throw InvalidArgument("control " + ps.parameter.name() +
                                      " scheduled twice");
            }
        }
        if (!std::isfinite(ps.base_amplitude)) {
            throw InvalidArgument("base amplitude of " + ps.parameter.name() +
                                  " is not finite");
        }
        for (const auto &p : ps.pulses) {
            p.validate();
            if (nonnegative_ && p.height * ps.base_amplitude < 0.0) {
                throw InvalidArgument("negative pulse on " +
                                      ps.parameter.name() +
                                      " with nonnegative_controls set");
            }
        }
        std::stable_sort(ps.pulses.begin(), ps.pulses.end(),
                         [](const RectPulse &a, const RectPulse &b) {
                             return a.rise_center < b.rise_center;
                         });
    }
}

const ParamSchedule *Schedule::find(const ControlId &id) const {
    for (const auto &ps : params_) {
        if (ps.parameter == id) {
            return &ps;
        }
    }
    return nullptr;
}

double Schedule::value(const ControlId &id, double t) const {
    const auto *ps = find(id);
    if (ps == nullptr) {
        throw InvalidArgument("control " + id.name() + " is not scheduled");
    }
    return ps->value(t);
}

double Schedule::value_or_zero(const ControlId &id, double t) const {
    const auto *ps = find(id);
    return ps == nullptr ? 0.0 : ps->value(t);
}

std::vector<double> Schedule::breakpoints() const {
    std::vector<double> points;
    for (const auto &ps : params_) {
        for (const auto &p : ps.pulses) {
            for (double edge : {p.rise_center, p.fall_center}) {
                if (edge > 0.0 && edge < duration_) {
                    points.push_back(edge);
                }
            }
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

std::optional<double> Schedule::min_epsilon() const {
    std::optional<double> best;
    for (const auto &ps : params_) {
        for (const auto &p : ps.pulses) {
            if (p.epsilon > 0.0 && (!best || p.epsilon < *best)) {
                best = p.epsilon;
            }
        }
    }
    return best;
}

double Schedule::max_epsilon() const {
    double best = 0.0;
    for (const auto &ps : params_) {
        for (const auto &p : ps.pulses) {
            best = std::max(best, p.epsilon);
        }
    }
    return best;
}

std::optional<double> Schedule::min_width() const {
    std::optional<double> best;
    for (const auto &ps : params_) {
        for (const auto &p : ps.pulses) {
            if (!best || p.width() < *best) {
                best = p.width();
            }
        }
    }
    return best;
}

std::size_t Schedule::pulse_count() const {
    std::size_t n = 0;
    for (const auto &ps : params_) {
        n += ps.pulses.size();
    }
    return n;
}

Schedule ideal_limit(const Schedule &schedule) {
    std::vector<ParamSchedule> params = schedule.params();
    for (auto &ps : params) {
        for (auto &p : ps.pulses) {
            p.epsilon = 0.0;
        }
    }
    return {std::move(params), schedule.total_duration(),
            schedule.nonnegative_controls()};
}

std::string IdleViolation::describe() const {
    std::ostringstream out;
    out << parameter.name() << ": pulses " << first << " and " << second
        << " separated by " << gap << ", need at least " << required;
    return out.str();
}

std::vector<IdleViolation> validate_idle(const Schedule &schedule,
                                         double margin) {
    if (!(margin > 0.0)) {
        throw InvalidArgument("idle margin must be positive");
    }
    std::vector<IdleViolation> violations;
    for (const auto &ps : schedule.params()) {
        for (std::size_t k = 1; k < ps.pulses.size(); ++k) {
            const auto &a = ps.pulses[k - 1];
            const auto &b = ps.pulses[k];
            const double gap = b.rise_center - a.fall_center;
            const double required = margin * std::max(a.epsilon, b.epsilon);
            // Layout arithmetic may land a few ulps short of the margin.
            const double slack =
                1e-12 * std::max(1.0, std::abs(b.rise_center));
            if (gap + slack < required || gap < 0.0) {
                violations.push_back({ps.parameter, k - 1, k, gap, required});
            }
        }
    }
    return violations;
}

std::vector<std::string> validate_boundaries(const Schedule &schedule,
                                             double margin) {
    std::vector<std::string> problems;
    const double slack = 1e-12 * std::max(1.0, schedule.total_duration());
    for (const auto &ps : schedule.params()) {
        for (std::size_t k = 0; k < ps.pulses.size(); ++k) {
            const auto &p = ps.pulses[k];
            const double clearance = margin * p.epsilon;
            if (p.rise_center + slack < clearance) {
                problems.push_back(ps.parameter.name() + ": pulse " +
                                   std::to_string(k) +
                                   " starts inside the lead-in margin");
            }
            if (p.fall_center + clearance > schedule.total_duration() + slack) {
                problems.push_back(ps.parameter.name() + ": pulse " +
                                   std::to_string(k) +
                                   " ends inside the trailing margin");
            }
        }
    }
    return problems;
}

} // namespace pulseq
