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

#include <catch2/catch.hpp>

#include <cmath>

#include "pulseq/hamiltonian.hpp"
#include "pulseq/integrator.hpp"
#include "pulseq/pulse.hpp"
#include "pulseq/gatecomp.hpp"

using namespace pulseq;
using Catch::Matchers::WithinAbs;

namespace {
double envelope(double ta, double tb, double eps, double t) {
    return 0.5 * (std::tanh((t - ta) / (eps / 2)) + std::tanh((tb - t) / (eps / 2)));
}
} // namespace

TEST_CASE("rect_value matches the kink/anti-kink envelope", "[pulse]") {
    const RectPulse p{1.0, 5.0, 0.1, 1.0};
    for (double t : {0.0, 0.95, 1.0, 1.1, 3.0, 4.97, 5.2, 7.0}) {
        CHECK_THAT(rect_value(p, t), WithinAbs(envelope(1.0, 5.0, 0.1, t), 1e-15));
    }
    CHECK_THAT(rect_value(p, 3.0), WithinAbs(1.0, 1e-12));
    CHECK_THAT(rect_value(p, 1.0), WithinAbs(0.5, 1e-12));
    CHECK(rect_value(p, 1.1) >= std::tanh(2.0) - 1e-12);
    CHECK_THAT(rect_value(p, 1.1), WithinAbs(0.5 * (std::tanh(2.0) + std::tanh(78.0)), 1e-15));

    const RectPulse scaled{1.0, 5.0, 0.1, -2.0};
    CHECK_THAT(rect_value(scaled, 3.0), WithinAbs(-2.0, 1e-11));
}

TEST_CASE("rect_value is mirror symmetric and rises monotonically", "[pulse]") {
    const RectPulse p{2.0, 3.0, 0.2, 1.0};
    const double mid = 2.5;
    for (int k = 0; k < 150; ++k) {
        const double t = 1.0 + 0.01 * k;
        // P(t) = P(2 mid - t): the envelope is even about the midpoint.
        CHECK_THAT(rect_value(p, t), WithinAbs(rect_value(p, 2 * mid - t), 1e-14));
        CHECK(rect_value(p, t + 0.01) >= rect_value(p, t));
    }
}

TEST_CASE("sharp pulses are exact indicators and smooth ones converge to them", "[pulse]") {
    const RectPulse sharp{1.0, 2.0, 0.0, 1.0};
    CHECK(rect_value(sharp, 0.999) == 0.0);
    CHECK(rect_value(sharp, 1.0) == 1.0);
    CHECK(rect_value(sharp, 1.5) == 1.0);
    CHECK(rect_value(sharp, 2.0) == 0.0);
    for (double t : {0.9, 1.05, 1.95, 2.1}) {
        double last = 1.0;
        for (double eps : {1e-1, 1e-2, 1e-3}) {
            const double err = std::abs(rect_value({1.0, 2.0, eps, 1.0}, t) - rect_value(sharp, t));
            CHECK(err <= last + 1e-15);
            last = err;
        }
        CHECK(last < 1e-12);
    }
}

TEST_CASE("RectPulse validation", "[pulse]") {
    CHECK_THROWS_AS((RectPulse{2.0, 1.0, 0.1, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((RectPulse{1.0, 2.0, -0.1, 1.0}.validate()), InvalidArgument);
    CHECK(RectPulse{0.0, 1.0, 0.1, 1.0}.reaches_full_height());
    CHECK_FALSE(RectPulse{0.0, 0.15, 0.1, 1.0}.reaches_full_height());
}

TEST_CASE("control identifiers print and parse", "[pulse]") {
    for (const auto &id : {ControlId::charging(0), ControlId::josephson(1),
                           ControlId::field('x', 2), ControlId::field('z', 0),
                           ControlId::exchange(0, 1)}) {
        CHECK(ControlId::parse(id.name()) == id);
    }
    CHECK(ControlId::josephson(1).name() == "E_J[1]");
    CHECK(ControlId::exchange(1, 0) == ControlId::exchange(0, 1));
    CHECK_THROWS_AS(ControlId::parse("E_Q[0]"), InvalidArgument);
    CHECK_THROWS_AS(ControlId::exchange(1, 1), InvalidArgument);
}

TEST_CASE("schedule values sum base amplitude times pulses", "[pulse]") {
    const double eps = 0.01;
    Schedule s({{ControlId::josephson(0), 2.0, {{0.5, 1.5, eps, 1.0}, {1.7, 2.7, eps, 0.5}}},
                {ControlId::charging(0), 1.0, {}}},
               3.0);
    CHECK(s.value(ControlId::charging(0), 1.0) == 0.0);
    CHECK_THAT(s.value(ControlId::josephson(0), 1.0), WithinAbs(2.0, 1e-12));
    CHECK_THAT(s.value(ControlId::josephson(0), 2.2), WithinAbs(1.0, 1e-12));
    // Middle of a 20-eps gap: both tails are far down.
    CHECK(std::abs(s.value(ControlId::josephson(0), 1.6)) < 1e-6 * 2.0);
    CHECK_THROWS_AS(s.value(ControlId::josephson(1), 1.0), InvalidArgument);
    CHECK(s.value_or_zero(ControlId::josephson(1), 1.0) == 0.0);
    CHECK(s.pulse_count() == 2);
    CHECK(*s.min_width() == Approx(1.0));
    CHECK(s.max_epsilon() == eps);
    CHECK(s.breakpoints() == std::vector<double>{0.5, 1.5, 1.7, 2.7});
}

TEST_CASE("ideal_limit removes every rise parameter", "[pulse]") {
    Schedule s({{ControlId::charging(0), 1.0, {{0.5, 1.5, 0.05, 1.0}}}}, 2.0);
    const auto sharp = ideal_limit(s);
    CHECK(sharp.max_epsilon() == 0.0);
    CHECK(sharp.value(ControlId::charging(0), 0.6) == 1.0);
    CHECK(sharp.value(ControlId::charging(0), 1.6) == 0.0);
    CHECK(sharp.value(ControlId::charging(0), 0.4) == 0.0);
}

TEST_CASE("validate_idle reports gaps shorter than the margin", "[pulse]") {
    const double eps = 0.01;
    Schedule ok({{ControlId::charging(0), 1.0, {{0.2, 1.0, eps, 1.0}, {1.1, 2.0, eps, 1.0}}}}, 2.2);
    CHECK(validate_idle(ok, 10.0).empty());
    Schedule tight({{ControlId::charging(0), 1.0, {{0.2, 1.0, eps, 1.0}, {1.01, 2.0, eps, 1.0}}}}, 2.2);
    const auto v = validate_idle(tight, 10.0);
    REQUIRE(v.size() == 1);
    CHECK(v[0].first == 0);
    CHECK(v[0].second == 1);
    CHECK_THAT(v[0].gap, WithinAbs(eps, 1e-12));
    CHECK(v[0].describe().find("E_C[0]") != std::string::npos);

    Schedule edge({{ControlId::charging(0), 1.0, {{0.01, 1.0, eps, 1.0}}}}, 1.5);
    CHECK_FALSE(validate_boundaries(edge, 10.0).empty());
}

TEST_CASE("compiled gate schedules respect the idle margin", "[pulse]") {
    CompileOptions opts;
    opts.epsilon = 0.01;
    const auto cnot = charge_cnot_program(0, 1, solve_coupling(1, 3), opts);
    CHECK(validate_idle(cnot.schedule, opts.idle_margin).empty());
    CHECK(validate_boundaries(cnot.schedule, opts.idle_margin).empty());
    const auto ideal = ideal_cnot_program(0, 1, opts);
    CHECK(validate_idle(ideal.schedule, opts.idle_margin).empty());
}

TEST_CASE("ideal-limit and small-eps evolutions agree", "[pulse]") {
    CompileOptions opts;
    opts.epsilon = 1e-4 * 0.5; // 1e-4 tau_op with E_C = 2
    const auto smooth = charge_cnot_program(0, 1, solve_coupling(1, 3), opts);
    const auto sharp = smooth.with_epsilon(0.0);
    const auto psi = StateVector::from_bits("11");
    IntegratorConfig cfg;
    cfg.dt = default_time_step(smooth.schedule);
    const auto a = evolve(psi, make_hamiltonian(smooth.model, smooth.schedule), 0.0,
                          smooth.duration(), cfg);
    const auto b = evolve(psi, make_hamiltonian(sharp.model, sharp.schedule), 0.0,
                          sharp.duration(), cfg);
    CHECK(fidelity_overlap(a.final_state, b.final_state) >= 1.0 - 1e-6);
}
