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
#include <limits>
#include <sstream>

#include "pulseq/gatecomp.hpp"
#include "pulseq/integrator.hpp"
#include "support.hpp"

using namespace pulseq;
using oracle::kron;
using oracle::I2;
using oracle::X;
using oracle::Y;
using oracle::Z;

namespace {

HamiltonianFn constant(const oracle::M &h) {
    const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(h.rows()))));
    return HamiltonianFn::constant(OperatorMatrix(n, h));
}

IntegratorConfig step(double dt) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    return cfg;
}

} // namespace

TEST_CASE("zero Hamiltonian leaves the state untouched", "[integrator]") {
    const auto psi = StateVector::from_bits("10");
    const auto traj = evolve(psi, constant(oracle::M::Zero(4, 4)), 0.0, 2.0, step(0.01));
    CHECK(oracle::max_norm(traj.final_state.amplitudes() - psi.amplitudes()) == 0.0);
    CHECK(oracle::max_norm(propagator(constant(oracle::M::Zero(4, 4)), 0.0, 1.0, step(0.1)).entries() -
                           oracle::M::Identity(4, 4)) == 0.0);
}

TEST_CASE("half Rabi period flips a single qubit", "[integrator]") {
    const double ej = 1.0;
    const auto traj = evolve(StateVector::from_bits("0"), constant(-(ej / 2) * X()), 0.0,
                             oracle::kPi / ej, step(1e-3));
    CHECK(traj.final_state.probabilities()[1] == Approx(1.0).margin(1e-12));
    // exp(i pi sx / 2)|0> = i|1>.
    CHECK(std::abs(traj.final_state[1] - oracle::kI) < 1e-10);
}

TEST_CASE("constant-H propagator matches the matrix exponential", "[integrator]") {
    const oracle::M h = 0.4 * kron(X(), Z()) - 1.1 * kron(Y(), Y()) + 0.3 * kron(I2(), X());
    const double t = 2.3;
    const auto u = propagator(constant(h), 0.0, t, step(1e-3)).entries();
    CHECK(oracle::max_norm(u - oracle::expm(h, t)) <= 1e-8);
    CHECK(oracle::max_norm(u.adjoint() * u - oracle::M::Identity(4, 4)) <= 1e-8);
    CHECK(oracle::max_norm(reference_expm(OperatorMatrix(2, h), t).entries() - oracle::expm(h, t)) <
          1e-12);
}

TEST_CASE("reference_expm of a diagonal matrix and rejection of non-Hermitian input",
          "[integrator]") {
    const double e = 0.8;
    const double t = 1.9;
    oracle::M d = oracle::M::Zero(2, 2);
    d(0, 0) = e;
    d(1, 1) = -e;
    const auto u = reference_expm(OperatorMatrix(1, d), t).entries();
    CHECK(std::abs(u(0, 0) - std::polar(1.0, -e * t)) < 1e-14);
    CHECK(std::abs(u(1, 1) - std::polar(1.0, e * t)) < 1e-14);
    oracle::M bad = oracle::M::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(reference_expm(OperatorMatrix(1, bad), 1.0), InvalidArgument);
}

TEST_CASE("block rotations of the rotated coupled pair", "[integrator]") {
    const double ej = 1.0;
    const double el = std::sqrt(143.0);
    const double eint = ej * ej / el;
    const double a = el / ej;
    const double t = 0.37;
    const auto u = reference_expm(transformed_hph(ej, el), t).entries();
    // {|01>, |10>} block: H = -E_int sx, a rotation by 2 E_int t.
    CHECK(std::abs(u(1, 1) - std::cos(eint * t)) < 1e-14);
    CHECK(std::abs(u(1, 2) - oracle::kI * std::sin(eint * t)) < 1e-14);
    // {|00>, |11>} block: -E_int (a sz - sx) with axis (n_x, 0, n_z).
    const double w = eint * std::sqrt(1 + a * a);
    const double nx = -ej / std::sqrt(el * el + ej * ej);
    const double nz = el / std::sqrt(el * el + ej * ej);
    const oracle::C c = std::cos(w * t);
    const oracle::C s = oracle::kI * std::sin(w * t);
    CHECK(std::abs(u(0, 0) - (c + s * nz)) < 1e-13);
    CHECK(std::abs(u(0, 3) - s * nx) < 1e-13);
    CHECK(std::abs(u(3, 3) - (c - s * nz)) < 1e-13);
    CHECK(std::abs(u(0, 1)) < 1e-15);
}

TEST_CASE("RK4 converges with order four", "[integrator]") {
    const oracle::M h = kron(X(), Z()) + 0.5 * kron(Z(), Y());
    const double t = 1.5;
    const auto psi = StateVector::from_bits("01");
    const oracle::V exact = oracle::expm(h, t) * psi.amplitudes();
    std::vector<double> errors;
    for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
        const auto traj = evolve(psi, constant(h), 0.0, t, step(dt));
        errors.push_back((traj.final_state.amplitudes() - exact).norm());
    }
    for (std::size_t k = 1; k < errors.size(); ++k) {
        CHECK(std::log2(errors[k - 1] / errors[k]) == Approx(4.0).margin(0.3));
    }
}

TEST_CASE("propagators compose", "[integrator]") {
    CompileOptions opts;
    opts.epsilon = 0.005;
    const auto program = charge_cnot_program(0, 1, solve_coupling(1, 3), opts);
    const auto h = make_hamiltonian(program.model, program.schedule);
    const auto cfg = default_integrator(program.schedule);
    const double t1 = 11.0;
    const double t2 = program.duration();
    const auto whole = propagator(h, 0.0, t2, cfg).entries();
    const auto split = (propagator(h, t1, t2, cfg) * propagator(h, 0.0, t1, cfg)).entries();
    CHECK(oracle::max_norm(whole - split) <= 1e-7);
}

TEST_CASE("norm drift and trajectory records on the charge CNOT", "[integrator]") {
    CompileOptions opts;
    opts.epsilon = 1e-3 * 0.5;
    const auto program = charge_cnot_program(0, 1, solve_coupling(1, 3), opts);
    auto cfg = default_integrator(program.schedule);
    cfg.record_stride = 100;
    const auto traj = evolve(StateVector::from_bits("11"),
                             make_hamiltonian(program.model, program.schedule), 0.0,
                             program.duration(), cfg);
    CHECK(traj.max_norm_drift <= 1e-9);
    CHECK(traj.final_state.probabilities()[2] >= 0.999);
    CHECK(traj.times.back() == program.duration());
    for (const auto &p : traj.probabilities) {
        double sum = 0.0;
        for (double v : p) {
            sum += v;
        }
        CHECK(sum == Approx(1.0).margin(1e-6));
    }
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    const auto text = csv.str();
    CHECK(text.rfind("t,p_00,p_01,p_10,p_11\n", 0) == 0);
    CHECK(format_float(0.1) == "1.00000000000e-01");
}

TEST_CASE("time-step rules and configuration checks", "[integrator]") {
    Schedule s({{ControlId::charging(0), 1.0, {{0.1, 0.2, 0.001, 1.0}}}}, 1.0);
    CHECK(default_time_step(s) == Approx(1e-4));
    CHECK(check_time_step(1e-4, s).empty());
    CHECK_FALSE(check_time_step(1e-3, s).empty());
    IntegratorConfig bad;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    CHECK_THROWS_AS(evolve(StateVector::from_bits("0"), constant(X()), 1.0, 0.5, step(0.1)),
                    InvalidArgument);
}

TEST_CASE("non-finite amplitudes abort with the failing step", "[integrator]") {
    const double inf = std::numeric_limits<double>::infinity();
    HamiltonianFn blowup(1, [inf](double t, CMatrix &out) {
        out = CMatrix::Zero(2, 2);
        if (t > 0.5) {
            out(0, 1) = inf;
            out(1, 0) = inf;
        }
    });
    try {
        evolve(StateVector::from_bits("0"), blowup, 0.0, 1.0, step(0.1));
        FAIL("expected NumericalError");
    } catch (const NumericalError &e) {
        CHECK(e.time() > 0.5);
        CHECK(e.step() >= 5);
    }
}
