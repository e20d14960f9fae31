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
#include <random>

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

oracle::M simulate_propagator(const GateProgram &program, double dt = 0.0) {
    auto cfg = default_integrator(program.schedule);
    if (dt > 0.0) {
        cfg.dt = dt;
    }
    return propagator(make_hamiltonian(program.model, program.schedule), 0.0,
                      program.duration(), cfg)
        .entries();
}

oracle::M hadamard2() {
    oracle::M h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

} // namespace

TEST_CASE("CNOT matrix", "[gatecomp]") {
    const auto c = cnot_matrix(0, 1, 2).entries();
    CHECK(oracle::max_norm(c * oracle::ket("10") - oracle::ket("11")) == 0.0);
    CHECK(oracle::max_norm(c * oracle::ket("01") - oracle::ket("01")) == 0.0);
    CHECK(oracle::max_norm(c * c - oracle::M::Identity(4, 4)) == 0.0);
    CHECK(oracle::max_norm(c - oracle::cnot(0, 1, 2)) == 0.0);
    CHECK(oracle::max_norm(cnot_matrix(2, 0, 3).entries() - oracle::cnot(2, 0, 3)) == 0.0);
    CHECK_THROWS_AS(cnot_matrix(1, 1, 2), InvalidArgument);
}

TEST_CASE("two-qubit exchange gate", "[gatecomp]") {
    CHECK(oracle::max_norm(u2b(0.0).entries() - oracle::M::Identity(4, 4)) == 0.0);
    const auto u = u2b(oracle::kPi / 2).entries();
    CHECK(oracle::max_norm(u * oracle::ket("01") - oracle::kI * oracle::ket("10")) < 1e-15);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int k = 0; k < 5; ++k) {
        const double a = d(rng);
        const double b = d(rng);
        CHECK(oracle::max_norm(u2b(a).entries() * u2b(b).entries() - u2b(a + b).entries()) < 1e-14);
        // exp(i gamma (XX + YY)/2).
        CHECK(oracle::max_norm(u2b(a).entries() -
                               oracle::expm(kron(X(), X()) + kron(Y(), Y()), -a / 2)) < 1e-13);
    }
}

TEST_CASE("coupling solver", "[gatecomp]") {
    const auto p = solve_coupling(1, 3);
    CHECK(std::abs(p.ratio - std::sqrt(143.0)) <= 1e-12);
    CHECK(std::abs(p.tau - oracle::kPi / 4 * std::sqrt(143.0)) <= 1e-12);
    CHECK(p.phi == Approx(oracle::kPi / 4));
    CHECK(p.theta == Approx(3 * oracle::kPi));
    CHECK(solve_coupling(1, 1).ratio == Approx(std::sqrt(15.0)).epsilon(1e-14));
    CHECK_THROWS_AS(solve_coupling(1, 0), InvalidArgument);
    CHECK_THROWS_AS(solve_coupling(0, 3), InvalidArgument);
    CHECK_THROWS_AS(solve_coupling(3, 1), InvalidArgument); // 4 < 5: ratio imaginary
    for (int m = 1; m <= 3; ++m) {
        for (int n = 1; n <= 6; ++n) {
            if (4 * n <= 2 * m - 1) {
                continue;
            }
            const auto q = solve_coupling(m, n);
            // sqrt(1 + a^2) E_int tau, with E_int = E_J / a in units of E_J.
            const double theta = std::sqrt(1 + q.ratio * q.ratio) / q.ratio * q.tau;
            CHECK(theta == Approx(n * oracle::kPi).epsilon(1e-13));
            CHECK(reconstructed_theta(q) == Approx(n * oracle::kPi).epsilon(1e-13));
        }
    }
}

TEST_CASE("phase gate from the rotated pair", "[gatecomp]") {
    CHECK(oracle::max_norm(u_ph_analytic(0.0).entries() - oracle::M::Identity(4, 4)) < 1e-15);
    const double phi = oracle::kPi / 4;
    const auto u = u_ph_analytic(phi).entries();
    const oracle::C e = std::polar(1.0, phi);
    CHECK(std::abs(u(0, 0) - 0.5 * (1.0 + e)) < 1e-15);
    CHECK(std::abs(u(3, 0) - 0.5 * (1.0 - e)) < 1e-15);
    CHECK(oracle::max_norm(u * u_ph_analytic(-phi).entries() - oracle::M::Identity(4, 4)) < 1e-14);
    CHECK(oracle::max_norm(u - oracle::expm(kron(Y(), Y()) + kron(Z(), Z()), -phi / 2)) < 1e-14);

    // Even n: the rotated-frame evolution lands on the phase gate itself.
    const auto p = solve_coupling(1, 2);
    const oracle::M ry = oracle::expm(kron(Y(), I2()) + kron(I2(), Y()), oracle::kPi / 4);
    const double el = p.ratio;
    const oracle::M hprime = ry.adjoint() *
                             (-0.5 * kron(X(), I2()) - 0.5 * kron(I2(), X()) - (1.0 / el) * kron(Y(), Y())) *
                             ry;
    const oracle::M chain = ry * oracle::expm(hprime, p.tau) * ry.adjoint();
    CHECK(oracle::phase_distance(chain, u) <= 1e-9);
}

TEST_CASE("ideal CNOT program", "[gatecomp]") {
    const auto program = ideal_cnot_program(0, 1);
    CHECK(program.count_segments("H[0]") == 2);
    CHECK(program.count_segments("U_2b[0,1]") == 2);
    CHECK(oracle::phase_distance(program.reference_unitary.entries(), oracle::cnot(0, 1, 2)) < 1e-12);
    const auto u = simulate_propagator(program);
    CHECK(oracle::phase_distance(u, oracle::cnot(0, 1, 2)) <= 1e-6);
    CHECK(std::norm(u(2, 3)) >= 0.999); // |11> -> |10>
    CHECK(std::norm(u(0, 0)) >= 0.999);
    // The -pi/4 rotation is realized as its 2 pi complement under
    // nonnegative controls, which makes that segment the longest x pulse.
    CHECK(program.nonnegative_controls);
    for (const auto &seg : program.segments) {
        for (const auto &c : seg.controls) {
            CHECK(c.height >= 0.0);
        }
    }
}

TEST_CASE("ideal programs on other operand orders", "[gatecomp]") {
    const auto rev = ideal_cnot_program(1, 0);
    CHECK(oracle::phase_distance(simulate_propagator(rev), oracle::cnot(1, 0, 2)) <= 1e-6);
    const auto cpf = ideal_cpf_program(0, 1);
    oracle::M diag = oracle::M::Identity(4, 4);
    diag(3, 3) = -1.0;
    CHECK(oracle::phase_distance(simulate_propagator(cpf), diag) <= 1e-6);
    const auto u2 = u2b_program(0, 1, 0.9);
    CHECK(oracle::phase_distance(simulate_propagator(u2), u2b(0.9).entries()) <= 1e-6);
}

TEST_CASE("charge CPF and CNOT programs", "[gatecomp]") {
    const auto params = solve_coupling(1, 3);
    oracle::M diag = oracle::M::Identity(4, 4);
    diag(3, 3) = -1.0;

    const auto cpf = cpf_program(0, 1, params);
    const auto ucpf = simulate_propagator(cpf);
    CHECK(oracle::phase_distance(ucpf, diag) <= 1e-6);
    // Relative phase of |11> against |00> is -1.
    CHECK(std::abs(ucpf(3, 3) / ucpf(0, 0) + 1.0) < 1e-6);
    for (int k = 0; k < 4; ++k) {
        CHECK(std::norm(ucpf(k, k)) == Approx(1.0).margin(1e-9));
    }
    CHECK(cpf.count_segments("U_ph[0,1]") == 2);

    CompileOptions opts;
    opts.epsilon = 1e-3 * 0.5;
    const auto cnot = charge_cnot_program(0, 1, params, opts);
    const auto u = simulate_propagator(cnot);
    CHECK(oracle::phase_distance(u, oracle::cnot(0, 1, 2)) <= 1e-5);
    CHECK(std::norm(u(2, 3)) >= 0.999);
    CHECK(std::norm(u(1, 1)) >= 0.999);
    CHECK(cnot.count_segments("U_ph[0,1]") == 2);
    for (const auto &seg : cnot.segments) {
        if (seg.label == "U_ph[0,1]") {
            CHECK(seg.duration == Approx(oracle::kPi / 4 * std::sqrt(143.0)).epsilon(1e-14));
            for (const auto &c : seg.controls) {
                CHECK(c.id.kind == ControlKind::josephson);
            }
        }
    }
    CHECK(cnot.tau_op == Approx(0.5));
}

TEST_CASE("charge CPF for other coupling solutions", "[gatecomp]") {
    oracle::M diag = oracle::M::Identity(4, 4);
    diag(3, 3) = -1.0;
    for (auto mn : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 3}}) {
        const auto cpf = cpf_program(0, 1, solve_coupling(mn.first, mn.second));
        CHECK(oracle::phase_distance(cpf.reference_unitary.entries(), diag) <= 1e-9);
        CHECK(oracle::phase_distance(simulate_propagator(cpf), diag) <= 1e-6);
    }
}

TEST_CASE("Hadamard programs", "[gatecomp]") {
    const oracle::M h = hadamard2();
    CompileOptions single;
    single.n_qubits = 1;
    for (ModelKind kind : {ModelKind::ideal, ModelKind::charge}) {
        const auto program = hadamard_program(0, kind, single);
        const auto u = simulate_propagator(program);
        CHECK(oracle::phase_distance(u, h) <= 1e-9);
        CHECK(oracle::phase_distance(u * u, I2()) <= 1e-9);
        const oracle::V out = u * oracle::ket("0");
        CHECK(std::norm(out(0)) == Approx(0.5).margin(1e-9));
        CHECK(std::norm(out(1)) == Approx(0.5).margin(1e-9));
    }
    CHECK(hadamard_program(1, ModelKind::charge).segments.size() == 3);
    CHECK(hadamard_program(1, ModelKind::ideal).segments.size() == 1);
    const auto two = hadamard_program(1, ModelKind::charge);
    CHECK(oracle::phase_distance(two.reference_unitary.entries(), kron(I2(), h)) < 1e-12);
}

TEST_CASE("every program's ideal-limit propagator matches its reference", "[gatecomp]") {
    const auto params = solve_coupling(1, 3);
    const std::vector<GateProgram> programs = {
        ideal_cnot_program(0, 1), ideal_cpf_program(1, 0), u2b_program(0, 1, 0.3),
        u_ph_program(0, 1, params), cpf_program(1, 0, params),
        charge_cnot_program(1, 0, params), hadamard_program(0, ModelKind::charge),
        hadamard_program(1, ModelKind::ideal)};
    for (const auto &p : programs) {
        INFO(p.name << " / " << model_name(p.kind));
        const auto u = simulate_propagator(p);
        CHECK(oracle::phase_distance(u, p.reference_unitary.entries()) <= 1e-6);
        CHECK(oracle::phase_distance(u, p.target.entries()) <= 1e-6);
        CHECK(reference_deviation(p, OperatorMatrix(2, u)) <= 1e-6);
    }
}

TEST_CASE("negative rotations under either control convention", "[gatecomp]") {
    CompileOptions signed_opts;
    signed_opts.nonnegative_controls = false;
    const auto a = ideal_cnot_program(0, 1, signed_opts);
    CHECK(oracle::phase_distance(simulate_propagator(a), oracle::cnot(0, 1, 2)) <= 1e-6);
    CHECK(a.duration() < ideal_cnot_program(0, 1).duration());

    CompileOptions nonneg;
    nonneg.nonnegative_controls = true;
    const auto b = charge_cnot_program(0, 1, solve_coupling(1, 3), nonneg);
    CHECK(oracle::phase_distance(simulate_propagator(b), oracle::cnot(0, 1, 2)) <= 1e-6);
    for (const auto &seg : b.segments) {
        for (const auto &c : seg.controls) {
            CHECK(c.height >= 0.0);
        }
    }
}

TEST_CASE("layout, timing table and epsilon relayout", "[gatecomp]") {
    CompileOptions opts;
    opts.epsilon = 0.01;
    const auto p = charge_cnot_program(0, 1, solve_coupling(1, 3), opts);
    const auto w = p.windows();
    REQUIRE(w.size() == p.segments.size());
    CHECK(w.front().first == Approx(opts.idle_margin * opts.epsilon));
    for (std::size_t k = 1; k < w.size(); ++k) {
        CHECK(w[k].first - w[k - 1].second == Approx(opts.idle_margin * opts.epsilon));
    }
    CHECK(p.duration() == Approx(w.back().second + opts.idle_margin * opts.epsilon));
    const auto rows = p.timing_table();
    CHECK(rows.size() == p.schedule.pulse_count());
    const auto q = p.with_epsilon(0.02);
    CHECK(q.epsilon == 0.02);
    CHECK(q.duration() > p.duration());
    CHECK(q.segments.size() == p.segments.size());
    CHECK(oracle::max_norm(q.reference_unitary.entries() - p.reference_unitary.entries()) < 1e-15);
}
