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

#include "pulseq/analysis.hpp"
#include "pulseq/integrator.hpp"
#include "support.hpp"

using namespace pulseq;
using oracle::kron;
using oracle::I2;
using oracle::X;
using oracle::Y;
using oracle::Z;

namespace {

OperatorMatrix op(const oracle::M &m) {
    return OperatorMatrix(static_cast<int>(std::lround(std::log2(static_cast<double>(m.rows())))), m);
}

double rel(const oracle::M &a, const oracle::M &b) {
    return oracle::max_norm(a - b) / oracle::max_norm(b);
}

// log cosh without overflow.
double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2 * a)) - std::log(2.0);
}

// Integral of the tanh pulse envelope over [0, T].
double envelope_area(double ta, double tb, double eps, double total) {
    const double h = eps / 2;
    const double rise = 0.5 * h * (log_cosh((total - ta) / h) - log_cosh(-ta / h));
    const double fall = -0.5 * h * (log_cosh((tb - total) / h) - log_cosh(tb / h));
    return rise + fall;
}

// -(E_J g eps / 30)(Z Y + Y Z) with g the full-ramp sy sy coefficient.
oracle::M ramp_h1(double ej, double g, double eps) {
    return -(ej * g * eps / 30.0) * (kron(Z(), Y()) + kron(Y(), Z()));
}

} // namespace

TEST_CASE("H0 averages the Hamiltonian", "[analysis]") {
    const oracle::M h = kron(X(), Z()) + 0.3 * kron(Y(), I2());
    CHECK(oracle::max_norm(magnus_h0(HamiltonianFn::constant(op(h)), 2.0).entries() - h) <= 1e-12);

    const double eps = 0.1;
    const auto ramp = HamiltonianFn::scaled([eps](double t) { return t / (2 * eps); }, op(h));
    CHECK(oracle::max_norm(magnus_h0(ramp, 2 * eps).entries() - h / 2) <= 1e-12);

    // A tanh pulse with centred edges keeps the area of the sharp pulse up
    // to exponentially small tails, so the average matches the sharp one.
    const double ta = 1.0;
    const double tb = 9.0;
    const double total = 10.0;
    for (double e : {0.2, 0.05, 0.0125}) {
        const auto pulse = HamiltonianFn::scaled(
            [=](double t) { return rect_value({ta, tb, e, 1.0}, t); }, op(h));
        QuadratureConfig cfg;
        cfg.max_spacing = e / 10;
        const auto h0 = magnus_h0(pulse, total, cfg).entries();
        CHECK(rel(h0, (envelope_area(ta, tb, e, total) / total) * h) <= 1e-9);
        CHECK(rel(h0, ((tb - ta) / total) * h) <= 1e-9);
    }
    // Each edge cut by the interval loses eps ln 2 / 4 of area.
    const double e = 0.2;
    const auto cut = HamiltonianFn::scaled(
        [=](double t) { return rect_value({0.0, total, e, 1.0}, t); }, op(h));
    QuadratureConfig cfg;
    cfg.max_spacing = e / 10;
    const auto h0 = magnus_h0(cut, total, cfg).entries();
    CHECK(rel(h0, (envelope_area(0.0, total, e, total) / total) * h) <= 1e-9);
    CHECK(rel(h0, h) == Approx(e * std::log(2.0) / (2 * total)).epsilon(1e-6));
}

TEST_CASE("H1 vanishes for a fixed operator direction", "[analysis]") {
    const oracle::M h = kron(X(), Z()) + 0.3 * kron(Y(), Y());
    CHECK(oracle::max_norm(magnus_h1(HamiltonianFn::constant(op(h)), 3.0).entries()) <= 1e-12);
    const auto bump = HamiltonianFn::scaled(
        [](double t) { return std::exp(-(t - 1.0) * (t - 1.0) * 8.0); }, op(h));
    CHECK(oracle::max_norm(magnus_h1(bump, 2.0).entries()) <= 1e-12);
}

TEST_CASE("H1 of the linear Josephson ramp", "[analysis]") {
    const double ej = 1.0;
    const double el = std::sqrt(143.0);
    QuadratureConfig cfg;
    for (double eps : {0.02, 0.1, 0.5}) {
        cfg.max_spacing = eps / 10;
        const auto un = magnus_h1(linear_ramp_hamiltonian(ej, el, eps), 0.0, 2 * eps, cfg).entries();
        CHECK(rel(un, ramp_h1(ej, ej * ej / el, eps)) <= 1e-4);
        CHECK(oracle::max_norm(un - un.adjoint()) <= 1e-10);

        const auto ord = magnus_h1(linear_ramp_hamiltonian(ej, el, eps, PairCounting::ordered), 0.0,
                                   2 * eps, cfg)
                             .entries();
        // Ordered pairs: -(E_J^3 eps / 15 E_L)(ZY + YZ).
        const oracle::M expected = -(ej * ej * ej * eps / (15.0 * el)) * (kron(Z(), Y()) + kron(Y(), Z()));
        CHECK(rel(ord, expected) <= 1e-4);
        CHECK(rel(linear_ramp_h1_closed_form(ej, el, eps).entries(), ramp_h1(ej, ej * ej / el, eps)) < 1e-14);
    }
    cfg.max_spacing = 0.0;
    const auto a = magnus_h1(linear_ramp_hamiltonian(ej, el, 0.05), 0.0, 0.1, cfg).entries();
    const auto b = magnus_h1(linear_ramp_hamiltonian(ej, el, 0.1), 0.0, 0.2, cfg).entries();
    CHECK(rel(b, 2.0 * a) <= 1e-6);
}

TEST_CASE("H1 on the tanh edge differs from the linear closed form", "[analysis]") {
    const double ej = 1.0;
    const double el = std::sqrt(143.0);
    const double eps = 0.1;
    QuadratureConfig cfg;
    cfg.max_spacing = eps / 10;
    const auto terms = magnus_terms(tanh_ramp_hamiltonian(ej, el, eps), 0.0, 2 * eps, cfg, "tanh");
    const double dev = rel(terms.h1_bar.entries(), ramp_h1(ej, ej * ej / el, eps));
    CHECK(dev > 1e-3);
    CHECK(dev < 10.0);
    CHECK(terms.h1_bar.is_hermitian(1e-10));
    CHECK(terms.h0_bar.is_hermitian(1e-10));
    CHECK(terms.source == "tanh");
}

TEST_CASE("quadrature reports non-convergence", "[analysis]") {
    HamiltonianFn noisy(1, [](double t, CMatrix &out) {
        out = CMatrix::Zero(2, 2);
        const double v = std::sin(1e7 * t);
        out(0, 1) = v;
        out(1, 0) = v;
        out(0, 0) = std::cos(3e6 * t);
        out(1, 1) = -out(0, 0);
    });
    QuadratureConfig cfg;
    cfg.max_intervals = 1024;
    CHECK_THROWS_AS(magnus_h1(noisy, 1.0, cfg), ConvergenceError);
}

TEST_CASE("gate fidelity is the overlap with the ideal output", "[analysis]") {
    const auto cnot = cnot_matrix(0, 1, 2);
    const auto in = StateVector::from_bits("11");
    CHECK(gate_fidelity(in, cnot, StateVector::from_bits("10")).fidelity == 1.0);
    CHECK(gate_fidelity(in, cnot, StateVector::from_bits("11")).fidelity == 0.0);
}

TEST_CASE("perturbative fidelity from the error dispersion", "[analysis]") {
    const double a = 0.02;
    const double tau = 3.0;
    const auto h1 = op(a * kron(Z(), I2()));
    CHECK(fidelity_perturbative(StateVector::from_bits("10"), h1, tau, 0.1).fidelity == 1.0);
    CHECK(fidelity_perturbative(StateVector::from_bits("10"), h1, tau, 0.0).fidelity == 1.0);

    const StateVector plus(2, (oracle::ket("00") + oracle::ket("10")).normalized());
    const double eps = 0.1;
    const auto f = fidelity_perturbative(plus, h1, tau, eps);
    CHECK(f.fidelity == Approx(1.0 - tau * tau * a * a).epsilon(1e-14));
    CHECK(f.eta_dispersion == Approx(tau * tau * a * a / (eps * eps)).epsilon(1e-12));
    CHECK(f.fidelity <= 1.0);
    CHECK_FALSE(f.outside_validity);
    CHECK(fidelity_perturbative(plus, op(kron(Z(), I2())), tau, eps).outside_validity);
}

TEST_CASE("interaction-frame factorization of the smooth evolution", "[analysis]") {
    CompileOptions opts;
    opts.epsilon = 0.05;
    const auto program = u_ph_program(0, 1, solve_coupling(1, 3), opts);
    const auto herr = interaction_error_hamiltonian(program.model, program.schedule);
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    const double t = program.duration();
    const auto smooth = propagator(make_hamiltonian(program.model, program.schedule), 0.0, t, cfg);
    const auto sharp = propagator(make_hamiltonian(program.model, ideal_limit(program.schedule)), 0.0, t, cfg);
    const auto err = propagator(herr, 0.0, t, cfg);
    CHECK(oracle::max_norm(smooth.entries() - (sharp * err).entries()) <= 1e-7);
}

TEST_CASE("error law fits recover synthetic data", "[analysis]") {
    std::vector<double> x{0.25, 0.35, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0};
    std::vector<double> quad;
    std::vector<double> cubic;
    for (double v : x) {
        quad.push_back(1.0 - 0.03 * v * v);
        cubic.push_back(1.0 - 0.004 * v * v * v);
    }
    const auto fq = fit_error_law(x, quad);
    CHECK(fq.c == Approx(0.03).epsilon(1e-10));
    CHECK(fq.p == Approx(2.0).epsilon(1e-10));
    CHECK(fq.prefactor == Approx(0.03).epsilon(1e-9));
    CHECK(fq.residual < 1e-10);
    CHECK(fq.quadratic_points == 5);
    CHECK(fq.power_points == 5);
    CHECK(fit_error_law(x, cubic).p == Approx(3.0).epsilon(1e-10));

    std::vector<double> floor_hit = quad;
    floor_hit[0] = 1.0 - 1e-12;
    CHECK(fit_error_law(x, floor_hit).power_points == 4);
    std::vector<double> flat(x.size(), 1.0);
    CHECK(std::isnan(fit_error_law(x, flat).p));
    CHECK_THROWS_AS(fit_error_law({1.0}, {0.5, 0.2}), InvalidArgument);
}

TEST_CASE("rise-time sweep", "[analysis][sweep]") {
    const auto program = charge_cnot_program(0, 1, solve_coupling(1, 3));
    const auto in = StateVector::from_bits("11");
    std::vector<double> grid{1.5, 0.25, 0.5, 0.75, 1.0, 2.0};
    CHECK_THROWS_AS(sweep_rise_time(program, in, {0.5}, program.tau_op), InvalidArgument);
    CHECK_THROWS_AS(sweep_rise_time(program, in, {0.1, 0.1, 0.1, 0.1, 0.1, 0.1}, program.tau_op),
                    InvalidArgument);

    SweepOptions one;
    one.jobs = 1;
    SweepOptions three;
    three.jobs = 3;
    const auto a = sweep_rise_time(program, in, grid, program.tau_op, one);
    const auto b = sweep_rise_time(program, in, grid, program.tau_op, three);
    REQUIRE(a.samples.size() == grid.size());
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        CHECK(a.samples[k].x == b.samples[k].x);
        CHECK(a.samples[k].success == b.samples[k].success);
        CHECK(a.samples[k].fidelity_perturbative == b.samples[k].fidelity_perturbative);
        CHECK(a.samples[k].epsilon == Approx(a.samples[k].x * program.tau_op));
        if (k > 0) {
            CHECK(a.samples[k].x > a.samples[k - 1].x);
            CHECK(a.samples[k].success <= a.samples[k - 1].success + 1e-4);
        }
        CHECK(a.samples[k].fidelity_perturbative <= 1.0);
    }
    CHECK(a.samples.front().success >= 1.0 - 1e-3);

    const auto ideal = ideal_cnot_program(0, 1);
    const auto r = sweep_rise_time(ideal, in, grid, ideal.tau_op);
    for (const auto &s : r.samples) {
        CHECK(s.success >= 1.0 - 1e-4);
    }
}

// Fidelity read off the quoted fitting function at eps = 2 tau_op.
TEST_CASE("charge CNOT fidelity at twice the operation time", "[analysis][published-fit]") {
    const auto program = charge_cnot_program(0, 1, solve_coupling(1, 3)).with_epsilon(2.0 * 0.5);
    const auto sim = simulate_program(program, StateVector::from_bits("11"));
    CHECK(sim.fidelity == Approx(1.0 - 0.027 * 4.0).margin(0.03));
}

TEST_CASE("time-scale report", "[analysis]") {
    const auto r = timescale_report(50.0);
    CHECK(r.hbar_over_ej_ps == Approx(0.6582119569 / 50.0).epsilon(1e-12));
    CHECK(r.hbar_over_ej_ps == Approx(0.0132).margin(1e-4));
    CHECK(timescale_report(100.0).hbar_over_ej_ps == Approx(r.hbar_over_ej_ps / 2).epsilon(1e-14));
    CHECK(r.rise_time_exceeds_gate);
    CHECK(r.text.find("30") != std::string::npos);
    CHECK_THROWS_AS(timescale_report(0.0), InvalidArgument);
}
