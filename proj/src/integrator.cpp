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

#include "pulseq/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace pulseq {

NumericalError::NumericalError(const std::string &what, std::size_t step,
                               double time)
    : std::runtime_error(what), step_(step), time_(time) {}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument("integrator dt must be positive and finite");
    }
    if (renormalize_every && *renormalize_every == 0) {
        throw InvalidArgument("renormalize_every must be at least 1");
    }
    if (record_stride == 0) {
        throw InvalidArgument("record_stride must be at least 1");
    }
}

double default_time_step(const Schedule &schedule) {
    double dt = kDefaultMaxStep;
    if (auto eps = schedule.min_epsilon()) {
        dt = std::min(dt, *eps / 10.0);
    }
    if (auto width = schedule.min_width()) {
        dt = std::min(dt, *width / 100.0);
    }
    return dt;
}

IntegratorConfig default_integrator(const Schedule &schedule) {
    IntegratorConfig cfg;
    cfg.dt = default_time_step(schedule);
    return cfg;
}

std::vector<std::string> check_time_step(double dt, const Schedule &schedule) {
    std::vector<std::string> problems;
    if (auto eps = schedule.min_epsilon(); eps && dt > *eps / 10.0) {
        std::ostringstream msg;
        msg << "dt = " << dt << " does not resolve a ramp with eps = " << *eps;
        problems.push_back(msg.str());
    }
    if (auto width = schedule.min_width(); width && dt > *width / 100.0) {
        std::ostringstream msg;
        msg << "dt = " << dt << " is coarse for a pulse of width " << *width;
        problems.push_back(msg.str());
    }
    return problems;
}

namespace {

// Pieces of [t0, t1] between breakpoints.
std::vector<double> piece_edges(const HamiltonianFn &h, double t0, double t1) {
    std::vector<double> edges{t0};
    for (double b : h.breakpoints()) {
        if (b > t0 && b < t1) {
            edges.push_back(b);
        }
    }
    edges.push_back(t1);
    return edges;
}

std::size_t steps_for(double length, double dt) {
    // Tolerate rounding so that an exact multiple does not gain a step.
    const double n = std::ceil(length / dt * (1.0 - 1e-12));
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

double clamp_inside(double t, double lo, double hi) {
    if (t <= lo) {
        return std::nextafter(lo, hi);
    }
    if (t >= hi) {
        return std::nextafter(hi, lo);
    }
    return t;
}

/**
 * Drives the RK4 loop for a state block (a vector or a full matrix).
 * `on_step(step_index, t_after, state)` runs after each step.
 */
template <typename OnStep>
std::size_t rk4_drive(CMatrix &state, const HamiltonianFn &h, double t0,
                      double t1, double dt, OnStep &&on_step) {
    using namespace std::complex_literals;
    const auto edges = piece_edges(h, t0, t1);
    const Eigen::Index dim = h.dim();
    CMatrix hm(dim, dim);
    CMatrix k1, k2, k3, k4, tmp;
    std::size_t step = 0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double lo = edges[p];
        const double hi = edges[p + 1];
        const std::size_t n = steps_for(hi - lo, dt);
        const double step_len = (hi - lo) / static_cast<double>(n);
        for (std::size_t s = 0; s < n; ++s) {
            const double ta = lo + static_cast<double>(s) * step_len;
            const double tb = s + 1 == n ? hi : ta + step_len;
            const double hstep = tb - ta;
            const double tm = clamp_inside(ta + 0.5 * hstep, lo, hi);

            h.evaluate(clamp_inside(ta, lo, hi), hm);
            k1.noalias() = -1i * (hm * state);
            h.evaluate(tm, hm);
            tmp = state + (0.5 * hstep) * k1;
            k2.noalias() = -1i * (hm * tmp);
            tmp = state + (0.5 * hstep) * k2;
            k3.noalias() = -1i * (hm * tmp);
            h.evaluate(clamp_inside(tb, lo, hi), hm);
            tmp = state + hstep * k3;
            k4.noalias() = -1i * (hm * tmp);
            state += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

            ++step;
            if (!state.allFinite()) {
                std::ostringstream msg;
                msg << "non-finite amplitude at step " << step << ", t = "
                    << tb;
                throw NumericalError(msg.str(), step, tb);
            }
            on_step(step, tb, state);
        }
    }
    return step;
}

void check_interval(const HamiltonianFn &h, int n_qubits, double t0,
                    double t1) {
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
        throw InvalidArgument("integration interval needs t1 > t0");
    }
    if (h.n_qubits() != n_qubits) {
        throw InvalidArgument("state and Hamiltonian register sizes differ");
    }
}

std::vector<double> column_probabilities(const CMatrix &state) {
    std::vector<double> p(static_cast<std::size_t>(state.rows()));
    for (Eigen::Index i = 0; i < state.rows(); ++i) {
        p[static_cast<std::size_t>(i)] = std::norm(state(i, 0));
    }
    return p;
}

} // namespace

Trajectory evolve(const StateVector &psi0, const HamiltonianFn &h, double t0,
                  double t1, const IntegratorConfig &cfg) {
    cfg.validate();
    check_interval(h, psi0.n_qubits(), t0, t1);
    CMatrix state = psi0.amplitudes();
    Trajectory out{{}, {}, psi0, 0, 0.0};
    out.times.push_back(t0);
    out.probabilities.push_back(column_probabilities(state));
    bool last_recorded = true;
    const std::size_t total = rk4_drive(
        state, h, t0, t1, cfg.dt,
        [&](std::size_t step, double t, CMatrix &s) {
            const double drift = std::abs(s.norm() - 1.0);
            out.max_norm_drift = std::max(out.max_norm_drift, drift);
            if (cfg.renormalize_every && step % *cfg.renormalize_every == 0) {
                s /= s.norm();
            }
            last_recorded = step % cfg.record_stride == 0;
            if (last_recorded) {
                out.times.push_back(t);
                out.probabilities.push_back(column_probabilities(s));
            }
        });
    if (!last_recorded) {
        out.times.push_back(t1);
        out.probabilities.push_back(column_probabilities(state));
    }
    out.steps = total;
    // StateVector insists on unit norm; the drift stays in max_norm_drift.
    if (std::abs(state.squaredNorm() - 1.0) > kNormTolerance) {
        state /= state.norm();
    }
    out.final_state = StateVector(psi0.n_qubits(), state.col(0));
    return out;
}

OperatorMatrix propagator(const HamiltonianFn &h, double t0, double t1,
                          const IntegratorConfig &cfg) {
    cfg.validate();
    check_interval(h, h.n_qubits(), t0, t1);
    CMatrix state = CMatrix::Identity(h.dim(), h.dim());
    rk4_drive(state, h, t0, t1, cfg.dt,
              [](std::size_t, double, CMatrix &) {});
    return {h.n_qubits(), std::move(state)};
}

OperatorMatrix reference_expm(const OperatorMatrix &h, double t) {
    if (!h.is_hermitian(1e-10 * std::max(1.0, max_abs(h.entries())))) {
        throw InvalidArgument("reference_expm needs a Hermitian matrix");
    }
    using namespace std::complex_literals;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.entries());
    const Eigen::VectorXcd phases =
        (-1i * t * solver.eigenvalues().cast<Complex>()).array().exp();
    CMatrix u = solver.eigenvectors() * phases.asDiagonal() *
                solver.eigenvectors().adjoint();
    return {h.n_qubits(), std::move(u)};
}

std::string format_float(double value) {
    char buffer[48];
    std::snprintf(buffer, sizeof buffer, "%.11e", value);
    return buffer;
}

void write_trajectory_csv(std::ostream &out, const Trajectory &trajectory) {
    const int n = trajectory.final_state.n_qubits();
    out << "t";
    for (std::size_t k = 0; k < trajectory.final_state.dim(); ++k) {
        out << ",p_" << basis_label(k, n);
    }
    out << "\n";
    for (std::size_t row = 0; row < trajectory.times.size(); ++row) {
        out << format_float(trajectory.times[row]);
        for (double p : trajectory.probabilities[row]) {
            out << "," << format_float(p);
        }
        out << "\n";
    }
}

} // namespace pulseq
