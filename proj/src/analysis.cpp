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

#include "pulseq/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "pulseq/device.hpp"
#include "pulseq/integrator.hpp"

namespace pulseq {

namespace {

using namespace std::complex_literals;

struct Piece {
    double lo;
    double hi;
    std::size_t intervals; // even
};

// Every piece gets base * level intervals, where base covers the piece's
// share of initial_intervals and the spacing cap. Raising the level
// therefore refines all pieces together.
std::vector<Piece> make_pieces(const HamiltonianFn &h, double t0, double t1,
                               std::size_t level, const QuadratureConfig &cfg) {
    std::vector<double> edges{t0};
    for (double b : h.breakpoints()) {
        if (b > t0 && b < t1) {
            edges.push_back(b);
        }
    }
    edges.push_back(t1);
    const double span = t1 - t0;
    std::vector<Piece> pieces;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double len = edges[k + 1] - edges[k];
        double base =
            std::ceil(static_cast<double>(cfg.initial_intervals) * len / span);
        if (cfg.max_spacing > 0.0) {
            base = std::max(base, std::ceil(len / cfg.max_spacing));
        }
        auto n = std::max<std::size_t>(2, static_cast<std::size_t>(base)) *
                 level;
        n += n % 2;
        pieces.push_back({edges[k], edges[k + 1], n});
    }
    return pieces;
}

// Node values on one piece, with the end nodes sampled just inside.
std::vector<CMatrix> sample_piece(const HamiltonianFn &h, const Piece &piece) {
    std::vector<CMatrix> f(piece.intervals + 1);
    const double step =
        (piece.hi - piece.lo) / static_cast<double>(piece.intervals);
    for (std::size_t k = 0; k <= piece.intervals; ++k) {
        double t = piece.lo + static_cast<double>(k) * step;
        if (k == 0) {
            t = std::nextafter(piece.lo, piece.hi);
        } else if (k == piece.intervals) {
            t = std::nextafter(piece.hi, piece.lo);
        }
        h.evaluate(t, f[k]);
    }
    return f;
}

CMatrix simpson(const std::vector<CMatrix> &f, double step) {
    CMatrix sum = f.front() + f.back();
    for (std::size_t k = 1; k + 1 < f.size(); ++k) {
        sum += (k % 2 == 1 ? 4.0 : 2.0) * f[k];
    }
    return sum * (step / 3.0);
}

CMatrix h0_integral(const HamiltonianFn &h, double t0, double t1,
                    std::size_t level, const QuadratureConfig &cfg) {
    CMatrix acc = CMatrix::Zero(h.dim(), h.dim());
    for (const auto &piece : make_pieces(h, t0, t1, level, cfg)) {
        const double step =
            (piece.hi - piece.lo) / static_cast<double>(piece.intervals);
        acc += simpson(sample_piece(h, piece), step);
    }
    return acc;
}

// int dt2 [H(t2), C(t2)] with C(t2) = int_{t0}^{t2} H.
CMatrix h1_integral(const HamiltonianFn &h, double t0, double t1,
                    std::size_t level, const QuadratureConfig &cfg) {
    CMatrix acc = CMatrix::Zero(h.dim(), h.dim());
    CMatrix running = CMatrix::Zero(h.dim(), h.dim());
    for (const auto &piece : make_pieces(h, t0, t1, level, cfg)) {
        const auto f = sample_piece(h, piece);
        const std::size_t n = piece.intervals;
        const double step = (piece.hi - piece.lo) / static_cast<double>(n);
        std::vector<CMatrix> c(n + 1);
        c[0] = running;
        for (std::size_t k = 1; k <= n; ++k) {
            if (k % 2 == 0) {
                c[k] = c[k - 2] + (step / 3.0) * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
            } else {
                // Quadratic through three nodes, integrated over the first
                // half only.
                c[k] = c[k - 1] +
                       (step / 12.0) * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1]);
            }
        }
        running = c[n];
        std::vector<CMatrix> g(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            g[k] = f[k] * c[k] - c[k] * f[k];
        }
        acc += simpson(g, step);
    }
    return acc;
}

template <typename Integral>
CMatrix refine(Integral &&integral, const QuadratureConfig &cfg,
               const char *what) {
    if (!(cfg.rel_tol > 0.0) || cfg.initial_intervals < 2) {
        throw InvalidArgument("bad quadrature configuration");
    }
    std::size_t level = 1;
    CMatrix coarse = integral(level);
    while (2 * level * cfg.initial_intervals <= cfg.max_intervals) {
        level *= 2;
        CMatrix fine = integral(level);
        const double change = max_abs(fine - coarse);
        if (change <= std::max(cfg.rel_tol * max_abs(fine), cfg.abs_tol)) {
            return fine;
        }
        coarse = std::move(fine);
    }
    std::ostringstream msg;
    msg << what << " quadrature did not converge after " << level
        << "-fold refinement";
    throw ConvergenceError(msg.str());
}

void check_span(double t0, double t1) {
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
        throw InvalidArgument("Magnus interval needs t1 > t0");
    }
}

CMatrix hermitian_part(const CMatrix &m) { return 0.5 * (m + m.adjoint()); }

double expectation(const CMatrix &op, const CVector &psi) {
    return psi.dot(op * psi).real();
}

} // namespace

OperatorMatrix magnus_h0(const HamiltonianFn &h, double t0, double t1,
                         const QuadratureConfig &cfg) {
    check_span(t0, t1);
    const CMatrix integral = refine(
        [&](std::size_t level) { return h0_integral(h, t0, t1, level, cfg); },
        cfg, "H0");
    return {h.n_qubits(), hermitian_part(integral / (t1 - t0))};
}

OperatorMatrix magnus_h0(const HamiltonianFn &h, double tau,
                         const QuadratureConfig &cfg) {
    return magnus_h0(h, 0.0, tau, cfg);
}

OperatorMatrix magnus_h1(const HamiltonianFn &h, double t0, double t1,
                         const QuadratureConfig &cfg) {
    check_span(t0, t1);
    const CMatrix integral = refine(
        [&](std::size_t level) { return h1_integral(h, t0, t1, level, cfg); },
        cfg, "H1");
    const Complex scale = -1i / (2.0 * (t1 - t0));
    return {h.n_qubits(), hermitian_part(scale * integral)};
}

OperatorMatrix magnus_h1(const HamiltonianFn &h, double tau,
                         const QuadratureConfig &cfg) {
    return magnus_h1(h, 0.0, tau, cfg);
}

MagnusTerms magnus_terms(const HamiltonianFn &h, double t0, double t1,
                         const QuadratureConfig &cfg, std::string source) {
    return {magnus_h0(h, t0, t1, cfg), magnus_h1(h, t0, t1, cfg), t0, t1,
            std::move(source)};
}

namespace {

double pair_coefficient(double josephson, double coupling_energy,
                        PairCounting counting) {
    if (!(josephson > 0.0) || !(coupling_energy > 0.0)) {
        throw InvalidArgument("E_J and E_L must be positive");
    }
    ChargeModel model{2, coupling_energy, counting};
    return josephson * josephson * model.pair_factor();
}

HamiltonianFn ramp_pair(double josephson, double coupling_energy,
                        PairCounting counting,
                        std::function<double(double)> envelope) {
    const double g = pair_coefficient(josephson, coupling_energy, counting);
    const CMatrix x_sum =
        (embed_pauli(Axis::x, 0, 2) + embed_pauli(Axis::x, 1, 2)).entries();
    const CMatrix yy =
        (embed_pauli(Axis::y, 0, 2) * embed_pauli(Axis::y, 1, 2)).entries();
    return {2, [=](double t, CMatrix &out) {
                const double p = envelope(t);
                out = (-0.5 * josephson * p) * x_sum - (g * p * p) * yy;
            }};
}

} // namespace

HamiltonianFn linear_ramp_hamiltonian(double josephson, double coupling_energy,
                                      double epsilon, PairCounting counting) {
    if (!(epsilon > 0.0)) {
        throw InvalidArgument("ramp epsilon must be positive");
    }
    return ramp_pair(josephson, coupling_energy, counting,
                     [epsilon](double t) { return t / (2.0 * epsilon); });
}

HamiltonianFn tanh_ramp_hamiltonian(double josephson, double coupling_energy,
                                    double epsilon, PairCounting counting) {
    if (!(epsilon > 0.0)) {
        throw InvalidArgument("ramp epsilon must be positive");
    }
    return ramp_pair(josephson, coupling_energy, counting, [epsilon](double t) {
        return 0.5 * (1.0 + std::tanh((t - epsilon) / (0.5 * epsilon)));
    });
}

OperatorMatrix linear_ramp_h1_closed_form(double josephson,
                                          double coupling_energy,
                                          double epsilon,
                                          PairCounting counting) {
    const double g = pair_coefficient(josephson, coupling_energy, counting);
    const OperatorMatrix zy =
        embed_pauli(Axis::z, 0, 2) * embed_pauli(Axis::y, 1, 2) +
        embed_pauli(Axis::y, 0, 2) * embed_pauli(Axis::z, 1, 2);
    return Complex{-josephson * g * epsilon / 30.0, 0.0} * zy;
}

FidelityEstimate gate_fidelity(const StateVector &psi_in,
                               const OperatorMatrix &u_ideal,
                               const StateVector &psi_out, double epsilon) {
    if (psi_in.n_qubits() != u_ideal.n_qubits() ||
        psi_out.n_qubits() != u_ideal.n_qubits()) {
        throw InvalidArgument("fidelity operands have different dimensions");
    }
    CVector ideal = apply(u_ideal, psi_in);
    const StateVector ideal_state(psi_in.n_qubits(), ideal / ideal.norm());
    FidelityEstimate est;
    est.fidelity = fidelity_overlap(ideal_state, psi_out);
    est.epsilon = epsilon;
    return est;
}

FidelityEstimate fidelity_perturbative(const StateVector &psi_in,
                                       const OperatorMatrix &h1_bar,
                                       double tau, double epsilon) {
    if (psi_in.n_qubits() != h1_bar.n_qubits()) {
        throw InvalidArgument("state and generator dimensions differ");
    }
    if (!(tau > 0.0) || epsilon < 0.0) {
        throw InvalidArgument("need tau > 0 and epsilon >= 0");
    }
    FidelityEstimate est;
    est.epsilon = epsilon;
    if (epsilon == 0.0) {
        return est;
    }
    const CVector &psi = psi_in.amplitudes();
    const double mean = expectation(h1_bar.entries(), psi);
    const double second = (h1_bar.entries() * psi).squaredNorm();
    const double variance = std::max(0.0, second - mean * mean);
    const double scale = tau / epsilon;
    est.eta_dispersion = variance * scale * scale;
    est.fidelity = 1.0 - epsilon * epsilon * est.eta_dispersion;

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h1_bar.entries(),
                                                  Eigen::EigenvaluesOnly);
    est.outside_validity =
        solver.eigenvalues().cwiseAbs().maxCoeff() * tau > 0.3;
    return est;
}

HamiltonianFn interaction_error_hamiltonian(const Model &model,
                                            const Schedule &smooth) {
    const Schedule sharp = ideal_limit(smooth);
    const auto h_eps = make_hamiltonian(model, smooth);
    const auto h_0 = make_hamiltonian(model, sharp);
    const int n = model_qubits(model);
    const Eigen::Index dim = h_0.dim();

    struct FramePiece {
        double start;
        CMatrix vectors;
        Eigen::VectorXd energies;
        CMatrix u_start;
    };
    auto pieces = std::make_shared<std::vector<FramePiece>>();
    std::vector<double> edges{0.0};
    for (double b : sharp.breakpoints()) {
        edges.push_back(b);
    }
    edges.push_back(sharp.total_duration());
    CMatrix u = CMatrix::Identity(dim, dim);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(
            h_0(0.5 * (edges[k] + edges[k + 1])).entries());
        pieces->push_back(
            {edges[k], solver.eigenvectors(), solver.eigenvalues(), u});
        const Eigen::VectorXcd phases =
            (-1i * (edges[k + 1] - edges[k]) *
             solver.eigenvalues().cast<Complex>())
                .array()
                .exp();
        u = solver.eigenvectors() * phases.asDiagonal() *
            solver.eigenvectors().adjoint() * u;
    }

    return {n,
            [pieces, h_eps, h_0, dim](double t, CMatrix &out) {
                auto it = std::upper_bound(
                    pieces->begin(), pieces->end(), t,
                    [](double value, const FramePiece &p) {
                        return value < p.start;
                    });
                const FramePiece &p =
                    it == pieces->begin() ? pieces->front() : *std::prev(it);
                const Eigen::VectorXcd phases =
                    (-1i * (t - p.start) * p.energies.cast<Complex>())
                        .array()
                        .exp();
                const CMatrix u0 = p.vectors * phases.asDiagonal() *
                                   p.vectors.adjoint() * p.u_start;
                CMatrix a(dim, dim);
                CMatrix b(dim, dim);
                h_eps.evaluate(t, a);
                h_0.evaluate(t, b);
                out = u0.adjoint() * (a - b) * u0;
            },
            sharp.breakpoints()};
}

FidelityEstimate program_fidelity_perturbative(const GateProgram &program,
                                               const StateVector &psi_in,
                                               const QuadratureConfig &cfg) {
    if (program.epsilon == 0.0) {
        return {};
    }
    QuadratureConfig local = cfg;
    if (local.max_spacing <= 0.0) {
        local.max_spacing = program.epsilon / 10.0;
    }
    const auto h_err =
        interaction_error_hamiltonian(program.model, program.schedule);
    const double total = program.duration();
    const auto terms = magnus_terms(h_err, 0.0, total, local, program.name);
    return fidelity_perturbative(psi_in, terms.h0_bar + terms.h1_bar, total,
                                 program.epsilon);
}

SimulationResult simulate_program(const GateProgram &program,
                                  const StateVector &psi_in,
                                  std::optional<double> dt) {
    const auto h = make_hamiltonian(program.model, program.schedule);
    IntegratorConfig cfg = default_integrator(program.schedule);
    if (dt) {
        cfg.dt = *dt;
    }
    cfg.record_stride = std::numeric_limits<std::size_t>::max();
    const auto traj = evolve(psi_in, h, 0.0, program.duration(), cfg);

    const CVector ideal = apply(program.reference_unitary, psi_in);
    Eigen::Index best = 0;
    ideal.cwiseAbs2().maxCoeff(&best);
    const double fidelity =
        std::norm(ideal.normalized().dot(traj.final_state.amplitudes()));
    const bool basis_output = std::norm(ideal(best)) >= 1.0 - 1e-9;
    const double success =
        basis_output ? std::norm(traj.final_state.amplitudes()(best)) : fidelity;
    return {traj.final_state, success, fidelity, traj.max_norm_drift};
}

PowerFit fit_error_law(const std::vector<double> &x,
                       const std::vector<double> &y,
                       const FitOptions &options) {
    if (x.size() != y.size()) {
        throw InvalidArgument("fit inputs differ in length");
    }
    PowerFit fit;
    double sxy = 0.0;
    double sxx = 0.0;
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] > options.x_max) {
            continue;
        }
        const double err = 1.0 - y[k];
        sxy += x[k] * x[k] * err;
        sxx += std::pow(x[k], 4);
        ++fit.quadratic_points;
        if (err >= options.noise_floor) {
            lx.push_back(std::log(x[k]));
            ly.push_back(std::log(err));
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    fit.c = fit.quadratic_points > 0 ? sxy / sxx : nan;
    fit.power_points = lx.size();
    if (lx.size() < 2) {
        fit.p = fit.prefactor = fit.residual = nan;
        return fit;
    }
    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double cov = 0.0;
    double var = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        cov += (lx[k] - mx) * (ly[k] - my);
        var += (lx[k] - mx) * (lx[k] - mx);
    }
    fit.p = cov / var;
    const double intercept = my - fit.p * mx;
    fit.prefactor = std::exp(intercept);
    double rss = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        const double r = ly[k] - (intercept + fit.p * lx[k]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

SweepRecord sweep_rise_time(const GateProgram &program,
                            const StateVector &psi_in,
                            std::vector<double> x_grid, double tau_op,
                            const SweepOptions &options) {
    if (!(tau_op > 0.0)) {
        throw InvalidArgument("tau_op must be positive");
    }
    std::sort(x_grid.begin(), x_grid.end());
    if (std::adjacent_find(x_grid.begin(), x_grid.end()) != x_grid.end()) {
        throw InvalidArgument("sweep grid values must be distinct");
    }
    if (x_grid.size() < 6) {
        throw InvalidArgument("sweep grid needs at least 6 points");
    }
    if (!(x_grid.front() > 0.0)) {
        throw InvalidArgument("sweep grid values must be positive");
    }

    SweepRecord record;
    record.tau_op = tau_op;
    record.samples.resize(x_grid.size());
    std::vector<std::exception_ptr> failures(x_grid.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (std::size_t k = next++; k < x_grid.size(); k = next++) {
            try {
                const double eps = x_grid[k] * tau_op;
                const GateProgram p = program.with_epsilon(eps);
                const auto sim = simulate_program(p, psi_in, options.dt);
                SweepPoint point{x_grid[k], eps, sim.success, sim.fidelity, 1.0};
                if (options.perturbative) {
                    point.fidelity_perturbative =
                        program_fidelity_perturbative(p, psi_in,
                                                      options.quadrature)
                            .fidelity;
                }
                record.samples[k] = point;
            } catch (...) {
                failures[k] = std::current_exception();
            }
        }
    };

    unsigned jobs = options.jobs != 0 ? options.jobs
                                      : std::max(1U, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(x_grid.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < jobs; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }

    for (std::size_t k = 0; k < failures.size(); ++k) {
        if (!failures[k]) {
            continue;
        }
        std::ostringstream where;
        where << "sweep point eps/tau_op = " << x_grid[k] << " failed: ";
        try {
            std::rethrow_exception(failures[k]);
        } catch (const NumericalError &e) {
            throw NumericalError(where.str() + e.what(), e.step(), e.time());
        } catch (const ConvergenceError &e) {
            throw ConvergenceError(where.str() + e.what());
        } catch (const std::exception &e) {
            throw std::runtime_error(where.str() + e.what());
        }
    }

    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto &s : record.samples) {
        xs.push_back(s.x);
        ys.push_back(s.success);
    }
    record.fit = fit_error_law(xs, ys, options.fit);
    return record;
}

TimescaleReport timescale_report(double josephson_micro_ev) {
    if (!(josephson_micro_ev > 0.0) || !std::isfinite(josephson_micro_ev)) {
        throw InvalidArgument("E_J must be positive");
    }
    TimescaleReport r;
    r.josephson_micro_ev = josephson_micro_ev;
    r.hbar_over_ej_ps = device::kHbarMicroEvPs / josephson_micro_ev;
    r.rise_time_exceeds_gate = r.rise_time_low_ps > 10.0 * r.hbar_over_ej_ps;
    std::ostringstream text;
    text << "E_J = " << josephson_micro_ev << " ueV\n"
         << "hbar/E_J = " << r.hbar_over_ej_ps << " ps (hbar = "
         << device::kHbarMicroEvPs << " ueV ps)\n"
         << "a commonly quoted estimate of about 1 ps for this scale is "
         << 1.0 / r.hbar_over_ej_ps << "x larger than the computed value\n"
         << "experimental rise times of " << r.rise_time_low_ps << "-"
         << r.rise_time_high_ps << " ps are "
         << r.rise_time_low_ps / r.hbar_over_ej_ps << "-"
         << r.rise_time_high_ps / r.hbar_over_ej_ps << " gate time units: "
         << (r.rise_time_exceeds_gate ? "far longer than" : "comparable to")
         << " the single-qubit x-rotation timescale\n";
    r.text = text.str();
    return r;
}

} // namespace pulseq
