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

// Test-side oracles. Nothing here calls into the library: Pauli matrices
// are written out by hand, tensor products use Eigen's Kronecker module
// and exponentials use Eigen's Pade-based MatrixFunctions.
#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline const C kI{0.0, 1.0};

inline M I2() { return M::Identity(2, 2); }
inline M X() {
    M m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline M Y() {
    M m(2, 2);
    m << 0, C(0, -1), C(0, 1), 0;
    return m;
}
inline M Z() {
    M m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline M kron(const M &a, const M &b) {
    return Eigen::kroneckerProduct(a, b).eval();
}
inline M kron(std::initializer_list<M> factors) {
    M out = M::Identity(1, 1);
    for (const auto &f : factors) {
        out = kron(out, f);
    }
    return out;
}

/// exp(-i h t) by Pade approximation with scaling and squaring.
inline M expm(const M &h, double t) {
    const M a = (C(0, -t) * h).eval();
    return a.exp();
}

/// Basis vector from a bit string, first character most significant.
inline V ket(const std::string &bits) {
    const std::size_t dim = std::size_t{1} << bits.size();
    std::size_t index = 0;
    for (char c : bits) {
        index = 2 * index + (c == '1' ? 1 : 0);
    }
    V v = V::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

/// min over global phase of max |a - e^{i phi} b|, phase from the
/// largest-modulus entry of b.
inline double phase_distance(const M &a, const M &b) {
    Eigen::Index r = 0, c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    const C phase = a(r, c) / b(r, c);
    const C unit = phase / std::abs(phase);
    return (a - unit * b).cwiseAbs().maxCoeff();
}

inline double max_norm(const M &m) { return m.cwiseAbs().maxCoeff(); }

/// CNOT with control i and target j on n qubits, qubit 0 most significant.
inline M cnot(int i, int j, int n) {
    const int dim = 1 << n;
    M u = M::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const int ci = (k >> (n - 1 - i)) & 1;
        const int out = ci ? k ^ (1 << (n - 1 - j)) : k;
        u(out, k) = 1.0;
    }
    return u;
}

} // namespace oracle
