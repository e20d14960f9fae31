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

#include "pulseq/qcore.hpp"

#include <cmath>
#include <utility>

namespace pulseq {

namespace {

void require_same_size(const OperatorMatrix &a, const OperatorMatrix &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw InvalidArgument("operator register sizes differ: " +
                              std::to_string(a.n_qubits()) + " vs " +
                              std::to_string(b.n_qubits()));
    }
}

void require_qubit(int qubit, int n_qubits) {
    if (qubit < 0 || qubit >= n_qubits) {
        throw InvalidArgument("qubit index " + std::to_string(qubit) +
                              " out of range for " + std::to_string(n_qubits) +
                              " qubits");
    }
}

} // namespace

char axis_name(Axis axis) {
    switch (axis) {
    case Axis::x:
        return 'x';
    case Axis::y:
        return 'y';
    case Axis::z:
        return 'z';
    }
    return '?';
}

Axis parse_axis(char c) {
    switch (c) {
    case 'x':
        return Axis::x;
    case 'y':
        return Axis::y;
    case 'z':
        return Axis::z;
    default:
        throw InvalidArgument(std::string("unknown Pauli axis '") + c + "'");
    }
}

std::size_t dimension_of(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw InvalidArgument("qubit count must be in [1, " +
                              std::to_string(kMaxQubits) + "], got " +
                              std::to_string(n_qubits));
    }
    return std::size_t{1} << n_qubits;
}

std::string basis_label(std::size_t index, int n_qubits) {
    const std::size_t dim = dimension_of(n_qubits);
    if (index >= dim) {
        throw InvalidArgument("basis index out of range");
    }
    std::string label(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q) {
        const int shift = n_qubits - 1 - q;
        if ((index >> shift) & 1U) {
            label[static_cast<std::size_t>(q)] = '1';
        }
    }
    return label;
}

StateVector::StateVector(int n_qubits, CVector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    const auto dim = dimension_of(n_qubits);
    if (static_cast<std::size_t>(amplitudes_.size()) != dim) {
        throw InvalidArgument("state vector length " +
                              std::to_string(amplitudes_.size()) +
                              " does not match 2^" + std::to_string(n_qubits));
    }
    if (!amplitudes_.allFinite()) {
        throw InvalidArgument("state vector has non-finite amplitudes");
    }
    if (std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTolerance) {
        throw InvalidArgument("state vector is not normalized (|psi|^2 = " +
                              std::to_string(amplitudes_.squaredNorm()) + ")");
    }
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
    const auto dim = dimension_of(n_qubits);
    if (index >= dim) {
        throw InvalidArgument("basis index out of range");
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return {n_qubits, std::move(v)};
}

StateVector StateVector::from_bits(std::string_view bits) {
    const int n = static_cast<int>(bits.size());
    dimension_of(n);
    std::size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw InvalidArgument("basis label must contain only 0/1, got '" +
                                  std::string(bits) + "'");
        }
        index = (index << 1U) | static_cast<std::size_t>(c - '0');
    }
    return basis(n, index);
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(dim());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::norm(amplitudes_(static_cast<Eigen::Index>(i)));
    }
    return p;
}

OperatorMatrix::OperatorMatrix(int n_qubits, CMatrix entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
    const auto dim = static_cast<Eigen::Index>(dimension_of(n_qubits));
    if (entries_.rows() != dim || entries_.cols() != dim) {
        throw InvalidArgument("operator shape " +
                              std::to_string(entries_.rows()) + "x" +
                              std::to_string(entries_.cols()) +
                              " does not match 2^" + std::to_string(n_qubits));
    }
}

OperatorMatrix OperatorMatrix::identity(int n_qubits) {
    const auto dim = static_cast<Eigen::Index>(dimension_of(n_qubits));
    return {n_qubits, CMatrix::Identity(dim, dim)};
}

OperatorMatrix OperatorMatrix::zero(int n_qubits) {
    const auto dim = static_cast<Eigen::Index>(dimension_of(n_qubits));
    return {n_qubits, CMatrix::Zero(dim, dim)};
}

OperatorMatrix OperatorMatrix::adjoint() const {
    return {n_qubits_, entries_.adjoint()};
}

bool OperatorMatrix::is_hermitian(double tol) const {
    return max_abs(entries_ - entries_.adjoint()) <= tol;
}

bool OperatorMatrix::is_unitary(double tol) const {
    return unitarity_error(entries_) <= tol;
}

OperatorMatrix &OperatorMatrix::operator+=(const OperatorMatrix &rhs) {
    require_same_size(*this, rhs);
    entries_ += rhs.entries_;
    return *this;
}

OperatorMatrix &OperatorMatrix::operator-=(const OperatorMatrix &rhs) {
    require_same_size(*this, rhs);
    entries_ -= rhs.entries_;
    return *this;
}

OperatorMatrix &OperatorMatrix::operator*=(Complex scale) {
    entries_ *= scale;
    return *this;
}

OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix &rhs) {
    lhs += rhs;
    return lhs;
}

OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix &rhs) {
    lhs -= rhs;
    return lhs;
}

OperatorMatrix operator*(const OperatorMatrix &lhs, const OperatorMatrix &rhs) {
    require_same_size(lhs, rhs);
    return {lhs.n_qubits(), lhs.entries() * rhs.entries()};
}

OperatorMatrix operator*(Complex scale, OperatorMatrix op) {
    op *= scale;
    return op;
}

CMatrix pauli(Axis axis) {
    using namespace std::complex_literals;
    CMatrix p(2, 2);
    switch (axis) {
    case Axis::x:
        p << 0.0, 1.0, 1.0, 0.0;
        break;
    case Axis::y:
        p << 0.0, -1i, 1i, 0.0;
        break;
    case Axis::z:
        p << 1.0, 0.0, 0.0, -1.0;
        break;
    }
    return p;
}

OperatorMatrix embed_single(const CMatrix &gate, int qubit, int n_qubits) {
    dimension_of(n_qubits);
    require_qubit(qubit, n_qubits);
    if (gate.rows() != 2 || gate.cols() != 2) {
        throw InvalidArgument("single-qubit gate must be 2x2");
    }
    // Kronecker product with qubit 0 as the leftmost factor.
    CMatrix acc = CMatrix::Identity(1, 1);
    for (int q = 0; q < n_qubits; ++q) {
        const CMatrix factor =
            (q == qubit) ? gate : CMatrix::Identity(2, 2).eval();
        CMatrix next(acc.rows() * 2, acc.cols() * 2);
        for (Eigen::Index r = 0; r < acc.rows(); ++r) {
            for (Eigen::Index c = 0; c < acc.cols(); ++c) {
                next.block<2, 2>(2 * r, 2 * c) = acc(r, c) * factor;
            }
        }
        acc = std::move(next);
    }
    return {n_qubits, std::move(acc)};
}

OperatorMatrix embed_pauli(Axis axis, int qubit, int n_qubits) {
    return embed_single(pauli(axis), qubit, n_qubits);
}

OperatorMatrix pauli_term_matrix(const PauliTerm &term, int n_qubits) {
    OperatorMatrix out = OperatorMatrix::identity(n_qubits);
    for (const auto &[qubit, axis] : term.factors) {
        out = out * embed_pauli(axis, qubit, n_qubits);
    }
    out *= Complex{term.coefficient, 0.0};
    return out;
}

CVector apply(const OperatorMatrix &op, const CVector &psi) {
    if (static_cast<std::size_t>(psi.size()) != op.dim()) {
        throw InvalidArgument("dimension mismatch: operator " +
                              std::to_string(op.dim()) + " vs vector " +
                              std::to_string(psi.size()));
    }
    return op.entries() * psi;
}

CVector apply(const OperatorMatrix &op, const StateVector &psi) {
    return apply(op, psi.amplitudes());
}

double fidelity_overlap(const StateVector &phi, const StateVector &psi) {
    if (phi.dim() != psi.dim()) {
        throw InvalidArgument("dimension mismatch in overlap");
    }
    return std::norm(phi.amplitudes().dot(psi.amplitudes()));
}

double max_abs(const CMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Complex aligning_phase(const CMatrix &a, const CMatrix &b) {
    // Tr(b^dagger a) = sum conj(b_ij) a_ij.
    const Complex overlap = (b.conjugate().cwiseProduct(a)).sum();
    const double mag = std::abs(overlap);
    return mag > 0.0 ? overlap / mag : Complex{1.0, 0.0};
}

double phase_insensitive_distance(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("shape mismatch in phase comparison");
    }
    return max_abs(a - aligning_phase(a, b) * b);
}

double unitarity_error(const CMatrix &u) {
    const CMatrix gram = u.adjoint() * u;
    return max_abs(gram - CMatrix::Identity(u.rows(), u.cols()));
}

} // namespace pulseq
