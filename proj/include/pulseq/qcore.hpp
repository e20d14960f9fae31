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
 * @file qcore.hpp
 * State vectors and dense Pauli operator algebra for registers of up to
 * four qubits.
 *
 * Basis convention: the computational basis index is
 * m = 2^{N-1} q_0 + 2^{N-2} q_1 + ... + q_{N-1}, so qubit 0 is the most
 * significant bit. Qubit indices are zero-based throughout the library.
 * sigma_z |0> = +|0>, sigma_z |1> = -|1>.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pulseq {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kMaxQubits = 4;
inline constexpr double kNormTolerance = 1e-9;

/// Raised for malformed inputs: bad indices, mismatched dimensions, bad
/// configuration values.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class Axis { x, y, z };

char axis_name(Axis axis);
Axis parse_axis(char c);

/// Number of basis states for n qubits, after range checking n.
std::size_t dimension_of(int n_qubits);

/// Bit string label of a basis index, qubit 0 first ("01" is index 1).
std::string basis_label(std::size_t index, int n_qubits);

/**
 * Unit-norm amplitude vector over the 2^N computational basis.
 */
class StateVector {
  public:
    StateVector(int n_qubits, CVector amplitudes);

    static StateVector basis(int n_qubits, std::size_t index);
    /// Basis state from a bit string such as "11" (qubit 0 first).
    static StateVector from_bits(std::string_view bits);

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(amplitudes_.size());
    }
    [[nodiscard]] const CVector &amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] Complex operator[](std::size_t i) const {
        return amplitudes_(static_cast<Eigen::Index>(i));
    }
    [[nodiscard]] std::vector<double> probabilities() const;
    [[nodiscard]] double norm() const { return amplitudes_.norm(); }

  private:
    int n_qubits_;
    CVector amplitudes_;
};

/**
 * Dense 2^N x 2^N complex matrix tagged with its register size. Used both
 * for Hamiltonians (energy units) and for unitaries.
 */
class OperatorMatrix {
  public:
    OperatorMatrix(int n_qubits, CMatrix entries);

    static OperatorMatrix identity(int n_qubits);
    static OperatorMatrix zero(int n_qubits);

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(entries_.rows());
    }
    [[nodiscard]] const CMatrix &entries() const noexcept { return entries_; }
    [[nodiscard]] Complex operator()(std::size_t row, std::size_t col) const {
        return entries_(static_cast<Eigen::Index>(row),
                        static_cast<Eigen::Index>(col));
    }

    [[nodiscard]] OperatorMatrix adjoint() const;
    [[nodiscard]] bool is_hermitian(double tol = 1e-12) const;
    [[nodiscard]] bool is_unitary(double tol = 1e-9) const;

    OperatorMatrix &operator+=(const OperatorMatrix &rhs);
    OperatorMatrix &operator-=(const OperatorMatrix &rhs);
    OperatorMatrix &operator*=(Complex scale);

  private:
    int n_qubits_;
    CMatrix entries_;
};

OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix &rhs);
OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix &rhs);
OperatorMatrix operator*(const OperatorMatrix &lhs, const OperatorMatrix &rhs);
OperatorMatrix operator*(Complex scale, OperatorMatrix op);

/// Product of single-qubit Pauli factors with a real coefficient.
struct PauliTerm {
    double coefficient = 1.0;
    std::map<int, Axis> factors;
};

/// The 2x2 Pauli matrix for one axis.
CMatrix pauli(Axis axis);

/// I (x) ... (x) sigma_axis (x) ... (x) I with sigma at `qubit`.
OperatorMatrix embed_pauli(Axis axis, int qubit, int n_qubits);

/// Embeds an arbitrary 2x2 matrix acting on one qubit.
OperatorMatrix embed_single(const CMatrix &gate, int qubit, int n_qubits);

OperatorMatrix pauli_term_matrix(const PauliTerm &term, int n_qubits);

/// Plain matrix-vector product; the result is not renormalized.
CVector apply(const OperatorMatrix &op, const CVector &psi);
CVector apply(const OperatorMatrix &op, const StateVector &psi);

/// |<phi|psi>|^2.
double fidelity_overlap(const StateVector &phi, const StateVector &psi);

/// Largest entry modulus of a matrix.
double max_abs(const CMatrix &m);

/// Global phase e^{ia} that best aligns `b` onto `a` in the Frobenius sense.
Complex aligning_phase(const CMatrix &a, const CMatrix &b);

/// max |a - e^{ia} b| after the aligning phase; 0 means equal up to a
/// global phase.
double phase_insensitive_distance(const CMatrix &a, const CMatrix &b);

/// Max-norm deviation of U^dagger U from the identity.
double unitarity_error(const CMatrix &u);

} // namespace pulseq
