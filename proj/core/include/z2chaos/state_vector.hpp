// Copyright 2026 The z2chaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "z2chaos/lattice.hpp"
#include "z2chaos/pauli.hpp"

namespace z2chaos {

using cplx = std::complex<double>;

/// Dense amplitudes of an n-qubit register, qubit 0 = most significant bit.
class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(int n_qubits);
    StateVector(int n_qubits, Eigen::VectorXcd amplitudes);

    [[nodiscard]] int n_qubits() const { return n_; }
    [[nodiscard]] std::size_t dim() const {
        return static_cast<std::size_t>(amps_.size());
    }
    [[nodiscard]] const Eigen::VectorXcd &amplitudes() const { return amps_; }
    Eigen::VectorXcd &amplitudes() { return amps_; }
    cplx &operator[](std::size_t i) {
        return amps_[static_cast<Eigen::Index>(i)];
    }
    const cplx &operator[](std::size_t i) const {
        return amps_[static_cast<Eigen::Index>(i)];
    }

    [[nodiscard]] double norm() const { return amps_.norm(); }
    /// |<this|other>|^2
    [[nodiscard]] double fidelity(const StateVector &other) const;

  private:
    int n_ = 0;
    Eigen::VectorXcd amps_;
};

/// Bit of the basis index that carries qubit q.
inline std::uint64_t qubit_bit(int q, int n_qubits) {
    return std::uint64_t{1} << (n_qubits - 1 - q);
}

/// Qubit masks of a Pauli string translated to basis-index masks.
struct IndexMasks {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    int y_count = 0;
};
IndexMasks index_masks(const PauliString &p, int n_qubits);

struct DensityCheck {
    double hermiticity = 0.0; // max |rho - rho^dagger|
    double trace_error = 0.0; // |Tr rho - 1|
    double min_eigenvalue = 0.0;
    [[nodiscard]] bool ok(double herm_tol = 1e-12, double trace_tol = 1e-10,
                          double eig_tol = 1e-10) const {
        return hermiticity <= herm_tol && trace_error <= trace_tol &&
               min_eigenvalue >= -eig_tol;
    }
};

/// Reduced density matrix on the leading m qubits of a register.
class DensityMatrix {
  public:
    DensityMatrix() = default;
    DensityMatrix(int n_qubits, Eigen::MatrixXcd entries);

    static DensityMatrix maximally_mixed(int n_qubits);

    [[nodiscard]] int n_qubits() const { return n_; }
    [[nodiscard]] std::size_t dim() const {
        return static_cast<std::size_t>(m_.rows());
    }
    [[nodiscard]] const Eigen::MatrixXcd &matrix() const { return m_; }

    [[nodiscard]] DensityCheck check() const;
    /// Throws std::domain_error when the invariants are violated.
    void validate(double herm_tol = 1e-12, double trace_tol = 1e-10,
                  double eig_tol = 1e-10) const;

  private:
    int n_ = 0;
    Eigen::MatrixXcd m_;
};

StateVector prepare(const BasisState &basis_state);

/// In-place |psi> <- P |psi>.
void apply_pauli(StateVector &state, const PauliString &p);

/// coefficient * <psi|P|psi>. Throws std::logic_error if the imaginary part
/// exceeds 1e-8.
double expectation(const StateVector &state, const PauliTerm &term);
double expectation(const StateVector &state, const PauliString &p);

/// Sum of coefficient * <psi|P|psi> over the terms of h.
double energy(const StateVector &state, const HamiltonianSpec &h);

/// Dense 2^n x 2^n matrix of a Pauli string.
Eigen::MatrixXcd dense_matrix(const PauliString &p, int n_qubits);
/// Dense matrix of a Hamiltonian; for small registers only.
Eigen::MatrixXcd dense_matrix(const HamiltonianSpec &h);

/// Keeps qubits 0..keep_count-1.
DensityMatrix partial_trace(const StateVector &state, int keep_count);

/// e^{-iHt} from one eigendecomposition, split into blocks of the conserved
/// Z-string charges in h.conserved.
class ExactPropagator {
  public:
    explicit ExactPropagator(const HamiltonianSpec &h);

    [[nodiscard]] int n_qubits() const { return n_; }
    [[nodiscard]] std::size_t block_count() const { return blocks_.size(); }

    [[nodiscard]] StateVector evolve(const StateVector &state, double t) const;

    /// Eigenvalues of all blocks, ascending.
    [[nodiscard]] std::vector<double> eigenvalues() const;
    /// k-th eigenpair in block-major order.
    [[nodiscard]] std::pair<double, StateVector> eigenpair(std::size_t k) const;
    [[nodiscard]] std::size_t dim() const { return std::size_t{1} << n_; }

  private:
    struct Block {
        std::vector<std::uint64_t> indices;
        Eigen::VectorXd energies;
        Eigen::MatrixXcd vectors;
    };
    int n_ = 0;
    std::vector<Block> blocks_;
};

/// exact evolution with a process-wide cache of propagators keyed by the
/// Hamiltonian terms.
StateVector exact_evolve(const StateVector &state, const HamiltonianSpec &h,
                         double t);
std::shared_ptr<const ExactPropagator>
cached_propagator(const HamiltonianSpec &h);

} // namespace z2chaos
