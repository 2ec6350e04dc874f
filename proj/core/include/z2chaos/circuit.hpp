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

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "z2chaos/lattice.hpp"
#include "z2chaos/state_vector.hpp"

namespace z2chaos {

enum class GateKind { RX, RY, RZ, RXX };

std::string_view gate_name(GateKind k);

/// RX/RY/RZ(a) = exp(-i a sigma / 2); RXX(a) = exp(-i a X (x) X).
struct Gate {
    GateKind kind = GateKind::RZ;
    int q0 = 0;
    int q1 = -1; // RXX only
    double angle = 0.0;

    static Gate rx(int q, double a) { return {GateKind::RX, q, -1, a}; }
    static Gate ry(int q, double a) { return {GateKind::RY, q, -1, a}; }
    static Gate rz(int q, double a) { return {GateKind::RZ, q, -1, a}; }
    static Gate rxx(int q0, int q1, double a) {
        return {GateKind::RXX, q0, q1, a};
    }

    [[nodiscard]] bool two_qubit() const { return kind == GateKind::RXX; }
    /// Throws std::invalid_argument when qubits are inconsistent with kind.
    void validate(int n_qubits) const;

    friend bool operator==(const Gate &, const Gate &) = default;
};

class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(int n_qubits) : n_(n_qubits) {}

    [[nodiscard]] int n_qubits() const { return n_; }
    [[nodiscard]] const std::vector<Gate> &gates() const { return gates_; }
    [[nodiscard]] std::size_t size() const { return gates_.size(); }
    [[nodiscard]] std::size_t count(GateKind k) const;

    void push_back(const Gate &g);
    void append(const std::vector<Gate> &gs);
    void append(const Circuit &c);

    /// Reversed gate order with negated angles.
    [[nodiscard]] Circuit inverse() const;

    /// One "GATE q0 [q1] angle" line per gate after a "qubits n" header.
    [[nodiscard]] std::string to_text() const;
    static Circuit from_text(std::string_view text);

  private:
    int n_ = 0;
    std::vector<Gate> gates_;
};

void write_circuit(const std::filesystem::path &path, const Circuit &c);
Circuit read_circuit(const std::filesystem::path &path);

/// exp(-i angle Z_i Z_j) as RY(-pi/2) on both, RXX(angle), RY(pi/2) on both.
std::vector<Gate> decompose_zz(int i, int j, double angle);

struct MsAngle {
    double angle = 0.0;
    bool x_flips = false;
};

/// Maps an RXX angle to |angle| <= pi/4, with RX(pi) on both qubits when
/// x_flips is set. Interval boundaries belong to the lower case.
MsAngle reduce_ms_angle(double angle);

/// RXX(angle) after reduction: optional RX(pi) pair, then the reduced RXX.
std::vector<Gate> ms_gate(int i, int j, double angle);

enum class TrotterFamily { Z, ZZ, X, XX };

std::string_view trotter_family_name(TrotterFamily f);
TrotterFamily parse_trotter_family(std::string_view name);

using TrotterOrder = std::vector<TrotterFamily>;
inline TrotterOrder default_trotter_order() {
    return {TrotterFamily::Z, TrotterFamily::ZZ, TrotterFamily::X,
            TrotterFamily::XX};
}

/// First-order product formula with n_steps repetitions of the step
/// U(dt) = prod_families prod_terms exp(-i c P dt).
Circuit build_trotter_circuit(const HamiltonianSpec &h, double t, int n_steps,
                              const TrotterOrder &order = default_trotter_order());

void apply_gate(StateVector &state, const Gate &g);
void apply_circuit_inplace(StateVector &state, const Circuit &c);
StateVector apply_circuit(const StateVector &state, const Circuit &c);

/// 2x2 (or 4x4 for RXX) unitary of a gate, qubit q0 as the high bit.
Eigen::MatrixXcd gate_matrix(const Gate &g);

} // namespace z2chaos
