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
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "z2chaos/circuit.hpp"
#include "z2chaos/rng.hpp"
#include "z2chaos/state_vector.hpp"

namespace z2chaos {

/// Per-qubit Euler angles; the rotation on qubit q is RZ(g1), then RY(g2),
/// then RZ(g3) in time order.
struct RandomBasis {
    int basis_id = 0;
    std::vector<std::array<double, 3>> angles;

    [[nodiscard]] int n_qubits() const {
        return static_cast<int>(angles.size());
    }
    void validate() const;

    friend bool operator==(const RandomBasis &, const RandomBasis &) = default;
};

/// Haar-random single-qubit bases (overall phase dropped).
RandomBasis sample_cue_basis(CounterRng &rng, int n_qubits, int basis_id = 0);

Circuit basis_rotation_circuit(const RandomBasis &basis);

/// 2x2 unitary RZ(g3) RY(g2) RZ(g1).
Eigen::Matrix2cd basis_unitary(const std::array<double, 3> &angles);
/// Kronecker product of the first m qubit rotations, qubit 0 as the high bit.
Eigen::MatrixXcd basis_unitary(const RandomBasis &basis, int m);

struct MeasurementRecord {
    RandomBasis basis;
    int n_qubits = 0;       // register the basis was applied to
    int subsystem_size = 0; // leading qubits kept in the counts
    std::int64_t n_shots = 0;
    std::vector<std::int64_t> counts; // indexed by subsystem bitstring

    [[nodiscard]] std::vector<double> frequencies() const;
    void validate() const;

    friend bool operator==(const MeasurementRecord &,
                           const MeasurementRecord &) = default;
};

/// Rotates the state into the basis, samples n_shots full-register
/// bitstrings from the Born probabilities and keeps the leading
/// subsystem_size bits.
MeasurementRecord simulate_measurements(const StateVector &state,
                                        const RandomBasis &basis,
                                        std::int64_t n_shots, CounterRng &rng,
                                        int subsystem_size);

/// Born probabilities of all full-register bitstrings in the given basis,
/// marginalized to the leading subsystem_size qubits.
std::vector<double> marginal_basis_probabilities(const StateVector &state,
                                                 const RandomBasis &basis,
                                                 int subsystem_size);

/// Tr[U^dagger |b><b| U rho] for all b, using the first m basis angles.
std::vector<double> exact_basis_probabilities(const DensityMatrix &rho,
                                              const RandomBasis &basis);

/// Line-oriented text: header lines, "angle q g1 g2 g3" rows, "counts",
/// then "bitstring count" rows for nonzero counts, closed by "end".
std::string format_record(const MeasurementRecord &r);
std::vector<MeasurementRecord> parse_records(std::string_view text);
void write_records(const std::filesystem::path &path,
                   const std::vector<MeasurementRecord> &records);
std::vector<MeasurementRecord> read_records(const std::filesystem::path &path);

} // namespace z2chaos
