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

#include "z2chaos/pauli.hpp"

namespace z2chaos {

/// Parameters of the plaquette chain and its dual qubit encoding.
///
/// Qubit layout: 0 is the boundary link between the complement and A,
/// 1..la are the bulk plaquettes of A, la+1 is the other boundary link and
/// la+2..lx+1 are the bulk plaquettes of the complement.
struct ModelConfig {
    int lx = 10;
    int la = 4;
    double g = 0.85;
    int v_y = 1; // ribbon eigenvalue; only +1 is supported
    std::uint64_t seed = 0;

    [[nodiscard]] int n_qubits() const { return lx + 2; }
    [[nodiscard]] int subsystem_qubits() const { return la + 2; }
    [[nodiscard]] double kappa() const { return 1.0 + v_y; }

    /// Throws std::invalid_argument on an unsupported configuration.
    void validate() const;

    friend bool operator==(const ModelConfig &, const ModelConfig &) = default;
};

/// Plain "key = value" text with keys lx, la, g, seed. Unknown keys throw.
ModelConfig parse_model_config(std::string_view text);
std::string format_model_config(const ModelConfig &config);
ModelConfig read_model_config(const std::filesystem::path &path);
void write_model_config(const std::filesystem::path &path,
                        const ModelConfig &config);

enum class TermFamily {
    MagneticBulk,
    MagneticBoundary,
    ElectricPair,
    ElectricBoundary,
    ElectricBulkSingle,
};

std::string_view family_name(TermFamily f);

struct HamiltonianTerm {
    PauliTerm term;
    TermFamily family;
};

struct HamiltonianSpec {
    int n_qubits = 0;
    std::vector<HamiltonianTerm> terms;
    /// Diagonal Z-strings that commute with every term. Used to block the
    /// exact propagator; may be empty.
    std::vector<PauliString> conserved;

    [[nodiscard]] std::size_t count(TermFamily f) const;
};

/// Computational basis state; bits[q] == 1 means spin down on qubit q.
struct BasisState {
    std::vector<std::uint8_t> bits;

    [[nodiscard]] int n_qubits() const { return static_cast<int>(bits.size()); }
    /// Basis index with qubit 0 as the most significant bit.
    [[nodiscard]] std::uint64_t index() const;
    [[nodiscard]] std::string to_string() const;

    static BasisState from_index(std::uint64_t index, int n_qubits);
    /// Accepts '0'/'1' or arrow characters (up = 0, down = 1).
    static BasisState parse(std::string_view text);

    friend bool operator==(const BasisState &, const BasisState &) = default;
};

HamiltonianSpec build_dual_hamiltonian(const ModelConfig &config);

/// Three-body Z strings around the two boundary links; the first one wraps
/// through the periodic direction.
std::array<PauliTerm, 2> gauss_operators(const ModelConfig &config);

/// Two-body Z strings inside A, ordered (wrap-side boundary, inner boundary).
std::array<PauliTerm, 2> symmetry_operators(const ModelConfig &config);

/// Uniform bulk spins, boundary bits completed so both Gauss operators are +1.
BasisState sample_initial_state(const ModelConfig &config, std::uint64_t seed);

/// Eigenvalue (+1/-1) of a Z string on a basis state.
int z_string_value(const PauliString &z, const BasisState &state);

/// Sector label 1..4 for an index into the subsystem basis.
int sector_label(std::uint64_t row_index, const ModelConfig &config);

/// Subsystem basis indices grouped by sector label.
class SectorPartition {
  public:
    explicit SectorPartition(const ModelConfig &config);

    [[nodiscard]] int subsystem_qubits() const { return m_; }
    [[nodiscard]] std::size_t dim() const { return labels_.size(); }
    /// Indices with label s (1-based), ascending.
    [[nodiscard]] const std::vector<int> &indices(int s) const;
    [[nodiscard]] int label(std::size_t index) const {
        return labels_[index];
    }

  private:
    int m_;
    std::vector<int> labels_;
    std::array<std::vector<int>, 4> blocks_;
};

} // namespace z2chaos
