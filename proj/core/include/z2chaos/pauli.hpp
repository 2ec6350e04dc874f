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

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace z2chaos {

enum class Axis : std::uint8_t { X, Y, Z };

char axis_char(Axis a);

/// Tensor product of single-qubit Pauli matrices, stored in symplectic form.
///
/// Bit q of x_mask()/z_mask() refers to qubit q (not to a basis-index bit);
/// X sets only the x bit, Z only the z bit, Y sets both. Up to 64 qubits.
class PauliString {
  public:
    static constexpr int kMaxQubits = 64;

    PauliString() = default;
    PauliString(std::initializer_list<std::pair<int, Axis>> factors);
    explicit PauliString(const std::map<int, Axis> &factors);

    static PauliString from_masks(std::uint64_t x_mask, std::uint64_t z_mask) {
        PauliString p;
        p.x_ = x_mask;
        p.z_ = z_mask;
        return p;
    }
    static PauliString single(int qubit, Axis a);
    static PauliString z_string(std::initializer_list<int> qubits);
    static PauliString x_string(std::initializer_list<int> qubits);

    /// Parses "XIZY..." where position q is qubit q.
    static PauliString parse(std::string_view text);

    [[nodiscard]] std::uint64_t x_mask() const { return x_; }
    [[nodiscard]] std::uint64_t z_mask() const { return z_; }
    [[nodiscard]] std::uint64_t support_mask() const { return x_ | z_; }

    [[nodiscard]] std::optional<Axis> axis(int qubit) const;
    [[nodiscard]] std::map<int, Axis> factors() const;

    [[nodiscard]] bool is_identity() const { return (x_ | z_) == 0; }
    [[nodiscard]] bool is_diagonal() const { return x_ == 0; }
    [[nodiscard]] int weight() const;
    [[nodiscard]] int y_count() const;
    [[nodiscard]] int min_qubit() const;
    [[nodiscard]] int max_qubit() const;
    /// Number of consecutive qubits covered from min_qubit() to max_qubit().
    [[nodiscard]] int span() const;
    /// True when every factor only uses the given axis.
    [[nodiscard]] bool is_pure(Axis a) const;

    [[nodiscard]] bool commutes_with(const PauliString &other) const;

    /// Image of the string under q -> q + offset; nullopt if any qubit leaves
    /// [0, n_qubits).
    [[nodiscard]] std::optional<PauliString> shifted(int offset,
                                                     int n_qubits) const;

    [[nodiscard]] std::string to_string(int n_qubits) const;

    auto operator<=>(const PauliString &) const = default;

  private:
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
};

/// a * b = i^phase * string.
struct PauliProduct {
    int phase = 0; // 0..3
    PauliString string;
};

PauliProduct multiply(const PauliString &a, const PauliString &b);

/// Weighted Pauli string. The coefficient is finite and nonzero.
class PauliTerm {
  public:
    PauliTerm(double coefficient, PauliString string);

    [[nodiscard]] double coefficient() const { return coefficient_; }
    [[nodiscard]] const PauliString &string() const { return string_; }
    [[nodiscard]] std::map<int, Axis> factors() const {
        return string_.factors();
    }

    /// Throws std::invalid_argument when a factor sits at or beyond n_qubits.
    void check_qubits(int n_qubits) const;

    friend bool operator==(const PauliTerm &, const PauliTerm &) = default;

  private:
    double coefficient_;
    PauliString string_;
};

} // namespace z2chaos
