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
#include "z2chaos/pauli.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace z2chaos {

namespace {

void check_index(int qubit) {
    if (qubit < 0 || qubit >= PauliString::kMaxQubits) {
        throw std::invalid_argument("Pauli factor qubit index out of range: " +
                                    std::to_string(qubit));
    }
}

void set_factor(std::uint64_t &x, std::uint64_t &z, int qubit, Axis a) {
    check_index(qubit);
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    if (((x | z) & bit) != 0) {
        throw std::invalid_argument("duplicate Pauli factor on qubit " +
                                    std::to_string(qubit));
    }
    if (a != Axis::Z) {
        x |= bit;
    }
    if (a != Axis::X) {
        z |= bit;
    }
}

} // namespace

char axis_char(Axis a) {
    switch (a) {
    case Axis::X:
        return 'X';
    case Axis::Y:
        return 'Y';
    case Axis::Z:
        return 'Z';
    }
    return '?';
}

PauliString::PauliString(std::initializer_list<std::pair<int, Axis>> factors) {
    for (const auto &[q, a] : factors) {
        set_factor(x_, z_, q, a);
    }
}

PauliString::PauliString(const std::map<int, Axis> &factors) {
    for (const auto &[q, a] : factors) {
        set_factor(x_, z_, q, a);
    }
}

PauliString PauliString::single(int qubit, Axis a) {
    return PauliString{{qubit, a}};
}

PauliString PauliString::z_string(std::initializer_list<int> qubits) {
    PauliString p;
    for (int q : qubits) {
        set_factor(p.x_, p.z_, q, Axis::Z);
    }
    return p;
}

PauliString PauliString::x_string(std::initializer_list<int> qubits) {
    PauliString p;
    for (int q : qubits) {
        set_factor(p.x_, p.z_, q, Axis::X);
    }
    return p;
}

PauliString PauliString::parse(std::string_view text) {
    if (text.size() > static_cast<std::size_t>(kMaxQubits)) {
        throw std::invalid_argument("Pauli string longer than 64 qubits");
    }
    PauliString p;
    for (std::size_t q = 0; q < text.size(); ++q) {
        switch (text[q]) {
        case 'I':
            break;
        case 'X':
            set_factor(p.x_, p.z_, static_cast<int>(q), Axis::X);
            break;
        case 'Y':
            set_factor(p.x_, p.z_, static_cast<int>(q), Axis::Y);
            break;
        case 'Z':
            set_factor(p.x_, p.z_, static_cast<int>(q), Axis::Z);
            break;
        default:
            throw std::invalid_argument("invalid Pauli character '" +
                                        std::string(1, text[q]) + "'");
        }
    }
    return p;
}

std::optional<Axis> PauliString::axis(int qubit) const {
    if (qubit < 0 || qubit >= kMaxQubits) {
        return std::nullopt;
    }
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    const bool xb = (x_ & bit) != 0;
    const bool zb = (z_ & bit) != 0;
    if (xb && zb) {
        return Axis::Y;
    }
    if (xb) {
        return Axis::X;
    }
    if (zb) {
        return Axis::Z;
    }
    return std::nullopt;
}

std::map<int, Axis> PauliString::factors() const {
    std::map<int, Axis> out;
    std::uint64_t s = support_mask();
    while (s != 0) {
        const int q = std::countr_zero(s);
        out.emplace(q, *axis(q));
        s &= s - 1;
    }
    return out;
}

int PauliString::weight() const { return std::popcount(x_ | z_); }

int PauliString::y_count() const { return std::popcount(x_ & z_); }

int PauliString::min_qubit() const {
    return is_identity() ? -1 : std::countr_zero(support_mask());
}

int PauliString::max_qubit() const {
    return is_identity() ? -1 : 63 - std::countl_zero(support_mask());
}

int PauliString::span() const {
    return is_identity() ? 0 : max_qubit() - min_qubit() + 1;
}

bool PauliString::is_pure(Axis a) const {
    switch (a) {
    case Axis::X:
        return z_ == 0;
    case Axis::Z:
        return x_ == 0;
    case Axis::Y:
        return x_ == z_;
    }
    return false;
}

bool PauliString::commutes_with(const PauliString &other) const {
    const int overlap =
        std::popcount((x_ & other.z_) ^ (z_ & other.x_));
    return (overlap & 1) == 0;
}

std::optional<PauliString> PauliString::shifted(int offset,
                                                int n_qubits) const {
    if (is_identity()) {
        return *this;
    }
    const int lo = min_qubit() + offset;
    const int hi = max_qubit() + offset;
    if (lo < 0 || hi >= n_qubits || hi >= kMaxQubits) {
        return std::nullopt;
    }
    if (offset >= 0) {
        return from_masks(x_ << offset, z_ << offset);
    }
    return from_masks(x_ >> -offset, z_ >> -offset);
}

std::string PauliString::to_string(int n_qubits) const {
    std::string out(static_cast<std::size_t>(n_qubits), 'I');
    for (const auto &[q, a] : factors()) {
        if (q >= n_qubits) {
            throw std::invalid_argument(
                "Pauli string does not fit in the requested width");
        }
        out[static_cast<std::size_t>(q)] = axis_char(a);
    }
    return out;
}

PauliProduct multiply(const PauliString &a, const PauliString &b) {
    // P = i^{y(P)} X^x Z^z, and Z^z X^x = (-1)^{|z & x|} X^x Z^z.
    const PauliString r = PauliString::from_masks(a.x_mask() ^ b.x_mask(),
                                                  a.z_mask() ^ b.z_mask());
    const int swaps = std::popcount(a.z_mask() & b.x_mask());
    int phase = a.y_count() + b.y_count() - r.y_count() + 2 * swaps;
    phase %= 4;
    if (phase < 0) {
        phase += 4;
    }
    return {phase, r};
}

PauliTerm::PauliTerm(double coefficient, PauliString string)
    : coefficient_(coefficient), string_(string) {
    if (!std::isfinite(coefficient) || coefficient == 0.0) {
        throw std::invalid_argument(
            "PauliTerm coefficient must be finite and nonzero");
    }
}

void PauliTerm::check_qubits(int n_qubits) const {
    if (!string_.is_identity() && string_.max_qubit() >= n_qubits) {
        throw std::invalid_argument("PauliTerm acts on qubit " +
                                    std::to_string(string_.max_qubit()) +
                                    " outside a register of " +
                                    std::to_string(n_qubits));
    }
}

} // namespace z2chaos
