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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "z2chaos/circuit.hpp"
#include "z2chaos/rng.hpp"

using namespace z2chaos;
using std::numbers::pi;

namespace {

// Unitary of a gate list on n qubits by applying it to every basis vector.
Eigen::MatrixXcd circuit_unitary(const std::vector<Gate> &gates, int n) {
    Circuit c(n);
    c.append(gates);
    const auto dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd u(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        StateVector s(n);
        s[0] = 0.0;
        s[static_cast<std::size_t>(k)] = 1.0;
        u.col(k) = apply_circuit(s, c).amplitudes();
    }
    return u;
}

} // namespace

TEST(GateMatrix, MatchesClosedForms) {
    for (double a : {0.0, 0.3, -1.7, 2.9}) {
        EXPECT_LT((gate_matrix(Gate::rx(0, a)) - oracle::rx(a)).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LT((gate_matrix(Gate::ry(0, a)) - oracle::ry(a)).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LT((gate_matrix(Gate::rz(0, a)) - oracle::rz(a)).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LT((gate_matrix(Gate::rxx(0, 1, a)) - oracle::rxx(a)).cwiseAbs().maxCoeff(),
                  1e-15);
        // RXX(a) = exp(-i a XX)
        const Eigen::MatrixXcd want = oracle::expm(oracle::cplx(0, -a) * oracle::pauli_kron("XX"));
        EXPECT_LT((gate_matrix(Gate::rxx(0, 1, a)) - want).cwiseAbs().maxCoeff(), 1e-13);
    }
}

TEST(DecomposeZz, EqualsZzExponential) {
    for (double a : {0.0, pi / 8, -0.9}) {
        const auto u = circuit_unitary(decompose_zz(0, 1, a), 2);
        const Eigen::MatrixXcd want = oracle::expm(oracle::cplx(0, -a) * oracle::pauli_kron("ZZ"));
        EXPECT_LT(oracle::phase_distance(u, want), 1e-12) << a;
        const Eigen::MatrixXcd zz = oracle::pauli_kron("ZZ");
        EXPECT_LT((u * zz - zz * u).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(ReduceMsAngle, ExampleCases) {
    const auto a = reduce_ms_angle(0.5);
    EXPECT_DOUBLE_EQ(a.angle, 0.5);
    EXPECT_FALSE(a.x_flips);
    const auto b = reduce_ms_angle(pi);
    EXPECT_NEAR(b.angle, 0.0, 1e-15);
    EXPECT_FALSE(b.x_flips);
    const auto c = reduce_ms_angle(0.6 * pi);
    EXPECT_NEAR(c.angle, 0.1 * pi, 1e-15);
    EXPECT_TRUE(c.x_flips);
    const auto u = circuit_unitary(ms_gate(0, 1, 0.6 * pi), 2);
    EXPECT_LT(oracle::phase_distance(u, oracle::rxx(0.6 * pi)), 1e-12);
    EXPECT_LE(std::abs(reduce_ms_angle(pi / 4).angle), pi / 4);
}

TEST(Trotter, GateBudgetAndIdentityAtZero) {
    const ModelConfig cfg;
    const auto h = build_dual_hamiltonian(cfg);
    const auto step = build_trotter_circuit(h, 0.1, 1);
    EXPECT_EQ(step.count(GateKind::RXX), 12U);
    for (const auto &g : step.gates()) {
        if (g.kind == GateKind::RXX) {
            EXPECT_LE(std::abs(g.angle), pi / 4 + 1e-15);
        }
    }
    const auto zero = build_trotter_circuit(h, 0.0, 4);
    const auto psi = prepare(BasisState::parse("111011000100"));
    EXPECT_GT(apply_circuit(psi, zero).fidelity(psi), 1.0 - 1e-12);
}

TEST(Trotter, FidelityAtShortTimeMatchesOracle) {
    const ModelConfig cfg;
    const auto h = build_dual_hamiltonian(cfg);
    const double t = 0.425 / cfg.g;
    const auto psi = prepare(BasisState::parse("111011000100"));
    const auto trot = apply_circuit(psi, build_trotter_circuit(h, t, 4));
    const oracle::TaylorEvolver ref(oracle::sparse_hamiltonian(cfg.lx, cfg.la, cfg.g));
    const Eigen::VectorXcd exact = ref.evolve(psi.amplitudes(), t);
    const Eigen::VectorXcd otrot = oracle::trotter_evolve(
        oracle::dual_terms(cfg.lx, cfg.la, cfg.g), 12, psi.amplitudes(), t, 4);
    const double f = std::norm(exact.dot(trot.amplitudes()));
    const double f_oracle = std::norm(exact.dot(otrot));
    EXPECT_NEAR(f, f_oracle, 1e-10);
    // Frozen from the oracle run: 0.9295 at 4 steps.
    EXPECT_NEAR(f_oracle, 0.9295, 5e-4);
    EXPECT_GE(std::norm(exact.dot(oracle::trotter_evolve(oracle::dual_terms(cfg.lx, cfg.la, cfg.g), 12,
                                                         psi.amplitudes(), t, 16))),
              0.99);
}

TEST(Trotter, OneStepMatchesFamilyExponentialsOnFourQubits) {
    const double g = 0.7;
    HamiltonianSpec h;
    h.n_qubits = 4;
    auto add = [&](double c, PauliString p, TermFamily f) { h.terms.push_back({PauliTerm(c, p), f}); };
    add(g, PauliString::single(0, Axis::Z), TermFamily::ElectricBoundary);
    add(2 * g, PauliString::single(1, Axis::Z), TermFamily::ElectricBulkSingle);
    add(2 * g, PauliString::single(2, Axis::Z), TermFamily::ElectricBulkSingle);
    add(g, PauliString::z_string({1, 2}), TermFamily::ElectricPair);
    add(g, PauliString::z_string({2, 3}), TermFamily::ElectricPair);
    add(1.0, PauliString::single(2, Axis::X), TermFamily::MagneticBulk);
    add(1.0, PauliString::x_string({0, 1}), TermFamily::MagneticBoundary);
    add(1.0, PauliString::x_string({3, 2}), TermFamily::MagneticBoundary);
    const double dt = 0.37;
    const auto u = circuit_unitary(build_trotter_circuit(h, dt, 1).gates(), 4);

    // Product of exp(-i H_f dt) over Z, ZZ, X, XX in that order; terms
    // within a family commute.
    const std::vector<std::pair<double, std::vector<std::pair<int, char>>>> terms = {
        {g, {{0, 'Z'}}},          {2 * g, {{1, 'Z'}}},      {2 * g, {{2, 'Z'}}},
        {g, {{1, 'Z'}, {2, 'Z'}}}, {g, {{2, 'Z'}, {3, 'Z'}}}, {1.0, {{2, 'X'}}},
        {1.0, {{0, 'X'}, {1, 'X'}}}, {1.0, {{2, 'X'}, {3, 'X'}}}};
    auto family = [&](char axis, std::size_t weight) {
        Eigen::MatrixXcd hf = Eigen::MatrixXcd::Zero(16, 16);
        for (const auto &[c, f] : terms) {
            if (f.size() == weight && f.front().second == axis) {
                hf += c * oracle::pauli(4, f);
            }
        }
        return oracle::expm(oracle::cplx(0, -dt) * hf);
    };
    const Eigen::MatrixXcd want = family('X', 2) * family('X', 1) * family('Z', 2) * family('Z', 1);
    EXPECT_LT(oracle::phase_distance(u, want), 1e-10);
}

TEST(Circuit, InverseAndTextRoundTrip) {
    const ModelConfig cfg;
    const auto c = build_trotter_circuit(build_dual_hamiltonian(cfg), 1.3, 2);
    auto rng = CounterRng::stream(3);
    StateVector psi(12);
    for (std::size_t k = 0; k < psi.dim(); ++k) {
        psi[k] = cplx(rng.normal(), rng.normal());
    }
    psi.amplitudes().normalize();
    auto out = apply_circuit(apply_circuit(psi, c), c.inverse());
    EXPECT_LT((out.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ(Circuit::from_text(c.to_text()).gates(), c.gates());
    EXPECT_LT((apply_circuit(psi, Circuit(12)).amplitudes() - psi.amplitudes()).norm(), 1e-15);
}
