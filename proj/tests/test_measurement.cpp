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
#include "z2chaos/lattice.hpp"
#include "z2chaos/measurement.hpp"

using namespace z2chaos;
using std::numbers::pi;

namespace {

StateVector evolved_state(double gt) {
    const ModelConfig cfg;
    return exact_evolve(prepare(BasisState::parse("111011000100")), build_dual_hamiltonian(cfg),
                        gt / cfg.g);
}

RandomBasis identity_basis(int n) {
    RandomBasis b;
    b.angles.assign(static_cast<std::size_t>(n), {0.0, 0.0, 0.0});
    return b;
}

} // namespace

TEST(CueBasis, ReproducibleAndInRange) {
    auto r1 = CounterRng::stream(11, {4});
    auto r2 = CounterRng::stream(11, {4});
    const auto a = sample_cue_basis(r1, 12, 3);
    const auto b = sample_cue_basis(r2, 12, 3);
    EXPECT_EQ(a.angles, b.angles);
    EXPECT_EQ(a.basis_id, 3);
    EXPECT_NO_THROW(a.validate());
}

TEST(CueBasis, HaarMoments) {
    auto rng = CounterRng::stream(2024);
    const int n = 100000;
    double m1 = 0.0;
    double m1sq = 0.0;
    double fp = 0.0;
    double fpsq = 0.0;
    for (int k = 0; k < n; ++k) {
        const auto ua = basis_unitary(sample_cue_basis(rng, 1).angles[0]);
        const auto ub = basis_unitary(sample_cue_basis(rng, 1).angles[0]);
        const double p = std::norm(ua(0, 0));
        const double f = std::pow(std::norm((ua.adjoint() * ub).trace()), 2);
        m1 += p;
        m1sq += p * p;
        fp += f;
        fpsq += f * f;
    }
    m1 /= n;
    fp /= n;
    const double s1 = std::sqrt((m1sq / n - m1 * m1) / n);
    const double s2 = std::sqrt((fpsq / n - fp * fp) / n);
    EXPECT_LT(std::abs(m1 - 0.5), 3 * s1);
    EXPECT_LT(std::abs(fp - 2.0), 3 * s2);
}

TEST(BasisRotation, GateCountAndIdentity) {
    auto rng = CounterRng::stream(1);
    EXPECT_EQ(basis_rotation_circuit(sample_cue_basis(rng, 12)).size(), 36U);
    const auto psi = evolved_state(0.5);
    const auto out = apply_circuit(psi, basis_rotation_circuit(identity_basis(12)));
    EXPECT_GT(out.fidelity(psi), 1.0 - 1e-14);
}

TEST(BasisRotation, HalfPiPolarAngleMapsZOntoMinusX) {
    // Random single-qubit state; RY(pi/2) takes X to -Z under conjugation,
    // so the rotated Z expectation is minus the original X expectation.
    const oracle::cplx a(0.3, -0.2);
    const oracle::cplx b(0.6, 0.5);
    StateVector psi(1);
    psi[0] = a;
    psi[1] = b;
    psi.amplitudes().normalize();
    const double x_before = expectation(psi, PauliString::single(0, Axis::X));
    RandomBasis basis;
    basis.angles = {{0.0, pi / 2, 0.0}};
    const auto rotated = apply_circuit(psi, basis_rotation_circuit(basis));
    const double z_after = expectation(rotated, PauliString::single(0, Axis::Z));
    const Eigen::Matrix2cd u = oracle::ry(pi / 2);
    const Eigen::Vector2cd v = u * psi.amplitudes();
    EXPECT_NEAR(z_after, std::norm(v[0]) - std::norm(v[1]), 1e-12);
    EXPECT_NEAR(z_after, -x_before, 1e-12);
    // (pi, pi/2, pi) measures +X.
    basis.angles = {{pi, pi / 2, pi}};
    const auto flipped = apply_circuit(psi, basis_rotation_circuit(basis));
    EXPECT_NEAR(expectation(flipped, PauliString::single(0, Axis::Z)), x_before, 1e-12);
}

TEST(BasisUnitary, MatchesEulerProduct) {
    const std::array<double, 3> g{0.4, 1.1, -2.0};
    const Eigen::Matrix2cd want = oracle::rz(g[2]) * oracle::ry(g[1]) * oracle::rz(g[0]);
    EXPECT_LT((basis_unitary(g) - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Measurement, IdentityBasisOnProductStateHitsOneOutcome) {
    const auto psi = prepare(BasisState::parse("101100000000"));
    auto rng = CounterRng::stream(5);
    const auto r = simulate_measurements(psi, identity_basis(12), 500, rng, 6);
    EXPECT_EQ(r.counts[0b101100], 500);
    EXPECT_NO_THROW(r.validate());
}

TEST(Measurement, MillionShotsWithinMultinomialBounds) {
    const auto psi = evolved_state(1.0);
    auto rng = CounterRng::stream(99);
    const auto basis = sample_cue_basis(rng, 12);
    const std::int64_t shots = 1000000;
    const auto rec = simulate_measurements(psi, basis, shots, rng, 6);
    const auto p = marginal_basis_probabilities(psi, basis, 6);
    ASSERT_EQ(p.size(), 64U);
    const auto f = rec.frequencies();
    for (std::size_t b = 0; b < 64; ++b) {
        const double sigma = std::sqrt(p[b] * (1 - p[b]) / static_cast<double>(shots));
        EXPECT_LE(std::abs(f[b] - p[b]), 4 * sigma + 1e-12) << b;
    }
}

TEST(Measurement, MarginalsEqualSubsystemBornRule) {
    const auto psi = evolved_state(1.7);
    const auto rho = partial_trace(psi, 6);
    auto rng = CounterRng::stream(8);
    for (int k = 0; k < 4; ++k) {
        const auto basis = sample_cue_basis(rng, 12, k);
        const auto a = marginal_basis_probabilities(psi, basis, 6);
        const auto b = exact_basis_probabilities(rho, basis);
        // Independent route: Kronecker of the oracle's Euler products.
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
        for (int q = 0; q < 6; ++q) {
            const auto &g = basis.angles[static_cast<std::size_t>(q)];
            const Eigen::Matrix2cd uq = oracle::rz(g[2]) * oracle::ry(g[1]) * oracle::rz(g[0]);
            Eigen::MatrixXcd next(u.rows() * 2, u.cols() * 2);
            for (Eigen::Index r = 0; r < u.rows(); ++r) {
                for (Eigen::Index c = 0; c < u.cols(); ++c) {
                    next.block(r * 2, c * 2, 2, 2) = u(r, c) * uq;
                }
            }
            u = next;
        }
        const Eigen::MatrixXcd rot = u * rho.matrix() * u.adjoint();
        for (std::size_t i = 0; i < 64; ++i) {
            EXPECT_NEAR(a[i], b[i], 1e-10);
            EXPECT_NEAR(b[i], rot(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real(),
                        1e-10);
        }
    }
}

TEST(Measurement, SimpleDensityCases) {
    const auto mixed = DensityMatrix::maximally_mixed(6);
    auto rng = CounterRng::stream(2);
    for (double p : exact_basis_probabilities(mixed, sample_cue_basis(rng, 6))) {
        EXPECT_NEAR(p, 1.0 / 64, 1e-14);
    }
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
    d.diagonal() << 0.1, 0.2, 0.3, 0.4;
    const auto probs = exact_basis_probabilities(DensityMatrix(2, d), identity_basis(2));
    EXPECT_NEAR(probs[2], 0.3, 1e-15);
}

TEST(Measurement, RecordTextRoundTrip) {
    const auto psi = evolved_state(0.7);
    auto rng = CounterRng::stream(41);
    std::vector<MeasurementRecord> recs;
    for (int k = 0; k < 3; ++k) {
        recs.push_back(simulate_measurements(psi, sample_cue_basis(rng, 12, k), 750, rng, 6));
    }
    std::string text;
    for (const auto &r : recs) {
        text += format_record(r);
    }
    EXPECT_EQ(parse_records(text), recs);
    EXPECT_THROW(parse_records("garbage\n"), std::exception);
}
