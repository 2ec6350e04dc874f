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

#include "oracles.hpp"
#include "z2chaos/lattice.hpp"
#include "z2chaos/rng.hpp"
#include "z2chaos/state_vector.hpp"

using namespace z2chaos;

namespace {

ModelConfig default_model() { return ModelConfig{}; }

} // namespace

TEST(PauliString, MultiplyAndCommute) {
    const auto x = PauliString::single(0, Axis::X);
    const auto z = PauliString::single(0, Axis::Z);
    EXPECT_FALSE(x.commutes_with(z));
    const auto xz = multiply(x, z);
    // XZ = -iY
    EXPECT_EQ(xz.string, PauliString::single(0, Axis::Y));
    EXPECT_EQ(xz.phase, 3);
    EXPECT_TRUE(PauliString::parse("XXI").commutes_with(PauliString::parse("ZZI")));
    EXPECT_EQ(PauliString::parse("XIZY").to_string(4), "XIZY");
}

TEST(PauliTerm, RejectsZeroAndQubitOverflow) {
    EXPECT_THROW(PauliTerm(0.0, PauliString::single(0, Axis::X)), std::invalid_argument);
    const PauliTerm t(1.0, PauliString::single(5, Axis::X));
    EXPECT_THROW(t.check_qubits(5), std::invalid_argument);
    EXPECT_NO_THROW(t.check_qubits(6));
}

TEST(ModelConfig, ValidatesAndRoundTrips) {
    ModelConfig c;
    EXPECT_EQ(c.n_qubits(), 12);
    EXPECT_DOUBLE_EQ(c.kappa(), 2.0);
    c.la = 6;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = default_model();
    c.g = 0.5;
    c.seed = 9;
    EXPECT_EQ(parse_model_config(format_model_config(c)), c);
    EXPECT_THROW(parse_model_config("bogus = 1\n"), std::invalid_argument);
}

TEST(Hamiltonian, TermCountsDefaultModel) {
    const auto h = build_dual_hamiltonian(default_model());
    EXPECT_EQ(h.count(TermFamily::MagneticBulk), 6U);
    EXPECT_EQ(h.count(TermFamily::MagneticBoundary), 4U);
    EXPECT_EQ(h.count(TermFamily::ElectricPair), 8U);
    EXPECT_EQ(h.count(TermFamily::ElectricBoundary), 2U);
    EXPECT_EQ(h.count(TermFamily::ElectricBulkSingle), 10U);

    // Weighted link count: every g-coefficient counts its multiple of g.
    double links = 0.0;
    for (const auto &t : h.terms) {
        if (t.term.string().is_pure(Axis::Z)) {
            links += t.term.coefficient() / default_model().g;
        }
    }
    EXPECT_NEAR(links, 30.0, 1e-12);
}

TEST(Hamiltonian, FamiliesAreAxisPureAndGaugeInvariant) {
    const auto cfg = default_model();
    const auto h = build_dual_hamiltonian(cfg);
    const auto gauss = gauss_operators(cfg);
    for (const auto &t : h.terms) {
        const bool x_family = t.family == TermFamily::MagneticBulk ||
                              t.family == TermFamily::MagneticBoundary;
        EXPECT_TRUE(t.term.string().is_pure(x_family ? Axis::X : Axis::Z));
        for (const auto &gop : gauss) {
            EXPECT_TRUE(t.term.string().commutes_with(gop.string()));
        }
    }
}

TEST(Hamiltonian, ZeroCouplingLeavesCommutingMagneticTerms) {
    auto cfg = default_model();
    cfg.g = 0.0;
    const auto h = build_dual_hamiltonian(cfg);
    ASSERT_EQ(h.terms.size(), 10U);
    for (const auto &a : h.terms) {
        EXPECT_TRUE(a.term.string().is_pure(Axis::X));
        for (const auto &b : h.terms) {
            EXPECT_TRUE(a.term.string().commutes_with(b.term.string()));
        }
    }
}

TEST(Hamiltonian, MatchesIndependentDenseOracle) {
    for (auto [lx, la] : {std::pair{10, 4}, std::pair{6, 2}, std::pair{4, 2}}) {
        ModelConfig cfg;
        cfg.lx = lx;
        cfg.la = la;
        const Eigen::MatrixXcd lib = dense_matrix(build_dual_hamiltonian(cfg));
        const Eigen::MatrixXd ref = oracle::dense_hamiltonian(lx, la, cfg.g);
        EXPECT_LT((lib - ref.cast<oracle::cplx>()).cwiseAbs().maxCoeff(), 1e-12)
            << "lx=" << lx << " la=" << la;
    }
}

TEST(GaussOperators, DefaultSupports) {
    const auto cfg = default_model();
    const auto g = gauss_operators(cfg);
    EXPECT_EQ(g[0].string(), PauliString::z_string({11, 0, 1}));
    EXPECT_EQ(g[1].string(), PauliString::z_string({4, 5, 6}));
    for (const auto &op : g) {
        EXPECT_EQ(multiply(op.string(), op.string()).string, PauliString{});
    }
}

TEST(SymmetryOperators, DefaultSupportsAndCommutation) {
    const auto s = symmetry_operators(default_model());
    EXPECT_EQ(s[0].string(), PauliString::z_string({0, 1}));
    EXPECT_EQ(s[1].string(), PauliString::z_string({4, 5}));
    EXPECT_TRUE(s[0].string().commutes_with(s[1].string()));
}

TEST(BasisState, DemonstrationStateSatisfiesGauss) {
    const auto cfg = default_model();
    const auto st = BasisState::parse("↓↓↓↑↓↓↑↑↑↓↑↑");
    EXPECT_EQ(st.to_string(), "111011000100");
    for (const auto &g : gauss_operators(cfg)) {
        EXPECT_EQ(z_string_value(g.string(), st), 1);
    }
    const auto up = BasisState::from_index(0, 12);
    for (const auto &g : gauss_operators(cfg)) {
        EXPECT_EQ(z_string_value(g.string(), up), 1);
    }
}

TEST(BasisState, SampledStatesRespectGaussAndUniformBulk) {
    const auto cfg = default_model();
    const auto gauss = gauss_operators(cfg);
    const int n = 10000;
    std::vector<int> ones(12, 0);
    for (int k = 0; k < n; ++k) {
        const auto st = sample_initial_state(cfg, CounterRng::stream(77, {std::uint64_t(k)})());
        for (const auto &g : gauss) {
            ASSERT_EQ(z_string_value(g.string(), st), 1);
        }
        for (int q = 0; q < 12; ++q) {
            ones[static_cast<std::size_t>(q)] += st.bits[static_cast<std::size_t>(q)];
        }
    }
    const double sigma = std::sqrt(n * 0.25);
    for (int q : {1, 2, 3, 4, 6, 7, 8, 9, 10, 11}) {
        EXPECT_LT(std::abs(ones[static_cast<std::size_t>(q)] - n / 2.0), 3 * sigma) << q;
    }
}

TEST(Sectors, LabelsAndPartition) {
    const auto cfg = default_model();
    EXPECT_EQ(sector_label(0, cfg), 1);
    // Qubit 0 is the most significant of the 6 subsystem bits.
    EXPECT_EQ(sector_label(std::uint64_t{1} << 5, cfg), 3);
    const SectorPartition part(cfg);
    EXPECT_EQ(part.dim(), 64U);
    for (int s = 1; s <= 4; ++s) {
        EXPECT_EQ(part.indices(s).size(), 16U);
        for (int i : part.indices(s)) {
            EXPECT_EQ(oracle::sector_of(static_cast<std::uint64_t>(i), cfg.la), s);
        }
    }
}
