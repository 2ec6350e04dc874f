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

#include <benchmark/benchmark.h>

#include "z2chaos/analysis.hpp"
#include "z2chaos/circuit.hpp"
#include "z2chaos/lattice.hpp"
#include "z2chaos/measurement.hpp"
#include "z2chaos/tomography.hpp"

using namespace z2chaos;

namespace {

const BasisState &demo_state() {
    static const BasisState s = BasisState::parse("111011000100");
    return s;
}

void BM_ApplyRxx(benchmark::State &st) {
    StateVector psi = prepare(demo_state());
    const Gate g = Gate::rxx(0, 11, 0.3);
    for (auto _ : st) {
        apply_gate(psi, g);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
}
BENCHMARK(BM_ApplyRxx);

void BM_TrotterStep(benchmark::State &st) {
    const ModelConfig cfg;
    const auto c = build_trotter_circuit(build_dual_hamiltonian(cfg), 0.5, 1);
    StateVector psi = prepare(demo_state());
    for (auto _ : st) {
        apply_circuit_inplace(psi, c);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
}
BENCHMARK(BM_TrotterStep);

void BM_ExactEvolveCached(benchmark::State &st) {
    const ModelConfig cfg;
    const auto h = build_dual_hamiltonian(cfg);
    const auto psi = prepare(demo_state());
    (void)cached_propagator(h);
    double t = 0.0;
    for (auto _ : st) {
        t += 0.1;
        benchmark::DoNotOptimize(exact_evolve(psi, h, t));
    }
}
BENCHMARK(BM_ExactEvolveCached);

void BM_SimulateMeasurements(benchmark::State &st) {
    const ModelConfig cfg;
    const auto psi = exact_evolve(prepare(demo_state()), build_dual_hamiltonian(cfg), 1.0);
    auto rng = CounterRng::stream(1);
    const auto basis = sample_cue_basis(rng, 12);
    for (auto _ : st) {
        benchmark::DoNotOptimize(simulate_measurements(psi, basis, 750, rng, 6));
    }
}
BENCHMARK(BM_SimulateMeasurements);

void BM_TomographyCost(benchmark::State &st) {
    const ModelConfig cfg;
    const auto ops = generate_ansatz(cfg);
    const auto psi = exact_evolve(prepare(demo_state()), build_dual_hamiltonian(cfg), 1.0);
    auto rng = CounterRng::stream(2);
    std::vector<MeasurementRecord> recs;
    for (int k = 0; k < 24; ++k) {
        recs.push_back(simulate_measurements(psi, sample_cue_basis(rng, 12, k), 750, rng, 6));
    }
    const TomographyProblem problem(ops, recs);
    Eigen::VectorXd beta = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(ops.size()), 0.1);
    for (auto _ : st) {
        benchmark::DoNotOptimize(problem.cost(beta));
    }
}
BENCHMARK(BM_TomographyCost);

void BM_Esff(benchmark::State &st) {
    std::vector<double> xi;
    for (int k = 0; k < 16; ++k) {
        xi.push_back(0.37 * k + 0.01 * k * k);
    }
    const auto theta = log_theta_grid();
    for (auto _ : st) {
        benchmark::DoNotOptimize(esff(xi, theta));
    }
}
BENCHMARK(BM_Esff);

} // namespace
BENCHMARK_MAIN();
