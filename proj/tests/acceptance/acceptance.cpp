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

// Acceptance checks. One PASS/FAIL line per criterion; every tolerance is a
// named constant below. Usage: z2chaos_acceptance [--criterion N]...

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "z2chaos/analysis.hpp"
#include "z2chaos/circuit.hpp"
#include "z2chaos/io.hpp"
#include "z2chaos/lattice.hpp"
#include "z2chaos/measurement.hpp"
#include "z2chaos/pipeline.hpp"
#include "z2chaos/tomography.hpp"

using namespace z2chaos;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

// Tolerances and targets.
constexpr double kGaussTol = 1e-10;
constexpr double kGaussGt = 2.4;
constexpr int kExpectedRxx = 12;
constexpr int kMsSamples = 10000;
constexpr double kMsTol = 1e-12;
constexpr double kRmtTol = 0.01;
constexpr double kPoissonRef = 0.386;
constexpr double kGoeRef = 0.536;
constexpr double kGueRef = 0.600;
constexpr int kRmtMatrices = 500;
constexpr int kRmtDim = 200;
constexpr int kPoissonLevels = 100000;
constexpr double kRegimeILo = 0.30;
constexpr double kRegimeIHi = 0.47;
constexpr double kRegimeIIILo = 0.55;
constexpr double kRegimeIIIHi = 0.63;
// Library vs oracle agreement on pooled statistics. Levels just above the
// 1e-15 cutoff are only defined to eigensolver precision, so individual
// ratios among them differ between solvers at the 1e-2 level; the pooled
// mean is compared at 1e-4 and the gap counts exactly.
constexpr double kDualRouteTol = 1e-4;
constexpr double kPlateauRelTol = 0.25;
constexpr double kKappaLo = 0.4;
constexpr double kKappaHi = 0.8;
constexpr std::size_t kExpectedAnsatz = 73;
constexpr double kCommuteTol = 1e-12;
constexpr int kTomoBases = 48;
constexpr std::int64_t kTomoShots = 100000;
constexpr double kTraceDistanceTol = 0.05;
constexpr double kKlTol = 1e-8;
constexpr double kLevelTol = 0.15;
constexpr int kLowLevels = 5;
constexpr double kIdentityTol = 1e-10;
constexpr double kSymFraction = 0.95;
constexpr double kHalvingLo = 1.6;
constexpr double kHalvingHi = 2.4;

const char *const kDemoState = "111011000100";

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

fs::path scratch(const std::string &name) {
    const auto p = fs::temp_directory_path() / ("z2chaos_acceptance_" + name);
    fs::remove_all(p);
    return p;
}

Eigen::VectorXcd basis_vector(const BasisState &s) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << s.n_qubits());
    v[static_cast<Eigen::Index>(s.index())] = 1.0;
    return v;
}

const oracle::TaylorEvolver &oracle_evolver(const ModelConfig &m) {
    static const oracle::TaylorEvolver ev(oracle::sparse_hamiltonian(m.lx, m.la, m.g));
    return ev;
}

// Oracle states on an ascending gt grid, stepping from the previous point.
std::vector<Eigen::VectorXcd> oracle_trajectory(const ModelConfig &m, const BasisState &s,
                                                const std::vector<double> &gt) {
    std::vector<Eigen::VectorXcd> out;
    Eigen::VectorXcd psi = basis_vector(s);
    double prev = 0.0;
    for (double g : gt) {
        psi = oracle_evolver(m).evolve(psi, (g - prev) / m.g);
        prev = g;
        out.push_back(psi);
    }
    return out;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    const RunConfig cfg;
    const auto states = initial_states(cfg);
    const auto gauss = gauss_operators(cfg.model);
    std::vector<Eigen::MatrixXcd> gmat;
    for (const auto &g : gauss) {
        std::vector<std::pair<int, char>> f;
        for (const auto &[q, a] : g.string().factors()) {
            f.emplace_back(q, axis_char(a));
        }
        gmat.push_back(oracle::pauli(cfg.model.n_qubits(), f));
    }
    const auto &ev = oracle_evolver(cfg.model);
    double worst_lib = 0.0;
    double worst_oracle = 0.0;
    for (const auto &s : states) {
        for (double gt = 0.0; gt <= kGaussGt + 1e-9; gt += 0.3) {
            for (auto mode : {Evolution::Exact, Evolution::Trotter}) {
                const auto psi = evolve_state(s, cfg, gt, mode);
                for (std::size_t k = 0; k < 2; ++k) {
                    worst_lib = std::max(worst_lib, std::abs(expectation(psi, gauss[k]) - 1.0));
                    const oracle::cplx e =
                        psi.amplitudes().dot(gmat[k] * psi.amplitudes());
                    worst_oracle = std::max(worst_oracle, std::abs(e - 1.0));
                }
            }
            const Eigen::VectorXcd ref = ev.evolve(basis_vector(s), gt / cfg.model.g);
            for (std::size_t k = 0; k < 2; ++k) {
                const oracle::cplx e = ref.dot(gmat[k] * ref);
                worst_oracle = std::max(worst_oracle, std::abs(e - 1.0));
            }
        }
    }
    return {worst_lib < kGaussTol && worst_oracle < kGaussTol,
            "max |<G>-1| library " + fmt(worst_lib) + ", oracle " + fmt(worst_oracle) +
                " (tol " + fmt(kGaussTol) + ")"};
}

Outcome criterion2() {
    const RunConfig cfg;
    const auto h = build_dual_hamiltonian(cfg.model);
    const double t = kGaussGt / cfg.model.g;
    const int steps = cfg.n_trotter_steps;
    const auto full = build_trotter_circuit(h, t, steps);
    const auto one = build_trotter_circuit(h, t / steps, 1);
    double max_angle = 0.0;
    for (const auto &g : full.gates()) {
        if (g.kind == GateKind::RXX) {
            max_angle = std::max(max_angle, std::abs(g.angle));
        }
    }
    // Oracle count: two-body terms of the dual Hamiltonian.
    int two_body = 0;
    for (const auto &[c, f] : oracle::dual_terms(cfg.model.lx, cfg.model.la, cfg.model.g).terms) {
        two_body += f.size() == 2 ? 1 : 0;
    }
    const auto per_step = static_cast<int>(one.count(GateKind::RXX));
    const bool ok = per_step == kExpectedRxx && two_body == kExpectedRxx &&
                    static_cast<int>(full.count(GateKind::RXX)) == steps * kExpectedRxx &&
                    max_angle <= pi / 4;
    return {ok, "RXX per step " + std::to_string(per_step) + " (oracle two-body terms " +
                    std::to_string(two_body) + "), max |angle| " + fmt(max_angle) +
                    " <= pi/4"};
}

Outcome criterion3() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-4 * pi, 4 * pi);
    double worst_oracle = 0.0;
    double worst_lib = 0.0;
    double worst_reduced = 0.0;
    for (int k = 0; k < kMsSamples; ++k) {
        const double a = angle(rng);
        const auto gates = ms_gate(0, 1, a);
        Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
        Eigen::Matrix4cd lib = Eigen::Matrix4cd::Identity();
        for (const auto &g : gates) {
            Eigen::Matrix4cd step;
            if (g.kind == GateKind::RXX) {
                step = oracle::rxx(g.angle);
                worst_reduced = std::max(worst_reduced, std::abs(g.angle));
            } else if (g.kind == GateKind::RX) {
                step = oracle::embed1(oracle::rx(g.angle), g.q0, 2);
            } else {
                return {false, "unexpected gate kind in MS reduction"};
            }
            u = step * u;
            Eigen::Matrix4cd lstep = Eigen::Matrix4cd::Identity();
            if (g.kind == GateKind::RXX) {
                lstep = gate_matrix(g);
            } else {
                Eigen::Matrix2cd m = gate_matrix(g);
                Eigen::Matrix4cd e = Eigen::Matrix4cd::Zero();
                for (int r = 0; r < 4; ++r) {
                    for (int c = 0; c < 4; ++c) {
                        const int hi_r = g.q0 == 0 ? r >> 1 : r & 1;
                        const int hi_c = g.q0 == 0 ? c >> 1 : c & 1;
                        const int lo_r = g.q0 == 0 ? r & 1 : r >> 1;
                        const int lo_c = g.q0 == 0 ? c & 1 : c >> 1;
                        e(r, c) = lo_r == lo_c ? m(hi_r, hi_c) : 0.0;
                    }
                }
                lstep = e;
            }
            lib = lstep * lib;
        }
        const Eigen::Matrix4cd want = oracle::rxx(a);
        worst_oracle = std::max(worst_oracle, oracle::phase_distance(u, want));
        worst_lib = std::max(worst_lib, oracle::phase_distance(lib, want));
    }
    const bool ok = worst_oracle < kMsTol && worst_lib < kMsTol && worst_reduced <= pi / 4;
    return {ok, std::to_string(kMsSamples) + " angles: max phase-free deviation oracle gates " +
                    fmt(worst_oracle) + ", library gates " + fmt(worst_lib) +
                    ", max reduced |angle| " + fmt(worst_reduced)};
}

double central_ratio_mean(int beta, std::mt19937_64 &rng) {
    double sum = 0.0;
    std::size_t count = 0;
    for (int k = 0; k < kRmtMatrices; ++k) {
        const Eigen::VectorXd ev = oracle::sample_gaussian_ensemble(kRmtDim, beta, rng);
        // Central half of the semicircle, where the density is flat enough.
        std::vector<double> mid(ev.data() + kRmtDim / 4, ev.data() + 3 * kRmtDim / 4);
        for (double r : gap_ratios(mid)) {
            sum += r;
            ++count;
        }
        const auto o = oracle::ratios(mid);
        if (o.size() != mid.size() - 2) {
            return -1.0;
        }
    }
    return sum / static_cast<double>(count);
}

Outcome criterion4() {
    std::mt19937_64 rng(4);
    std::exponential_distribution<double> spacing(1.0);
    std::vector<double> levels(kPoissonLevels);
    double x = 0.0;
    for (auto &l : levels) {
        x += spacing(rng);
        l = x;
    }
    const auto pr = gap_ratios(levels);
    const double poisson = std::accumulate(pr.begin(), pr.end(), 0.0) / static_cast<double>(pr.size());
    const double goe = central_ratio_mean(1, rng);
    const double gue = central_ratio_mean(2, rng);
    const double rp = reference_mean(Ensemble::Poisson);
    const double rgo = reference_mean(Ensemble::GOE);
    const double rgu = reference_mean(Ensemble::GUE);
    const bool ok = std::abs(poisson - kPoissonRef) <= kRmtTol &&
                    std::abs(goe - kGoeRef) <= kRmtTol && std::abs(gue - kGueRef) <= kRmtTol &&
                    std::abs(rp - kPoissonRef) <= kRmtTol && std::abs(rgo - kGoeRef) <= kRmtTol &&
                    std::abs(rgu - kGueRef) <= kRmtTol;
    return {ok, "Monte-Carlo Poisson " + fmt(poisson) + " GOE " + fmt(goe) + " GUE " + fmt(gue) +
                    "; surmise " + fmt(rp) + " " + fmt(rgo) + " " + fmt(rgu) + " (targets 0.386 0.536 0.600 +/- " +
                    fmt(kRmtTol) + ")"};
}

// Exact-evolution run over gt in [0, 10] shared by criteria 5 and 6.
struct RegimeRun {
    RunConfig cfg;
    CsvData summary;
    CsvData ramp;
    CsvData spectra;
    // Oracle route: levels per (state, gt) from dense evolution.
    std::map<std::pair<int, int>, std::vector<std::vector<double>>> oracle_levels;
};

const RegimeRun &regime_run() {
    static const RegimeRun run = [] {
        RegimeRun r;
        r.cfg = preset_config("fig4");
        r.cfg.plots = false;
        r.cfg.output_dir = scratch("fig4");
        run_pipeline(r.cfg);
        r.summary = read_csv(r.cfg.output_dir / "egrd_summary.csv");
        r.ramp = read_csv(r.cfg.output_dir / "esff_ramp.csv");
        r.spectra = read_csv(r.cfg.output_dir / "entanglement_spectra.csv");
        const auto states = initial_states(r.cfg);
        for (std::size_t s = 0; s < states.size(); ++s) {
            const auto traj = oracle_trajectory(r.cfg.model, states[s], r.cfg.gt_points);
            for (std::size_t k = 0; k < r.cfg.gt_points.size(); ++k) {
                const auto rho = oracle::reduced_density(traj[k], r.cfg.model.n_qubits(),
                                                         r.cfg.model.subsystem_qubits());
                r.oracle_levels[{static_cast<int>(s), static_cast<int>(k)}] =
                    oracle::sector_levels(rho, r.cfg.model.la, r.cfg.cutoff);
            }
        }
        return r;
    }();
    return run;
}

double summary_value(const CsvData &d, const std::string &series, int regime,
                     const std::string &column) {
    const auto cs = d.column("series");
    const auto cr = d.column("regime");
    const auto cv = d.column(column);
    for (const auto &row : d.rows) {
        if (row[cs] == series && std::stoi(row[cr]) == regime) {
            return std::stod(row[cv]);
        }
    }
    return std::nan("");
}

Outcome criterion5() {
    const auto &run = regime_run();
    const double r1 = summary_value(run.summary, "exact", 1, "mean_r");
    const double r3 = summary_value(run.summary, "exact", 3, "mean_r");
    const double n1 = summary_value(run.summary, "exact", 1, "count");
    const double n3 = summary_value(run.summary, "exact", 3, "count");
    // Oracle pooled means over the same windows.
    std::array<double, 4> sum{};
    std::array<std::size_t, 4> count{};
    for (const auto &[key, levels] : run.oracle_levels) {
        const int reg = run.cfg.regimes.regime(run.cfg.gt_points[static_cast<std::size_t>(key.second)]);
        for (const auto &sector : levels) {
            for (double r : oracle::ratios(sector)) {
                sum[static_cast<std::size_t>(reg)] += r;
                ++count[static_cast<std::size_t>(reg)];
            }
        }
    }
    const double o1 = sum[1] / static_cast<double>(count[1]);
    const double o3 = sum[3] / static_cast<double>(count[3]);
    const bool ok = r1 >= kRegimeILo && r1 <= kRegimeIHi && r3 >= kRegimeIIILo &&
                    r3 <= kRegimeIIIHi && std::abs(o1 - r1) < kDualRouteTol &&
                    std::abs(o3 - r3) < kDualRouteTol && n1 == static_cast<double>(count[1]) &&
                    n3 == static_cast<double>(count[3]);
    return {ok, "regime I <r> " + fmt(r1) + " (oracle " + fmt(o1) + ", " + std::to_string(count[1]) +
                    " gaps) in [0.30, 0.47]; regime III <r> " + fmt(r3) + " (oracle " + fmt(o3) +
                    ", " + std::to_string(count[3]) + " gaps) in [0.55, 0.63]"};
}

Outcome criterion6() {
    const auto &run = regime_run();
    // F(0) = 1 exactly on every pipeline spectrum.
    std::map<std::tuple<int, std::string, int>, std::vector<double>> by_sector;
    const auto cser = run.spectra.column("series");
    const auto cst = run.spectra.column("state");
    const auto cgt = run.spectra.column("gt");
    const auto csec = run.spectra.column("sector");
    const auto cxi = run.spectra.column("xi");
    for (const auto &row : run.spectra.rows) {
        if (row[cser] == "exact") {
            by_sector[{std::stoi(row[cst]), row[cgt], std::stoi(row[csec])}].push_back(std::stod(row[cxi]));
        }
    }
    bool f0 = true;
    for (const auto &[k, xi] : by_sector) {
        f0 = f0 && esff(xi, {0.0})[0] == 1.0;
    }

    const double plateau = summary_value(run.ramp, "exact", 3, "plateau");
    const double kappa = summary_value(run.ramp, "exact", 3, "kappa");
    const double lo = summary_value(run.ramp, "exact", 3, "theta_lo");
    const double hi = summary_value(run.ramp, "exact", 3, "theta_hi");

    // Oracle route: sector-averaged |sum exp(i theta xi)|^2 / R^2 on the same
    // grid from the dense-evolution levels, plateau over theta >= 100 and a
    // least-squares slope on the pipeline's ramp window.
    const auto theta = log_theta_grid();
    std::vector<double> f(theta.size(), 0.0);
    int samples = 0;
    for (const auto &[key, levels] : run.oracle_levels) {
        if (run.cfg.regimes.regime(run.cfg.gt_points[static_cast<std::size_t>(key.second)]) != 3) {
            continue;
        }
        for (const auto &xi : levels) {
            if (xi.empty()) {
                continue;
            }
            ++samples;
            for (std::size_t j = 0; j < theta.size(); ++j) {
                oracle::cplx z = 0.0;
                for (double x : xi) {
                    z += std::exp(oracle::cplx(0.0, theta[j] * x));
                }
                f[j] += std::norm(z) / static_cast<double>(xi.size() * xi.size());
            }
        }
    }
    double op = 0.0;
    int np = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        f[j] /= samples;
        if (theta[j] >= 1e2) {
            op += f[j];
            ++np;
        }
        if (theta[j] >= lo && theta[j] <= hi) {
            const double x = std::log(theta[j]);
            const double y = std::log(f[j]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    }
    op /= np;
    const double ok_kappa = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double target = 1.0 / 16;
    const bool ok = f0 && std::abs(plateau - target) <= kPlateauRelTol * target &&
                    kappa >= kKappaLo && kappa <= kKappaHi &&
                    std::abs(op - plateau) < kDualRouteTol && std::abs(ok_kappa - kappa) < kDualRouteTol;
    return {ok, std::string("F(0)=1 ") + (f0 ? "yes" : "no") + "; regime III plateau " + fmt(plateau) +
                    " (oracle " + fmt(op) + ", 1/16 +/- 25%); kappa " + fmt(kappa) + " (oracle " +
                    fmt(ok_kappa) + ") on theta [" + fmt(lo) + ", " + fmt(hi) + "] in [0.4, 0.8]"};
}

Outcome criterion7() {
    const ModelConfig cfg;
    const auto ops = generate_ansatz(cfg);
    const int m = cfg.subsystem_qubits();
    const Eigen::MatrixXcd s0 = oracle::pauli(m, {{0, 'Z'}, {1, 'Z'}});
    const Eigen::MatrixXcd s1 = oracle::pauli(m, {{cfg.la, 'Z'}, {cfg.la + 1, 'Z'}});
    double worst = 0.0;
    for (const auto &op : ops.operators()) {
        Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(Eigen::Index{1} << m, Eigen::Index{1} << m);
        for (const auto &t : op.terms) {
            std::vector<std::pair<int, char>> f;
            for (const auto &[q, a] : t.factors()) {
                f.emplace_back(q, axis_char(a));
            }
            mat += t.coefficient() * oracle::pauli(m, f);
        }
        worst = std::max(worst, (mat * s0 - s0 * mat).cwiseAbs().maxCoeff());
        worst = std::max(worst, (mat * s1 - s1 * mat).cwiseAbs().maxCoeff());
    }
    const bool ok = ops.size() == kExpectedAnsatz && worst < kCommuteTol;
    return {ok, "operators " + std::to_string(ops.size()) + " (expected 73), max symmetry commutator " +
                    fmt(worst)};
}

Outcome criterion8() {
    const ModelConfig cfg;
    const auto ops = generate_ansatz(cfg);
    const AnsatzModel model(ops);
    const int m = cfg.subsystem_qubits();
    const auto dim = Eigen::Index{1} << m;
    auto rng = CounterRng::stream(808);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ops.size()));
    std::set<std::uint64_t> picked;
    while (picked.size() < 5) {
        picked.insert(rng.below(ops.size()));
    }
    for (auto i : picked) {
        beta[static_cast<Eigen::Index>(i)] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.3, 1.0);
    }
    const auto target = model.density(beta);

    // Purify the target onto 2m qubits: sum_k sqrt(p_k) |v_k>|k>.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(target.matrix());
    StateVector psi(2 * m);
    for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            psi[static_cast<std::size_t>(a * dim + k)] =
                std::sqrt(std::max(es.eigenvalues()[k], 0.0)) * es.eigenvectors()(a, k);
        }
    }
    std::vector<MeasurementRecord> records;
    for (int b = 0; b < kTomoBases; ++b) {
        auto brng = rng.substream(static_cast<std::uint64_t>(b));
        const auto basis = sample_cue_basis(brng, 2 * m, b);
        records.push_back(simulate_measurements(psi, basis, kTomoShots, brng, m));
    }
    FitOptions opts;
    opts.seed = 8;
    const auto fit = fit_eh_from_measurements(records, ops, opts);
    const double td = oracle::trace_distance(fit.rho_fit.matrix(), target.matrix());
    const auto kl = fit_eh_infinite(target, ops, opts);
    const bool ok = td < kTraceDistanceTol && kl.cost_final < kKlTol;
    return {ok, "trace distance " + fmt(td) + " (< 0.05, cost " + fmt(fit.cost_final) + ", " +
                    fit.status + "); KL " + fmt(kl.cost_final) + " (< 1e-8, " + kl.status + ")"};
}

Outcome criterion9() {
    RunConfig cfg;
    const auto ops = generate_ansatz(cfg.model);
    const SectorPartition part(cfg.model);
    const auto state = BasisState::parse(kDemoState);
    double worst = 0.0;
    std::string per_time;
    FitOptions opts;
    opts.seed = 9;
    for (double gt : {0.34, 1.02, 1.7}) {
        const auto psi = evolve_state(state, cfg, gt, Evolution::Trotter);
        const auto rho = partial_trace(psi, cfg.model.subsystem_qubits());
        const auto exact = entanglement_spectrum(rho, part, cfg.cutoff);
        const auto oracle_exact = oracle::sector_levels(rho.matrix(), cfg.model.la, cfg.cutoff);
        const auto fit = fit_eh_infinite(rho, ops, opts);
        const auto fitted = spectrum_from_hamiltonian(ansatz_hamiltonian(fit.beta_star, ops), part);
        double w = 0.0;
        double at = 0.0;
        for (std::size_t s = 0; s < 4; ++s) {
            const auto &ex = exact.xi[s];
            if (ex.empty()) {
                continue;
            }
            const std::size_t n = std::min<std::size_t>(kLowLevels, ex.size());
            for (std::size_t k = 0; k < n; ++k) {
                if (std::abs(ex[k] - oracle_exact[s][k]) > 1e-8) {
                    return {false, "exact levels disagree with oracle at gt " + fmt(gt)};
                }
                const double d = std::abs(fitted.xi[s][k] - ex[k]);
                if (d > w) {
                    w = d;
                    at = ex[k];
                }
            }
        }
        worst = std::max(worst, w);
        per_time += " gt " + fmt(gt) + ": " + fmt(w) + " at xi " + fmt(at) + " (KL " +
                    fmt(fit.cost_final) + ")";
    }
    return {worst <= kLevelTol, "max low-level deviation " + fmt(worst) + " (tol 0.15);" + per_time};
}

Outcome criterion10() {
    RunConfig cfg;
    cfg.gt_points = default_gt_grid();
    cfg.gt_points.push_back(kGaussGt);
    cfg.observables = false;
    cfg.plots = false;
    cfg.output_dir = scratch("entropy");
    run_pipeline(cfg);
    const auto d = read_csv(cfg.output_dir / "entropy.csv");
    const auto err = d.numeric("identity_error");
    const double worst = *std::max_element(err.begin(), err.end());

    // Oracle S_vN from dense evolution for the exact series.
    const auto states = initial_states(cfg);
    std::vector<std::vector<Eigen::VectorXcd>> traj;
    for (const auto &st : states) {
        traj.push_back(oracle_trajectory(cfg.model, st, cfg.gt_points));
    }
    std::vector<double> s_sym(cfg.gt_points.size(), 0.0);
    double svn_dev = 0.0;
    const auto cser = d.column("series");
    const auto cst = d.column("state");
    const auto cgt = d.column("gt");
    const auto cvn = d.column("S_vN");
    const auto csym = d.column("S_sym");
    for (const auto &row : d.rows) {
        if (row[cser] != "exact") {
            continue;
        }
        const double gt = std::stod(row[cgt]);
        const auto k = static_cast<std::size_t>(
            std::find_if(cfg.gt_points.begin(), cfg.gt_points.end(),
                         [&](double g) { return std::abs(g - gt) < 1e-12; }) -
            cfg.gt_points.begin());
        s_sym[k] += std::stod(row[csym]) / static_cast<double>(states.size());
        const auto &psi = traj[static_cast<std::size_t>(std::stoi(row[cst]))][k];
        const auto rho = oracle::reduced_density(psi, cfg.model.n_qubits(), cfg.model.subsystem_qubits());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
        double s = 0.0;
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
            const double p = es.eigenvalues()[j];
            if (p > 1e-300) {
                s -= p * std::log(p);
            }
        }
        svn_dev = std::max(svn_dev, std::abs(s - std::stod(row[cvn])));
    }
    bool monotone = true;
    for (std::size_t k = 1; k < s_sym.size(); ++k) {
        monotone = monotone && s_sym[k] >= s_sym[k - 1];
    }
    const double final_sym = s_sym.back();
    const double target = std::log(4.0);
    const bool ok = worst < kIdentityTol && svn_dev < kIdentityTol && monotone &&
                    final_sym >= kSymFraction * target;
    std::string trace;
    for (double v : s_sym) {
        trace += " " + fmt(v);
    }
    return {ok, "identity error " + fmt(worst) + ", S_vN vs oracle " + fmt(svn_dev) +
                    "; mean S_sym over gt:" + trace + (monotone ? " (monotone)" : " (not monotone)") +
                    "; at gt 2.4 " + fmt(final_sym) + " vs 0.95 log 4 = " + fmt(kSymFraction * target)};
}

Outcome criterion11() {
    std::vector<fs::path> dirs;
    for (int threads : {1, 2}) {
        auto cfg = preset_config("quick");
        cfg.threads = threads;
        cfg.plots = false;
        cfg.output_dir = scratch("repro" + std::to_string(threads));
        run_pipeline(cfg);
        dirs.push_back(cfg.output_dir);
    }
    int compared = 0;
    std::string diff;
    for (const auto &e : fs::directory_iterator(dirs[0])) {
        if (e.path().extension() != ".csv") {
            continue;
        }
        ++compared;
        const auto other = dirs[1] / e.path().filename();
        if (!fs::exists(other) || read_text(e.path()) != read_text(other)) {
            diff += " " + e.path().filename().string();
        }
    }
    return {compared > 0 && diff.empty(),
            std::to_string(compared) + " CSVs compared" + (diff.empty() ? ", all identical" : ", differ:" + diff)};
}

Outcome criterion12() {
    const RunConfig cfg;
    const auto h = build_dual_hamiltonian(cfg.model);
    const double t = 1.7 / cfg.model.g;
    const auto s = BasisState::parse(kDemoState);
    const Eigen::VectorXcd exact = oracle_evolver(cfg.model).evolve(basis_vector(s), t);
    auto error = [&](int steps) {
        const auto psi = apply_circuit(prepare(s), build_trotter_circuit(h, t, steps));
        // Phase-insensitive distance min_phi |psi - e^{i phi} exact|.
        const double overlap = std::abs(exact.dot(psi.amplitudes()));
        return std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
    };
    const double e8 = error(8);
    const double e16 = error(16);
    const double ratio = e8 / e16;
    return {ratio >= kHalvingLo && ratio <= kHalvingHi,
            "error 8 steps " + fmt(e8) + ", 16 steps " + fmt(e16) + ", ratio " + fmt(ratio) +
                " in [1.6, 2.4]"};
}

} // namespace

int main(int argc, char **argv) {
    const std::map<int, std::function<Outcome()>> criteria = {
        {1, criterion1},   {2, criterion2},   {3, criterion3},  {4, criterion4},
        {5, criterion5},   {6, criterion6},   {7, criterion7},  {8, criterion8},
        {9, criterion9},   {10, criterion10}, {11, criterion11}, {12, criterion12},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            selected.push_back(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return 1;
        }
    }
    if (selected.empty()) {
        for (const auto &[k, f] : criteria) {
            selected.push_back(k);
        }
    }
    bool all = true;
    for (int k : selected) {
        const auto it = criteria.find(k);
        if (it == criteria.end()) {
            std::fprintf(stderr, "unknown criterion %d\n", k);
            return 1;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = it->second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d: %s %s [%.1f s]\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
