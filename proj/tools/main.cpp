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

// z2chaos command-line tool.
//
// Exit codes: 0 success, 2 partial (non-converged fits or per-item
// failures), 1 fatal error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "z2chaos/analysis.hpp"
#include "z2chaos/circuit.hpp"
#include "z2chaos/io.hpp"
#include "z2chaos/lattice.hpp"
#include "z2chaos/measurement.hpp"
#include "z2chaos/pipeline.hpp"
#include "z2chaos/rng.hpp"
#include "z2chaos/tomography.hpp"

namespace {

using namespace z2chaos;

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

// Flags that override RunConfig fields; unset flags leave the base alone.
struct Overrides {
    std::string config_file;
    std::optional<int> lx;
    std::optional<int> la;
    std::optional<double> g;
    std::optional<std::uint64_t> seed;
    std::optional<int> states;
    std::vector<double> gt;
    std::optional<int> trotter_steps;
    std::optional<int> bases;
    std::optional<std::int64_t> shots;
    std::optional<int> boots;
    std::string output;
    std::vector<std::string> modes;
    std::optional<int> threads;
    std::optional<double> cutoff;
    std::optional<int> fit_restarts;
    std::optional<int> fit_max_iter;
    std::vector<double> regime_ends;
    std::vector<std::string> trotter_order;
    bool no_plots = false;

    void attach(CLI::App *app) {
        app->add_option("--config", config_file, "run config file (key = value)")
            ->check(CLI::ExistingFile);
        app->add_option("--lx", lx, "plaquettes along x");
        app->add_option("--la", la, "plaquettes in subsystem A");
        app->add_option("--g", g, "coupling g");
        app->add_option("--seed", seed, "master seed");
        app->add_option("--states", states, "number of random initial states");
        app->add_option("--gt", gt, "scaled times gt")->delimiter(',');
        app->add_option("--trotter-steps", trotter_steps, "Trotter steps per evolution");
        app->add_option("--bases", bases, "random measurement bases");
        app->add_option("--shots", shots, "shots per basis");
        app->add_option("--boots", boots, "bootstrap resamples");
        app->add_option("--output", output, "output directory");
        app->add_option("--modes", modes, "exact,trotter,tomography,infinite")->delimiter(',');
        app->add_option("--threads", threads, "worker threads");
        app->add_option("--cutoff", cutoff, "Schmidt probability cutoff");
        app->add_option("--fit-restarts", fit_restarts, "random restarts per fit");
        app->add_option("--fit-max-iter", fit_max_iter, "optimizer iterations per start");
        app->add_option("--regime-ends", regime_ends, "ends of regimes I, II, III in gt")
            ->delimiter(',')
            ->expected(3);
        app->add_option("--trotter-order", trotter_order, "family order, e.g. Z,ZZ,X,XX")
            ->delimiter(',');
        app->add_flag("--no-plots", no_plots, "skip SVG output");
    }

    RunConfig apply(RunConfig c) const {
        if (!config_file.empty()) {
            c = read_run_config(config_file);
        }
        if (lx) {
            c.model.lx = *lx;
        }
        if (la) {
            c.model.la = *la;
        }
        if (g) {
            c.model.g = *g;
        }
        if (seed) {
            c.seed = *seed;
            c.model.seed = *seed;
        }
        if (states) {
            c.n_initial_states = *states;
        }
        if (!gt.empty()) {
            c.gt_points = gt;
        }
        if (trotter_steps) {
            c.n_trotter_steps = *trotter_steps;
        }
        if (bases) {
            c.n_bases = *bases;
        }
        if (shots) {
            c.n_shots = *shots;
        }
        if (boots) {
            c.n_boots = *boots;
        }
        if (!output.empty()) {
            c.output_dir = output;
        }
        if (!modes.empty()) {
            c.exact = c.trotter = c.tomography = c.infinite = false;
            for (const auto &m : modes) {
                if (m == "exact") {
                    c.exact = true;
                } else if (m == "trotter") {
                    c.trotter = true;
                } else if (m == "tomography") {
                    c.tomography = true;
                } else if (m == "infinite") {
                    c.infinite = true;
                } else {
                    throw std::invalid_argument("unknown mode '" + m + "'");
                }
            }
        }
        if (threads) {
            c.threads = *threads;
        }
        if (cutoff) {
            c.cutoff = *cutoff;
        }
        if (fit_restarts) {
            c.fit_restarts = *fit_restarts;
        }
        if (fit_max_iter) {
            c.fit_max_iter = *fit_max_iter;
        }
        if (regime_ends.size() == 3) {
            c.regimes = {regime_ends[0], regime_ends[1], regime_ends[2]};
        }
        if (!trotter_order.empty()) {
            c.trotter_order.clear();
            for (const auto &f : trotter_order) {
                c.trotter_order.push_back(parse_trotter_family(f));
            }
        }
        if (no_plots) {
            c.plots = false;
        }
        c.validate();
        return c;
    }
};

// Initial state selection shared by evolve and measure.
struct StateChoice {
    std::string bits;
    int index = 0;
    double gt = 0.0;
    std::string mode = "exact";

    void attach(CLI::App *app) {
        app->add_option("--state", bits, "initial basis state as 0/1 string");
        app->add_option("--state-index", index, "index of a drawn random initial state");
        app->add_option("--at", gt, "scaled time gt")->required();
        app->add_option("--evolution", mode, "exact or trotter")
            ->check(CLI::IsMember({"exact", "trotter"}));
    }

    StateVector evolve(const RunConfig &c) const {
        BasisState s;
        if (!bits.empty()) {
            s = BasisState::parse(bits);
        } else {
            RunConfig draw = c;
            draw.n_initial_states = index + 1;
            s = initial_states(draw).back();
        }
        std::cerr << "initial state " << s.to_string() << "\n";
        return evolve_state(s, c, gt, mode == "exact" ? Evolution::Exact : Evolution::Trotter);
    }
};

void print_spectrum(const EntanglementSpectrum &s) {
    for (int sec = 0; sec < 4; ++sec) {
        std::cout << "sector " << sec + 1 << " rank " << s.rank(sec) << ":";
        for (double x : s.xi[static_cast<std::size_t>(sec)]) {
            std::cout << ' ' << format_double(x);
        }
        std::cout << "\n";
    }
}

void print_entropy(const EntropyDecomposition &d) {
    std::cout << "S_vN " << format_double(d.s_vn) << " S_sym " << format_double(d.s_symmetry)
              << " S_dist " << format_double(d.s_distillable) << "\n";
}

int run_evolve(const RunConfig &c, const StateChoice &sc, const std::string &out,
               const std::string &circuit_out) {
    const StateVector psi = sc.evolve(c);
    const HamiltonianSpec h = build_dual_hamiltonian(c.model);
    for (const auto &gauss : gauss_operators(c.model)) {
        std::cout << "gauss " << gauss.string().to_string(c.model.n_qubits()) << " "
                  << format_double(expectation(psi, gauss)) << "\n";
    }
    std::cout << "energy " << format_double(energy(psi, h)) << "\n";
    const DensityMatrix rho = partial_trace(psi, c.model.subsystem_qubits());
    const SectorPartition part(c.model);
    print_spectrum(entanglement_spectrum(rho, part, c.cutoff));
    print_entropy(entropy_decomposition(rho, part));
    if (!out.empty()) {
        write_matrix(out, rho.matrix());
        std::cout << "wrote " << out << "\n";
    }
    if (!circuit_out.empty()) {
        write_circuit(circuit_out, build_trotter_circuit(h, sc.gt / c.model.g, c.n_trotter_steps,
                                                         c.trotter_order));
        std::cout << "wrote " << circuit_out << "\n";
    }
    return kExitOk;
}

int run_measure(const RunConfig &c, const StateChoice &sc, const std::string &out) {
    const StateVector psi = sc.evolve(c);
    CounterRng rng = CounterRng::stream(c.seed, {0x3EA5});
    std::vector<MeasurementRecord> records;
    for (int b = 0; b < c.n_bases; ++b) {
        const RandomBasis basis = sample_cue_basis(rng, psi.n_qubits(), b);
        records.push_back(
            simulate_measurements(psi, basis, c.n_shots, rng, c.model.subsystem_qubits()));
    }
    write_records(out, records);
    std::cout << "wrote " << records.size() << " records to " << out << "\n";
    return kExitOk;
}

int run_fit(const RunConfig &c, const std::string &records, const std::string &rho_file,
            const std::string &out) {
    const AnsatzOperatorSet ops = generate_ansatz(c.model);
    FitOptions fo;
    fo.n_restarts = c.fit_restarts;
    fo.max_iter = c.fit_max_iter;
    fo.seed = c.seed;
    TomographyResult fit;
    if (!records.empty()) {
        fit = fit_eh_from_measurements(read_records(records), ops, fo);
    } else {
        const DensityMatrix rho(c.model.subsystem_qubits(), read_matrix(rho_file));
        fit = fit_eh_infinite(rho, ops, fo);
    }
    write_fit(out, fit, ops);
    std::cout << "operators " << ops.size() << " cost " << format_double(fit.cost_final)
              << " status " << fit.status << " iterations " << fit.iterations << "\n";
    std::cout << "wrote " << out << "\n";
    return fit.converged ? kExitOk : kExitPartial;
}

int run_analyze(const RunConfig &c, const std::string &fit_file, const std::string &rho_file,
                const std::string &csv_out) {
    const SectorPartition part(c.model);
    EntanglementSpectrum spec;
    std::optional<DensityMatrix> rho;
    if (!fit_file.empty()) {
        const FitFile f = read_fit(fit_file);
        const AnsatzOperatorSet ops = generate_ansatz(c.model);
        if (static_cast<std::size_t>(f.beta.size()) != ops.size()) {
            throw std::invalid_argument("fit file does not match the ansatz of this model");
        }
        EHParameters beta{f.beta, f.time_tag};
        spec = spectrum_from_hamiltonian(ansatz_hamiltonian(beta, ops), part);
        rho = ansatz_density_matrix(beta, ops);
    } else {
        rho = DensityMatrix(c.model.subsystem_qubits(), read_matrix(rho_file));
        spec = entanglement_spectrum(*rho, part, c.cutoff);
    }
    print_spectrum(spec);
    int ties = 0;
    const auto r = pooled_gap_ratios(spec, &ties);
    double mean = 0.0;
    for (double x : r) {
        mean += x / static_cast<double>(r.size());
    }
    std::cout << "gap ratios " << r.size() << " mean " << (r.empty() ? "nan" : format_double(mean))
              << " ties " << ties << "\n";
    print_entropy(entropy_decomposition(*rho, part));
    if (!csv_out.empty()) {
        CsvTable t({"sector", "level", "xi"});
        for (int sec = 0; sec < 4; ++sec) {
            const auto &xi = spec.xi[static_cast<std::size_t>(sec)];
            for (std::size_t l = 0; l < xi.size(); ++l) {
                t.add_row({std::to_string(sec + 1), std::to_string(l), format_double(xi[l])});
            }
        }
        t.write(csv_out);
        std::cout << "wrote " << csv_out << "\n";
    }
    return kExitOk;
}

int run_reproduce(const RunConfig &c) {
    std::cout << "running into " << c.output_dir.string() << "\n";
    const RunManifest m = run_pipeline(c);
    for (const auto &n : m.notes) {
        if (n.rfind("failure", 0) == 0 || n.rfind("fit not converged", 0) == 0) {
            std::cout << n << "\n";
        }
    }
    std::cout << "artifacts " << m.artifacts.size() << ", fits " << m.fits_converged << "/"
              << m.fits_total << ", failures " << m.failures << "\n";
    std::cout << "manifest " << (m.output_dir / "manifest.txt").string() << "\n";
    return m.partial() ? kExitPartial : kExitOk;
}

int run_selftest_cmd(const RunConfig &c) {
    const SelfTestReport rep = run_selftest(c);
    for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        std::cout << (rep.checks[i].second ? "PASS " : "FAIL ") << rep.details[i] << "\n";
    }
    return rep.ok() ? kExitOk : kExitFatal;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"z2chaos: chaos signatures in a Z2 lattice gauge theory"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    Overrides ov;
    StateChoice sc;

    auto *evolve = app.add_subcommand("evolve", "evolve one state and print its reduced state");
    std::string evolve_out;
    std::string circuit_out;
    ov.attach(evolve);
    sc.attach(evolve);
    evolve->add_option("--rho-out", evolve_out, "write the reduced density matrix");
    evolve->add_option("--circuit-out", circuit_out, "write the Trotter circuit");

    auto *measure = app.add_subcommand("measure", "simulate randomized measurement records");
    std::string measure_out;
    ov.attach(measure);
    sc.attach(measure);
    measure->add_option("--out", measure_out, "records file")->required();

    auto *fit = app.add_subcommand("fit", "fit an entanglement Hamiltonian");
    std::string records_in;
    std::string fit_rho_in;
    std::string fit_out;
    ov.attach(fit);
    auto *rec_opt = fit->add_option("--records", records_in, "measurement records file")
                        ->check(CLI::ExistingFile);
    auto *rho_opt = fit->add_option("--rho", fit_rho_in, "exact reduced state (infinite mode)")
                        ->check(CLI::ExistingFile);
    rec_opt->excludes(rho_opt);
    fit->add_option("--out", fit_out, "fit file")->required();

    auto *analyze = app.add_subcommand("analyze", "spectrum, gap ratios and entropies");
    std::string fit_in;
    std::string an_rho_in;
    std::string csv_out;
    ov.attach(analyze);
    auto *fit_opt =
        analyze->add_option("--fit", fit_in, "fit file")->check(CLI::ExistingFile);
    auto *an_rho_opt =
        analyze->add_option("--rho", an_rho_in, "density matrix file")->check(CLI::ExistingFile);
    fit_opt->excludes(an_rho_opt);
    analyze->add_option("--csv", csv_out, "write the spectrum as CSV");

    auto *reproduce = app.add_subcommand("reproduce", "full pipeline run");
    std::string preset;
    ov.attach(reproduce);
    reproduce->add_option("--preset", preset, "fig3, fig4, fig5 or quick")
        ->check(CLI::IsMember(preset_names()));

    auto *selftest = app.add_subcommand("selftest", "cross-module consistency checks");
    ov.attach(selftest);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig base = preset.empty() ? RunConfig{} : preset_config(preset);
        const RunConfig c = ov.apply(base);
        if (*evolve) {
            return run_evolve(c, sc, evolve_out, circuit_out);
        }
        if (*measure) {
            return run_measure(c, sc, measure_out);
        }
        if (*fit) {
            if (records_in.empty() && fit_rho_in.empty()) {
                throw std::invalid_argument("fit needs --records or --rho");
            }
            return run_fit(c, records_in, fit_rho_in, fit_out);
        }
        if (*analyze) {
            if (fit_in.empty() && an_rho_in.empty()) {
                throw std::invalid_argument("analyze needs --fit or --rho");
            }
            return run_analyze(c, fit_in, an_rho_in, csv_out);
        }
        if (*reproduce) {
            return run_reproduce(c);
        }
        if (*selftest) {
            return run_selftest_cmd(c);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitFatal;
}
