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

#include "z2chaos/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "z2chaos/io.hpp"
#include "z2chaos/measurement.hpp"
#include "z2chaos/rng.hpp"
#include "z2chaos/state_vector.hpp"
#include "z2chaos/svg_plot.hpp"

#ifndef Z2CHAOS_VERSION
#define Z2CHAOS_VERSION "unknown"
#endif

namespace z2chaos {

namespace {

// Substream tags.
constexpr std::uint64_t kStateTag = 0x57A7E;
constexpr std::uint64_t kMeasureTag = 0x3EA5;
constexpr std::uint64_t kFitTag = 0xF17;
constexpr std::uint64_t kBootTag = 0xB0075;
constexpr std::uint64_t kObservableTag = 0x0B5;

constexpr int kObservableQubits = 6;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in{std::string(s)};
    while (std::getline(in, cell, ',')) {
        cell = trim(cell);
        if (!cell.empty()) {
            out.push_back(cell);
        }
    }
    return out;
}

bool parse_bool(const std::string &v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") {
        return true;
    }
    if (v == "0" || v == "false" || v == "off" || v == "no") {
        return false;
    }
    throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

std::string fmt(double v) { return format_double(v); }

std::string join(const std::vector<std::string> &cells, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            out.push_back(sep);
        }
        out += cells[i];
    }
    return out;
}

template <class F> void parallel_for(std::size_t n, int threads, F &&body) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            body(i);
        }
    };
    const auto t = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
    if (t <= 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(t);
    for (std::size_t k = 0; k < t; ++k) {
        pool.emplace_back(worker);
    }
}

double sample_std(const std::vector<double> &v, double mean) {
    if (v.size() < 2) {
        return 0.0;
    }
    double s = 0.0;
    for (double x : v) {
        s += (x - mean) * (x - mean);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

std::string item_stem(std::string_view series, int state, std::size_t k) {
    return std::string(series) + "_s" + std::to_string(state) + "_t" + std::to_string(k);
}

} // namespace

std::string_view tool_version() { return Z2CHAOS_VERSION; }

std::vector<double> default_gt_grid() {
    return {0.0, 0.34, 0.68, 1.02, 1.36, 1.70, 2.04, 2.38};
}

std::vector<double> uniform_gt_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("invalid time grid");
    }
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= n; ++k) {
        out.push_back(std::round((lo + static_cast<double>(k) * step) * 1e9) / 1e9);
    }
    return out;
}

void RunConfig::validate() const {
    model.validate();
    if (n_initial_states < 1 || n_trotter_steps < 1 || n_bases < 1 || n_shots < 1 ||
        n_boots < 1 || threads < 1 || fit_max_iter < 1 || fit_restarts < 0) {
        throw std::invalid_argument("run counts must be positive");
    }
    if (gt_points.empty()) {
        throw std::invalid_argument("no time points");
    }
    for (double gt : gt_points) {
        if (!std::isfinite(gt) || gt < 0.0) {
            throw std::invalid_argument("time points must be finite and nonnegative");
        }
    }
    if (!exact && !trotter) {
        throw std::invalid_argument("enable at least one of exact or trotter evolution");
    }
    if (!(regimes.i_end > 0.0 && regimes.ii_end > regimes.i_end &&
          regimes.iii_end >= regimes.ii_end)) {
        throw std::invalid_argument("regime windows must be increasing");
    }
    for (auto f : {TrotterFamily::Z, TrotterFamily::ZZ, TrotterFamily::X, TrotterFamily::XX}) {
        if (std::count(trotter_order.begin(), trotter_order.end(), f) != 1) {
            throw std::invalid_argument("trotter order must list each family once");
        }
    }
    if (trotter_order.size() != 4) {
        throw std::invalid_argument("trotter order must list each family once");
    }
    if (!(cutoff > 0.0 && cutoff < 1.0)) {
        throw std::invalid_argument("cutoff must lie in (0, 1)");
    }
    if (output_dir.empty()) {
        throw std::invalid_argument("empty output directory");
    }
    if (!observable_state.empty()) {
        const BasisState s = BasisState::parse(observable_state);
        if (s.n_qubits() != model.n_qubits()) {
            throw std::invalid_argument("observable state has the wrong length");
        }
        for (const auto &gauss : gauss_operators(model)) {
            if (z_string_value(gauss.string(), s) != 1) {
                throw std::invalid_argument("observable state violates a Gauss law");
            }
        }
    }
}

RunConfig parse_run_config(std::string_view text) {
    RunConfig c;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string val = trim(std::string_view(t).substr(eq + 1));
        try {
            if (key == "lx") {
                c.model.lx = std::stoi(val);
            } else if (key == "la") {
                c.model.la = std::stoi(val);
            } else if (key == "g") {
                c.model.g = std::stod(val);
            } else if (key == "seed") {
                c.seed = std::stoull(val);
                c.model.seed = c.seed;
            } else if (key == "states") {
                c.n_initial_states = std::stoi(val);
            } else if (key == "gt") {
                c.gt_points.clear();
                for (const auto &v : split_list(val)) {
                    c.gt_points.push_back(std::stod(v));
                }
            } else if (key == "trotter_steps") {
                c.n_trotter_steps = std::stoi(val);
            } else if (key == "bases") {
                c.n_bases = std::stoi(val);
            } else if (key == "shots") {
                c.n_shots = std::stoll(val);
            } else if (key == "boots") {
                c.n_boots = std::stoi(val);
            } else if (key == "output") {
                c.output_dir = val;
            } else if (key == "modes") {
                c.exact = c.trotter = c.tomography = c.infinite = false;
                for (const auto &m : split_list(val)) {
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
            } else if (key == "threads") {
                c.threads = std::stoi(val);
            } else if (key == "regime_i_end") {
                c.regimes.i_end = std::stod(val);
            } else if (key == "regime_ii_end") {
                c.regimes.ii_end = std::stod(val);
            } else if (key == "regime_iii_end") {
                c.regimes.iii_end = std::stod(val);
            } else if (key == "trotter_order") {
                c.trotter_order.clear();
                for (const auto &f : split_list(val)) {
                    c.trotter_order.push_back(parse_trotter_family(f));
                }
            } else if (key == "cutoff") {
                c.cutoff = std::stod(val);
            } else if (key == "fit_restarts") {
                c.fit_restarts = std::stoi(val);
            } else if (key == "fit_max_iter") {
                c.fit_max_iter = std::stoi(val);
            } else if (key == "observable_state") {
                c.observable_state = val;
            } else if (key == "observables") {
                c.observables = parse_bool(val);
            } else if (key == "plots") {
                c.plots = parse_bool(val);
            } else {
                throw std::invalid_argument("unknown key '" + key + "'");
            }
        } catch (const std::logic_error &e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " +
                                        e.what());
        }
    }
    c.validate();
    return c;
}

std::string format_run_config(const RunConfig &c) {
    std::ostringstream o;
    std::vector<std::string> gts;
    for (double gt : c.gt_points) {
        gts.push_back(fmt(gt));
    }
    std::vector<std::string> modes;
    if (c.exact) {
        modes.emplace_back("exact");
    }
    if (c.trotter) {
        modes.emplace_back("trotter");
    }
    if (c.tomography) {
        modes.emplace_back("tomography");
    }
    if (c.infinite) {
        modes.emplace_back("infinite");
    }
    std::vector<std::string> order;
    for (auto f : c.trotter_order) {
        order.emplace_back(trotter_family_name(f));
    }
    o << "lx = " << c.model.lx << "\n"
      << "la = " << c.model.la << "\n"
      << "g = " << fmt(c.model.g) << "\n"
      << "seed = " << c.seed << "\n"
      << "states = " << c.n_initial_states << "\n"
      << "gt = " << join(gts) << "\n"
      << "trotter_steps = " << c.n_trotter_steps << "\n"
      << "bases = " << c.n_bases << "\n"
      << "shots = " << c.n_shots << "\n"
      << "boots = " << c.n_boots << "\n"
      << "output = " << c.output_dir.string() << "\n"
      << "modes = " << join(modes) << "\n"
      << "threads = " << c.threads << "\n"
      << "regime_i_end = " << fmt(c.regimes.i_end) << "\n"
      << "regime_ii_end = " << fmt(c.regimes.ii_end) << "\n"
      << "regime_iii_end = " << fmt(c.regimes.iii_end) << "\n"
      << "trotter_order = " << join(order) << "\n"
      << "cutoff = " << fmt(c.cutoff) << "\n"
      << "fit_restarts = " << c.fit_restarts << "\n"
      << "fit_max_iter = " << c.fit_max_iter << "\n"
      << "observable_state = " << c.observable_state << "\n"
      << "observables = " << (c.observables ? "true" : "false") << "\n"
      << "plots = " << (c.plots ? "true" : "false") << "\n";
    return o.str();
}

RunConfig read_run_config(const std::filesystem::path &path) {
    return parse_run_config(read_text(path));
}

std::vector<std::string> preset_names() { return {"fig3", "fig4", "fig5", "quick"}; }

RunConfig preset_config(std::string_view name) {
    RunConfig c;
    if (name == "fig3") {
        c.n_initial_states = 1;
        c.n_shots = 500;
        c.gt_points = uniform_gt_grid(0.0, 2.4, 0.1);
        c.output_dir = "out_fig3";
    } else if (name == "fig4" || name == "fig5") {
        c.trotter = false;
        c.observables = false;
        c.gt_points = uniform_gt_grid(0.0, 10.0, 0.1);
        c.output_dir = std::string("out_") + std::string(name);
    } else if (name == "quick") {
        c.n_initial_states = 2;
        c.gt_points = {0.0, 1.02, 2.38};
        c.n_bases = 8;
        c.n_shots = 200;
        c.n_boots = 100;
        c.tomography = true;
        c.infinite = true;
        c.fit_restarts = 0;
        c.fit_max_iter = 40;
        c.output_dir = "out_quick";
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

void RunManifest::add_artifact(const std::filesystem::path &relative) {
    artifacts.push_back({relative.generic_string(), file_checksum(output_dir / relative)});
}

std::string RunManifest::str() const {
    std::ostringstream o;
    o << "z2chaos manifest\n";
    o << "version " << version << "\n";
    o << "status " << (partial() ? "partial" : "complete") << "\n";
    o << "fits " << fits_converged << "/" << fits_total << "\n";
    o << "failures " << failures << "\n";
    for (const auto &[k, v] : seeds) {
        o << "seed " << k << " " << v << "\n";
    }
    o << "config-begin\n" << config_text << "config-end\n";
    for (const auto &a : artifacts) {
        o << "artifact " << a.path << " " << a.checksum << "\n";
    }
    for (const auto &[stage, s] : timings) {
        o << "timing " << stage << " " << fmt(s) << "\n";
    }
    for (const auto &n : notes) {
        o << "note " << n << "\n";
    }
    return o.str();
}

void RunManifest::write() const { write_text(output_dir / "manifest.txt", str()); }

BootstrapResult bootstrap(const std::vector<double> &samples, int n_boots,
                          std::uint64_t seed) {
    if (samples.empty()) {
        throw std::invalid_argument("bootstrap needs samples");
    }
    if (n_boots < 1) {
        throw std::invalid_argument("bootstrap needs n_boots >= 1");
    }
    CounterRng rng(seed);
    const std::size_t n = samples.size();
    std::vector<double> means(static_cast<std::size_t>(n_boots));
    for (auto &m : means) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            s += samples[rng.below(n)];
        }
        m = s / static_cast<double>(n);
    }
    BootstrapResult r;
    r.mean = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
    double v = 0.0;
    for (double m : means) {
        v += (m - r.mean) * (m - r.mean);
    }
    r.std = std::sqrt(v / static_cast<double>(means.size()));
    return r;
}

std::string_view evolution_name(Evolution e) {
    return e == Evolution::Exact ? "exact" : "trotter";
}

StateVector evolve_state(const BasisState &initial, const RunConfig &config, double gt,
                         Evolution mode) {
    const StateVector psi0 = prepare(initial);
    if (gt == 0.0) {
        return psi0;
    }
    const HamiltonianSpec h = build_dual_hamiltonian(config.model);
    const double t = gt / config.model.g;
    if (mode == Evolution::Exact) {
        return exact_evolve(psi0, h, t);
    }
    return apply_circuit(psi0,
                         build_trotter_circuit(h, t, config.n_trotter_steps, config.trotter_order));
}

std::vector<BasisState> initial_states(const RunConfig &config) {
    std::vector<BasisState> out;
    for (int i = 0; i < config.n_initial_states; ++i) {
        const std::uint64_t s =
            CounterRng::stream(config.seed, {kStateTag, static_cast<std::uint64_t>(i)})();
        out.push_back(sample_initial_state(config.model, s));
    }
    return out;
}

BasisState observable_initial_state(const RunConfig &config) {
    if (!config.observable_state.empty()) {
        return BasisState::parse(config.observable_state);
    }
    if (config.model.n_qubits() == 12) {
        return BasisState::parse("111011000100");
    }
    return initial_states(config).front();
}

std::vector<double> pooled_gap_ratios(const EntanglementSpectrum &s, int *ties) {
    std::vector<double> out;
    for (const auto &xi : s.xi) {
        const auto r = gap_ratios(xi, ties);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

std::vector<RegimeStatistics> regime_statistics(const std::vector<SpectrumItem> &items,
                                                const RegimeWindows &windows) {
    const std::vector<double> theta = log_theta_grid();
    std::vector<RegimeStatistics> out;
    for (int regime = 1; regime <= 3; ++regime) {
        RegimeStatistics st;
        st.regime = regime;
        st.theta = theta;
        std::vector<std::vector<double>> curves;
        for (const auto &item : items) {
            if (windows.regime(item.gt) != regime) {
                continue;
            }
            const auto r = pooled_gap_ratios(item.spectrum, &st.ties);
            st.ratios.insert(st.ratios.end(), r.begin(), r.end());
            for (const auto &xi : item.spectrum.xi) {
                if (!xi.empty()) {
                    curves.push_back(esff(xi, theta));
                }
            }
        }
        if (!st.ratios.empty()) {
            st.histogram = egrd(st.ratios, 12);
        }
        st.esff_samples = static_cast<int>(curves.size());
        if (!curves.empty()) {
            st.f_mean.assign(theta.size(), 0.0);
            st.f_std.assign(theta.size(), 0.0);
            std::vector<double> column(curves.size());
            for (std::size_t j = 0; j < theta.size(); ++j) {
                for (std::size_t c = 0; c < curves.size(); ++c) {
                    column[c] = curves[c][j];
                }
                const double mean =
                    std::accumulate(column.begin(), column.end(), 0.0) / column.size();
                st.f_mean[j] = mean;
                st.f_std[j] = sample_std(column, mean);
            }
            try {
                st.window = locate_ramp(theta, st.f_mean);
                st.ramp = fit_ramp(theta, st.f_mean, st.window.theta_lo, st.window.theta_hi);
            } catch (const std::exception &e) {
                st.ramp_error = e.what();
            }
        }
        out.push_back(std::move(st));
    }
    return out;
}

namespace {

struct EntropyRow {
    std::string series;
    int state = 0;
    double gt = 0.0;
    EntropyDecomposition d;
};

struct GaugeRow {
    std::string mode;
    int state = 0;
    double gt = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
};

struct FitRow {
    std::string series;
    int state = 0;
    double gt = 0.0;
    std::string file;
    double cost = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string status;
};

struct ItemResult {
    std::vector<SpectrumItem> spectra;
    std::vector<EntropyRow> entropy;
    std::vector<GaugeRow> gauge;
    std::vector<FitRow> fits;
    std::vector<std::string> files;
    std::vector<std::string> errors;
};

struct RunContext {
    const RunConfig &config;
    HamiltonianSpec h;
    SectorPartition partition;
    std::array<PauliTerm, 2> gauss;
    const AnsatzOperatorSet *ansatz = nullptr;
    std::vector<BasisState> states;
};

void run_fit(const RunContext &ctx, ItemResult &res, const std::string &series, int state,
             std::size_t k, const TomographyResult &fit) {
    const auto &cfg = ctx.config;
    const double gt = cfg.gt_points[k];
    const std::string rel = "fits/" + item_stem(series, state, k) + ".txt";
    write_fit(cfg.output_dir / rel, fit, *ctx.ansatz);
    res.files.push_back(rel);
    res.fits.push_back({series, state, gt, rel, fit.cost_final, fit.converged, fit.iterations,
                        fit.status});
    const Eigen::MatrixXcd hfit = ansatz_hamiltonian(fit.beta_star, *ctx.ansatz);
    res.spectra.push_back({series, state, gt, spectrum_from_hamiltonian(hfit, ctx.partition)});
    res.entropy.push_back({series, state, gt, entropy_decomposition(fit.rho_fit, ctx.partition)});
}

ItemResult process_item(const RunContext &ctx, int state, std::size_t k) {
    const auto &cfg = ctx.config;
    ItemResult res;
    const double gt = cfg.gt_points[k];
    const int m = cfg.model.subsystem_qubits();
    std::vector<Evolution> modes;
    if (cfg.exact) {
        modes.push_back(Evolution::Exact);
    }
    if (cfg.trotter) {
        modes.push_back(Evolution::Trotter);
    }
    for (Evolution mode : modes) {
        const std::string name(evolution_name(mode));
        const auto mode_tag = static_cast<std::uint64_t>(mode);
        try {
            const StateVector psi =
                evolve_state(ctx.states[static_cast<std::size_t>(state)], cfg, gt, mode);
            res.gauge.push_back({name, state, gt, expectation(psi, ctx.gauss[0]),
                                 expectation(psi, ctx.gauss[1])});
            const DensityMatrix rho = partial_trace(psi, m);
            res.spectra.push_back(
                {name, state, gt, entanglement_spectrum(rho, ctx.partition, cfg.cutoff)});
            res.entropy.push_back({name, state, gt, entropy_decomposition(rho, ctx.partition)});

            FitOptions fo;
            fo.max_iter = cfg.fit_max_iter;
            fo.n_restarts = cfg.fit_restarts;
            fo.seed = CounterRng::stream(cfg.seed, {kFitTag, mode_tag,
                                                    static_cast<std::uint64_t>(state), k})();
            if (cfg.tomography) {
                CounterRng rng = CounterRng::stream(
                    cfg.seed, {kMeasureTag, mode_tag, static_cast<std::uint64_t>(state), k});
                std::vector<MeasurementRecord> records;
                for (int b = 0; b < cfg.n_bases; ++b) {
                    const RandomBasis basis = sample_cue_basis(rng, psi.n_qubits(), b);
                    records.push_back(simulate_measurements(psi, basis, cfg.n_shots, rng, m));
                }
                const std::string rel = "records/" + item_stem(name, state, k) + ".txt";
                write_records(cfg.output_dir / rel, records);
                res.files.push_back(rel);
                TomographyResult fit = fit_eh_from_measurements(records, *ctx.ansatz, fo);
                fit.beta_star.time_tag = gt;
                run_fit(ctx, res, name + "-tomography", state, k, fit);
            }
            if (cfg.infinite) {
                TomographyResult fit = fit_eh_infinite(rho, *ctx.ansatz, fo);
                fit.beta_star.time_tag = gt;
                run_fit(ctx, res, name + "-infinite", state, k, fit);
            }
        } catch (const std::exception &e) {
            res.errors.push_back(item_stem(name, state, k) + ": " + e.what());
        }
    }
    return res;
}

std::vector<std::string> series_order(const RunConfig &c) {
    std::vector<std::string> out;
    std::vector<std::string> evo;
    if (c.exact) {
        evo.emplace_back("exact");
    }
    if (c.trotter) {
        evo.emplace_back("trotter");
    }
    for (const auto &e : evo) {
        out.push_back(e);
    }
    if (c.tomography) {
        for (const auto &e : evo) {
            out.push_back(e + "-tomography");
        }
    }
    if (c.infinite) {
        for (const auto &e : evo) {
            out.push_back(e + "-infinite");
        }
    }
    return out;
}

struct Observable {
    std::string name;
    PauliString string;
    char basis;
};

std::vector<Observable> traced_observables() {
    std::vector<Observable> out;
    for (char b : {'Z', 'X'}) {
        const Axis a = b == 'Z' ? Axis::Z : Axis::X;
        for (int q = 0; q < kObservableQubits; ++q) {
            out.push_back({std::string(1, b) + std::to_string(q), PauliString::single(q, a), b});
        }
        for (int q = 0; q + 1 < kObservableQubits; ++q) {
            out.push_back({std::string(1, b) + std::to_string(q) + b + std::to_string(q + 1),
                           PauliString({{q, a}, {q + 1, a}}), b});
        }
    }
    return out;
}

// Z basis, or X basis via RZ(pi) RY(pi/2) RZ(pi), which is RY(-pi/2) up to
// a global phase.
RandomBasis pauli_basis(int n, char b) {
    RandomBasis basis;
    basis.basis_id = b == 'Z' ? 0 : 1;
    const double pi = std::numbers::pi;
    const std::array<double, 3> a =
        b == 'Z' ? std::array<double, 3>{0.0, 0.0, 0.0} : std::array<double, 3>{pi, pi / 2, pi};
    basis.angles.assign(static_cast<std::size_t>(n), a);
    return basis;
}

void write_observables(const RunConfig &cfg, RunManifest &manifest) {
    CsvTable table({"mode", "gt", "observable", "basis", "gauge_invariant", "exact", "ideal",
                    "mean", "std"});
    const BasisState s0 = observable_initial_state(cfg);
    const auto gauss = gauss_operators(cfg.model);
    const auto obs = traced_observables();
    std::vector<Evolution> modes;
    if (cfg.exact) {
        modes.push_back(Evolution::Exact);
    }
    if (cfg.trotter) {
        modes.push_back(Evolution::Trotter);
    }
    const int n = cfg.model.n_qubits();
    for (Evolution mode : modes) {
        for (std::size_t k = 0; k < cfg.gt_points.size(); ++k) {
            const double gt = cfg.gt_points[k];
            const StateVector exact = evolve_state(s0, cfg, gt, Evolution::Exact);
            const StateVector psi =
                mode == Evolution::Exact ? exact : evolve_state(s0, cfg, gt, mode);
            for (char b : {'Z', 'X'}) {
                CounterRng rng = CounterRng::stream(
                    cfg.seed, {kObservableTag, static_cast<std::uint64_t>(mode), k,
                               static_cast<std::uint64_t>(b)});
                const MeasurementRecord rec = simulate_measurements(
                    psi, pauli_basis(n, b), cfg.n_shots, rng, kObservableQubits);
                for (std::size_t oi = 0; oi < obs.size(); ++oi) {
                    const auto &o = obs[oi];
                    if (o.basis != b) {
                        continue;
                    }
                    std::vector<double> samples;
                    samples.reserve(static_cast<std::size_t>(cfg.n_shots));
                    for (std::size_t idx = 0; idx < rec.counts.size(); ++idx) {
                        int sign = 1;
                        for (int q = 0; q < kObservableQubits; ++q) {
                            if ((o.string.support_mask() >> q & 1U) &&
                                (idx >> (kObservableQubits - 1 - q) & 1U)) {
                                sign = -sign;
                            }
                        }
                        samples.insert(samples.end(), static_cast<std::size_t>(rec.counts[idx]),
                                       static_cast<double>(sign));
                    }
                    const auto bs = bootstrap(
                        samples, cfg.n_boots,
                        CounterRng::stream(cfg.seed, {kBootTag, static_cast<std::uint64_t>(mode),
                                                      k, oi})());
                    const bool invariant = o.string.commutes_with(gauss[0].string()) &&
                                           o.string.commutes_with(gauss[1].string());
                    double sample_mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                                         static_cast<double>(samples.size());
                    table.add_row({std::string(evolution_name(mode)), fmt(gt), o.name,
                                   std::string(1, b), invariant ? "1" : "0",
                                   fmt(expectation(exact, o.string)),
                                   fmt(expectation(psi, o.string)), fmt(sample_mean),
                                   fmt(bs.std)});
                }
            }
        }
    }
    table.write(cfg.output_dir / "observables.csv");
    manifest.add_artifact("observables.csv");
}

} // namespace

RunManifest run_pipeline(const RunConfig &config) {
    config.validate();
    Stopwatch total;
    RunManifest manifest;
    manifest.output_dir = config.output_dir;
    manifest.version = std::string(tool_version());
    manifest.config_text = format_run_config(config);
    manifest.seeds["master"] = config.seed;

    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    if (config.tomography) {
        fs::create_directories(config.output_dir / "records");
    }
    if (config.tomography || config.infinite) {
        fs::create_directories(config.output_dir / "fits");
    }

    RunContext ctx{config, build_dual_hamiltonian(config.model), SectorPartition(config.model),
                   gauss_operators(config.model), nullptr, initial_states(config)};
    for (std::size_t i = 0; i < ctx.states.size(); ++i) {
        manifest.seeds["state" + std::to_string(i)] =
            CounterRng::stream(config.seed, {kStateTag, i})();
        manifest.notes.push_back("initial state " + std::to_string(i) + " " +
                                 ctx.states[i].to_string());
    }
    AnsatzOperatorSet ansatz;
    if (config.tomography || config.infinite) {
        ansatz = generate_ansatz(config.model);
        ctx.ansatz = &ansatz;
        manifest.notes.push_back("ansatz operators " + std::to_string(ansatz.size()));
    }

    // Fan out over (state, time) items; results are merged in item order.
    Stopwatch items_clock;
    const std::size_t n_times = config.gt_points.size();
    const std::size_t n_items = ctx.states.size() * n_times;
    std::vector<ItemResult> results(n_items);
    parallel_for(n_items, config.threads, [&](std::size_t i) {
        const int state = static_cast<int>(i / n_times);
        const std::size_t k = i % n_times;
        try {
            results[i] = process_item(ctx, state, k);
        } catch (const std::exception &e) {
            results[i].errors.push_back(item_stem("item", state, k) + ": " + e.what());
        }
    });
    manifest.timings.emplace_back("items", items_clock.seconds());

    Stopwatch merge_clock;
    std::vector<SpectrumItem> spectra;
    std::vector<EntropyRow> entropy;
    std::vector<GaugeRow> gauge;
    std::vector<FitRow> fits;
    for (auto &r : results) {
        for (auto &s : r.spectra) {
            spectra.push_back(std::move(s));
        }
        entropy.insert(entropy.end(), r.entropy.begin(), r.entropy.end());
        gauge.insert(gauge.end(), r.gauge.begin(), r.gauge.end());
        fits.insert(fits.end(), r.fits.begin(), r.fits.end());
        for (const auto &f : r.files) {
            manifest.add_artifact(f);
        }
        for (const auto &e : r.errors) {
            ++manifest.failures;
            manifest.notes.push_back("failure " + e);
        }
    }

    {
        CsvTable t({"series", "state", "gt", "sector", "level", "xi"});
        for (const auto &s : spectra) {
            for (int sec = 0; sec < 4; ++sec) {
                const auto &xi = s.spectrum.xi[static_cast<std::size_t>(sec)];
                for (std::size_t l = 0; l < xi.size(); ++l) {
                    t.add_row({s.series, std::to_string(s.state), fmt(s.gt),
                               std::to_string(sec + 1), std::to_string(l), fmt(xi[l])});
                }
            }
        }
        t.write(config.output_dir / "entanglement_spectra.csv");
        manifest.add_artifact("entanglement_spectra.csv");
    }
    {
        CsvTable t({"series", "state", "gt", "S_vN", "S_sym", "S_dist", "identity_error", "p1",
                    "p2", "p3", "p4"});
        for (const auto &e : entropy) {
            const auto &d = e.d;
            t.add_row({e.series, std::to_string(e.state), fmt(e.gt), fmt(d.s_vn),
                       fmt(d.s_symmetry), fmt(d.s_distillable),
                       fmt(std::abs(d.s_vn - d.s_symmetry - d.s_distillable)),
                       fmt(d.weights[0]), fmt(d.weights[1]), fmt(d.weights[2]),
                       fmt(d.weights[3])});
        }
        t.write(config.output_dir / "entropy.csv");
        manifest.add_artifact("entropy.csv");
    }
    {
        CsvTable t({"mode", "state", "gt", "gauss_1", "gauss_2"});
        for (const auto &g : gauge) {
            t.add_row({g.mode, std::to_string(g.state), fmt(g.gt), fmt(g.g1), fmt(g.g2)});
        }
        t.write(config.output_dir / "gauge.csv");
        manifest.add_artifact("gauge.csv");
    }
    if (!fits.empty()) {
        CsvTable t({"series", "state", "gt", "file", "cost", "converged", "iterations",
                    "status"});
        for (const auto &f : fits) {
            ++manifest.fits_total;
            manifest.fits_converged += f.converged ? 1 : 0;
            if (!f.converged) {
                manifest.notes.push_back("fit not converged " + f.file + " (" + f.status + ")");
            }
            t.add_row({f.series, std::to_string(f.state), fmt(f.gt), f.file, fmt(f.cost),
                       f.converged ? "1" : "0", std::to_string(f.iterations), f.status});
        }
        t.write(config.output_dir / "fits.csv");
        manifest.add_artifact("fits.csv");
    }

    // Level statistics per series.
    CsvTable trace({"series", "gt", "mean_r", "std_r", "count"});
    CsvTable egrd_t({"series", "regime", "bin_center", "density"});
    CsvTable egrd_s({"series", "regime", "mean_r", "count", "ties"});
    CsvTable esff_t({"series", "regime", "theta", "F_mean", "F_std"});
    CsvTable ramp_t({"series", "regime", "samples", "plateau", "dip_theta", "theta_lo",
                     "theta_hi", "kappa", "kappa_err"});
    for (const auto &series : series_order(config)) {
        std::vector<SpectrumItem> items;
        for (const auto &s : spectra) {
            if (s.series == series) {
                items.push_back(s);
            }
        }
        for (std::size_t k = 0; k < n_times; ++k) {
            std::vector<double> pool;
            for (const auto &s : items) {
                if (s.gt == config.gt_points[k]) {
                    const auto r = pooled_gap_ratios(s.spectrum);
                    pool.insert(pool.end(), r.begin(), r.end());
                }
            }
            if (pool.empty()) {
                continue;
            }
            const double mean = std::accumulate(pool.begin(), pool.end(), 0.0) / pool.size();
            const auto bs = bootstrap(
                pool, config.n_boots,
                CounterRng::stream(config.seed, {kBootTag, fnv1a(series), k})());
            trace.add_row({series, fmt(config.gt_points[k]), fmt(mean), fmt(bs.std),
                           std::to_string(pool.size())});
        }
        for (const auto &st : regime_statistics(items, config.regimes)) {
            const std::string reg = std::to_string(st.regime);
            if (st.ties > 0) {
                manifest.notes.push_back("degenerate gaps " + series + " regime " + reg + ": " +
                                         std::to_string(st.ties));
            }
            if (!st.ratios.empty()) {
                egrd_s.add_row({series, reg, fmt(st.histogram.mean),
                                std::to_string(st.ratios.size()), std::to_string(st.ties)});
                for (std::size_t b = 0; b < st.histogram.density.size(); ++b) {
                    egrd_t.add_row({series, reg, fmt(st.histogram.bin_center(b)),
                                    fmt(st.histogram.density[b])});
                }
            }
            if (st.esff_samples > 0) {
                for (std::size_t j = 0; j < st.theta.size(); ++j) {
                    esff_t.add_row({series, reg, fmt(st.theta[j]), fmt(st.f_mean[j]),
                                    fmt(st.f_std[j])});
                }
                if (st.ramp_error.empty()) {
                    ramp_t.add_row({series, reg, std::to_string(st.esff_samples),
                                    fmt(st.window.plateau), fmt(st.window.dip_theta),
                                    fmt(st.ramp.theta_lo), fmt(st.ramp.theta_hi),
                                    fmt(st.ramp.kappa), fmt(st.ramp.uncertainty)});
                } else {
                    manifest.notes.push_back("no ramp " + series + " regime " + reg + ": " +
                                             st.ramp_error);
                }
            }
        }
    }
    trace.write(config.output_dir / "gap_ratio_trace.csv");
    egrd_t.write(config.output_dir / "egrd.csv");
    egrd_s.write(config.output_dir / "egrd_summary.csv");
    esff_t.write(config.output_dir / "esff.csv");
    ramp_t.write(config.output_dir / "esff_ramp.csv");
    for (const char *f : {"gap_ratio_trace.csv", "egrd.csv", "egrd_summary.csv", "esff.csv",
                          "esff_ramp.csv"}) {
        manifest.add_artifact(f);
    }
    manifest.timings.emplace_back("merge", merge_clock.seconds());

    if (config.observables) {
        Stopwatch clock;
        try {
            write_observables(config, manifest);
        } catch (const std::exception &e) {
            ++manifest.failures;
            manifest.notes.push_back(std::string("failure observables: ") + e.what());
        }
        manifest.timings.emplace_back("observables", clock.seconds());
    }
    if (config.plots) {
        Stopwatch clock;
        emit_plots(manifest);
        manifest.timings.emplace_back("plots", clock.seconds());
    }
    manifest.timings.emplace_back("total", total.seconds());
    manifest.write();
    return manifest;
}

namespace {

const std::vector<std::string> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

const std::string &color(std::size_t i) { return kPalette[i % kPalette.size()]; }

std::vector<std::string> distinct(const CsvData &d, std::string_view column) {
    std::vector<std::string> out;
    const std::size_t c = d.column(column);
    for (const auto &r : d.rows) {
        if (std::find(out.begin(), out.end(), r[c]) == out.end()) {
            out.push_back(r[c]);
        }
    }
    return out;
}

// Rows whose named columns equal the given values.
std::vector<const std::vector<std::string> *>
select(const CsvData &d, const std::vector<std::pair<std::string, std::string>> &eq) {
    std::vector<std::pair<std::size_t, std::string>> cols;
    for (const auto &[k, v] : eq) {
        cols.emplace_back(d.column(k), v);
    }
    std::vector<const std::vector<std::string> *> out;
    for (const auto &r : d.rows) {
        bool ok = true;
        for (const auto &[c, v] : cols) {
            ok = ok && r[c] == v;
        }
        if (ok) {
            out.push_back(&r);
        }
    }
    return out;
}

std::vector<double> col(const std::vector<const std::vector<std::string> *> &rows,
                        std::size_t c) {
    std::vector<double> out;
    for (const auto *r : rows) {
        out.push_back(std::stod((*r)[c]));
    }
    return out;
}

void save_plot(RunManifest &manifest, const SvgPlot &plot, const std::string &name) {
    if (plot.empty()) {
        manifest.notes.push_back("plot " + name + " skipped: empty dataset");
        return;
    }
    const std::string rel = "plots/" + name;
    plot.write(manifest.output_dir / rel);
    manifest.add_artifact(rel);
}

void plot_gap_trace(RunManifest &m, const CsvData &d) {
    SvgPlot p("Mean gap ratio", "gt", "<r>");
    p.set_y_range(0.0, 1.0);
    std::size_t i = 0;
    for (const auto &s : distinct(d, "series")) {
        const auto rows = select(d, {{"series", s}});
        p.add_line(col(rows, d.column("gt")), col(rows, d.column("mean_r")), s, color(i++), false,
                   true);
    }
    if (!p.empty()) {
        p.add_hline(reference_mean(Ensemble::Poisson), "Poisson", "#1f77b4", true);
        p.add_hline(reference_mean(Ensemble::GUE), "GUE", "#d62728", true);
    }
    save_plot(m, p, "gap_ratio_trace.svg");
}

void plot_egrd(RunManifest &m, const CsvData &d) {
    std::vector<double> r(101);
    for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] = static_cast<double>(k) / 100.0;
    }
    auto curve = [&r](Ensemble e) {
        std::vector<double> out;
        for (double x : r) {
            out.push_back(reference_density(e, x));
        }
        return out;
    };
    for (const auto &s : distinct(d, "series")) {
        SvgPlot p("Gap-ratio distribution, " + s, "r", "P(r)");
        std::size_t i = 0;
        for (const auto &reg : distinct(d, "regime")) {
            const auto rows = select(d, {{"series", s}, {"regime", reg}});
            if (rows.empty()) {
                continue;
            }
            const auto centers = col(rows, d.column("bin_center"));
            const double w = centers.size() > 1 ? centers[1] - centers[0] : 1.0;
            std::vector<double> edges;
            for (double c : centers) {
                edges.push_back(c - w / 2);
            }
            edges.push_back(centers.back() + w / 2);
            p.add_histogram(edges, col(rows, d.column("density")), "regime " + reg, color(i++));
        }
        if (!p.empty()) {
            p.add_line(r, curve(Ensemble::Poisson), "Poisson", "#1f77b4", true);
            p.add_line(r, curve(Ensemble::GUE), "GUE", "#d62728", true);
        }
        save_plot(m, p, "egrd_" + s + ".svg");
    }
}

void plot_esff(RunManifest &m, const CsvData &d) {
    for (const auto &s : distinct(d, "series")) {
        SvgPlot p("Entanglement spectral form factor, " + s, "theta", "F(theta)");
        p.set_log_x(true);
        p.set_log_y(true);
        std::size_t i = 0;
        for (const auto &reg : distinct(d, "regime")) {
            const auto rows = select(d, {{"series", s}, {"regime", reg}});
            if (!rows.empty()) {
                p.add_line(col(rows, d.column("theta")), col(rows, d.column("F_mean")),
                           "regime " + reg, color(i++));
            }
        }
        save_plot(m, p, "esff_" + s + ".svg");
    }
}

void plot_entropy(RunManifest &m, const CsvData &d) {
    for (const auto &s : distinct(d, "series")) {
        SvgPlot p("Entropy decomposition, " + s, "gt", "entropy (nats)");
        const auto rows = select(d, {{"series", s}});
        std::vector<double> gts;
        for (double g : col(rows, d.column("gt"))) {
            if (std::find(gts.begin(), gts.end(), g) == gts.end()) {
                gts.push_back(g);
            }
        }
        std::sort(gts.begin(), gts.end());
        std::size_t i = 0;
        for (const char *name : {"S_vN", "S_sym", "S_dist"}) {
            const std::size_t c = d.column(name);
            const std::size_t cg = d.column("gt");
            std::vector<double> mean(gts.size(), 0.0);
            std::vector<int> n(gts.size(), 0);
            for (const auto *r : rows) {
                const auto k = static_cast<std::size_t>(
                    std::find(gts.begin(), gts.end(), std::stod((*r)[cg])) - gts.begin());
                mean[k] += std::stod((*r)[c]);
                ++n[k];
            }
            for (std::size_t k = 0; k < gts.size(); ++k) {
                mean[k] /= std::max(n[k], 1);
            }
            p.add_line(gts, mean, name, color(i++), false, true);
        }
        if (!p.empty()) {
            p.add_hline(std::log(4.0), "log 4", "#7f7f7f", true);
        }
        save_plot(m, p, "entropy_" + s + ".svg");
    }
}

void plot_observables(RunManifest &m, const CsvData &d) {
    for (const auto &mode : distinct(d, "mode")) {
        for (const char *kind : {"single", "pair"}) {
            SvgPlot p(std::string(kind == std::string("single") ? "Single" : "Two") +
                          "-qubit observables, " + mode,
                      "gt", "expectation");
            p.set_y_range(-1.05, 1.05);
            std::size_t i = 0;
            for (const auto &o : distinct(d, "observable")) {
                const bool single = o.size() <= 2;
                if (single != (kind == std::string("single"))) {
                    continue;
                }
                const auto rows = select(d, {{"mode", mode}, {"observable", o}});
                if (rows.empty()) {
                    continue;
                }
                const auto gt = col(rows, d.column("gt"));
                p.add_line(gt, col(rows, d.column("exact")), "", color(i));
                p.add_line(gt, col(rows, d.column("mean")), o, color(i), true, true);
                ++i;
            }
            save_plot(m, p, std::string("observables_") + kind + "_" + mode + ".svg");
        }
    }
}

} // namespace

void emit_plots(RunManifest &manifest) {
    namespace fs = std::filesystem;
    fs::create_directories(manifest.output_dir / "plots");
    const std::vector<std::pair<std::string, void (*)(RunManifest &, const CsvData &)>> jobs = {
        {"gap_ratio_trace.csv", plot_gap_trace},
        {"egrd.csv", plot_egrd},
        {"esff.csv", plot_esff},
        {"entropy.csv", plot_entropy},
        {"observables.csv", plot_observables},
    };
    for (const auto &[file, fn] : jobs) {
        const fs::path path = manifest.output_dir / file;
        if (!fs::exists(path)) {
            manifest.notes.push_back("plot input " + file + " missing");
            continue;
        }
        try {
            const CsvData d = read_csv(path);
            if (d.rows.empty()) {
                manifest.notes.push_back("plot input " + file + " empty; no plot written");
                continue;
            }
            fn(manifest, d);
        } catch (const std::exception &e) {
            manifest.notes.push_back("plot from " + file + " failed: " + e.what());
        }
    }
}

bool SelfTestReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.second; });
}

SelfTestReport run_selftest(const RunConfig &config) {
    config.validate();
    SelfTestReport rep;
    auto check = [&rep](const std::string &name, bool pass, const std::string &detail) {
        rep.checks.emplace_back(name, pass);
        rep.details.push_back(name + ": " + detail);
    };
    const std::vector<BasisState> states = initial_states(config);
    const double gt = config.gt_points.size() > 1 ? config.gt_points[1] : config.gt_points[0];
    const int m = config.model.subsystem_qubits();
    const SectorPartition part(config.model);
    const auto gauss = gauss_operators(config.model);

    for (Evolution mode : {Evolution::Exact, Evolution::Trotter}) {
        const std::string name(evolution_name(mode));
        const StateVector psi = evolve_state(states.front(), config, gt, mode);
        double gauss_err = 0.0;
        for (const auto &g : gauss) {
            gauss_err = std::max(gauss_err, std::abs(expectation(psi, g) - 1.0));
        }
        check(name + " gauss law", gauss_err < 1e-10, "max |<G> - 1| = " + fmt(gauss_err));

        const DensityMatrix rho = partial_trace(psi, m);
        const DensityCheck dc = rho.check();
        check(name + " reduced state", dc.ok(),
              "hermiticity " + fmt(dc.hermiticity) + ", trace error " + fmt(dc.trace_error) +
                  ", min eigenvalue " + fmt(dc.min_eigenvalue));

        CounterRng rng = CounterRng::stream(config.seed, {0x5E1F, static_cast<std::uint64_t>(mode)});
        double marg_err = 0.0;
        for (int b = 0; b < 8; ++b) {
            const RandomBasis basis = sample_cue_basis(rng, psi.n_qubits(), b);
            const auto p_state = marginal_basis_probabilities(psi, basis, m);
            const auto p_rho = exact_basis_probabilities(rho, basis);
            for (std::size_t i = 0; i < p_state.size(); ++i) {
                marg_err = std::max(marg_err, std::abs(p_state[i] - p_rho[i]));
            }
        }
        check(name + " measurement marginals", marg_err < 1e-10,
              "max |P_state - P_rho| = " + fmt(marg_err));

        const EntropyDecomposition d = entropy_decomposition(rho, part);
        const double id = std::abs(d.s_vn - d.s_symmetry - d.s_distillable);
        check(name + " entropy identity", id < 1e-10, "|S_vN - S_sym - S_dist| = " + fmt(id));
    }

    const HamiltonianSpec h = build_dual_hamiltonian(config.model);
    const double t_max =
        *std::max_element(config.gt_points.begin(), config.gt_points.end()) / config.model.g;
    const Circuit step =
        build_trotter_circuit(h, t_max / config.n_trotter_steps, 1, config.trotter_order);
    double max_angle = 0.0;
    for (const auto &g : step.gates()) {
        if (g.kind == GateKind::RXX) {
            max_angle = std::max(max_angle, std::abs(g.angle));
        }
    }
    check("trotter step gate budget",
          step.count(GateKind::RXX) == 12 && max_angle <= std::numbers::pi / 4 + 1e-15,
          std::to_string(step.count(GateKind::RXX)) + " RXX gates, max |angle| " +
              fmt(max_angle));
    return rep;
}

} // namespace z2chaos
