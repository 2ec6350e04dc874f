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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "z2chaos/analysis.hpp"
#include "z2chaos/circuit.hpp"
#include "z2chaos/lattice.hpp"
#include "z2chaos/tomography.hpp"

namespace z2chaos {

std::string_view tool_version();

/// Default scaled-time grid gt = 0, 0.34, ..., 2.38.
std::vector<double> default_gt_grid();
/// lo, lo + step, ... up to hi inclusive, rounded to 1e-9.
std::vector<double> uniform_gt_grid(double lo, double hi, double step);

struct RunConfig {
    ModelConfig model;
    int n_initial_states = 6;
    std::vector<double> gt_points = default_gt_grid(); // t = gt / g
    int n_trotter_steps = 4;
    int n_bases = 24;
    std::int64_t n_shots = 750;
    int n_boots = 1000;
    std::uint64_t seed = 20240611;
    std::filesystem::path output_dir = "z2chaos_out";

    bool exact = true;
    bool trotter = true;
    bool tomography = false;
    bool infinite = false;

    int threads = 1;
    RegimeWindows regimes;
    TrotterOrder trotter_order = default_trotter_order();
    double cutoff = kDefaultCutoff;
    int fit_restarts = 4;
    int fit_max_iter = 2000;
    /// State whose single- and two-qubit observables are traced over time;
    /// empty selects observable_initial_state's default.
    std::string observable_state;
    bool observables = true;
    bool plots = true;

    /// Throws std::invalid_argument.
    void validate() const;
};

/// "key = value" lines; see format_run_config for the key set.
RunConfig parse_run_config(std::string_view text);
std::string format_run_config(const RunConfig &config);
RunConfig read_run_config(const std::filesystem::path &path);

/// Named parameter sets: fig3 (observable traces), fig4 and fig5 (exact
/// evolution to gt = 10 for level statistics and form factors), quick.
RunConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

struct Artifact {
    std::string path; // relative to the output directory
    std::string checksum;
};

struct RunManifest {
    std::string config_text;
    std::filesystem::path output_dir;
    std::string version;
    std::map<std::string, std::uint64_t> seeds;
    std::vector<Artifact> artifacts;
    std::vector<std::pair<std::string, double>> timings; // seconds
    std::vector<std::string> notes;
    int fits_total = 0;
    int fits_converged = 0;
    int failures = 0;

    [[nodiscard]] bool partial() const {
        return failures > 0 || fits_converged < fits_total;
    }
    /// Registers a file under output_dir with its checksum.
    void add_artifact(const std::filesystem::path &relative);
    [[nodiscard]] std::string str() const;
    void write() const;
};

struct BootstrapResult {
    double mean = 0.0;
    double std = 0.0;
};

/// Resamples with replacement n_boots times; mean and standard deviation of
/// the resampled means. Throws std::invalid_argument on empty input.
BootstrapResult bootstrap(const std::vector<double> &samples, int n_boots,
                          std::uint64_t seed);

/// Evolution of one initial state to one scaled time.
enum class Evolution { Exact, Trotter };
std::string_view evolution_name(Evolution e);

StateVector evolve_state(const BasisState &initial, const RunConfig &config,
                         double gt, Evolution mode);

/// Initial states drawn for the run, index i from seed substream i.
std::vector<BasisState> initial_states(const RunConfig &config);

/// config.observable_state if set; otherwise 111011000100 on the default
/// 12-qubit register and the first drawn initial state elsewhere.
BasisState observable_initial_state(const RunConfig &config);

struct SpectrumItem {
    std::string series;
    int state = 0;
    double gt = 0.0;
    EntanglementSpectrum spectrum;
};

/// Gap ratios pooled over sectors of one spectrum.
std::vector<double> pooled_gap_ratios(const EntanglementSpectrum &s,
                                      int *ties = nullptr);

struct RegimeStatistics {
    int regime = 0;
    std::vector<double> ratios;
    int ties = 0;
    Histogram histogram;
    std::vector<double> theta;
    std::vector<double> f_mean;
    std::vector<double> f_std;
    int esff_samples = 0; // (state, time, occupied sector) triples averaged
    RampWindow window;
    RampFit ramp;
    std::string ramp_error; // set when no ramp could be fitted
};

/// Pools the spectra of one series into regime windows: gap ratios, EGRD
/// and the sector-averaged form factor. Empty sectors are skipped.
std::vector<RegimeStatistics>
regime_statistics(const std::vector<SpectrumItem> &items,
                  const RegimeWindows &windows);

/// Runs all stages, writes CSVs, records, fits, plots and manifest.txt.
/// Per-item failures are recorded in the manifest.
RunManifest run_pipeline(const RunConfig &config);

/// Reads the analysis CSVs under manifest.output_dir and writes SVG plots
/// to plots/. Missing or empty inputs are noted and skipped.
void emit_plots(RunManifest &manifest);

struct SelfTestReport {
    std::vector<std::pair<std::string, bool>> checks;
    std::vector<std::string> details;
    [[nodiscard]] bool ok() const;
};

/// Cross-module identities on one time point: exact reduced state against
/// infinite-shot measurement marginals, Gauss law, trace and positivity.
SelfTestReport run_selftest(const RunConfig &config);

} // namespace z2chaos
