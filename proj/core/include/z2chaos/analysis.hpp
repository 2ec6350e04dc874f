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

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "z2chaos/lattice.hpp"
#include "z2chaos/state_vector.hpp"

namespace z2chaos {

constexpr double kDefaultCutoff = 1e-15;

/// Per-sector levels xi = -log p, ascending. Index 0 holds sector label 1.
struct EntanglementSpectrum {
    std::array<std::vector<double>, 4> xi;
    double cutoff_used = 0.0;

    [[nodiscard]] int rank(int sector_index) const {
        return static_cast<int>(xi[static_cast<std::size_t>(sector_index)].size());
    }
    [[nodiscard]] int total_rank() const;
};

/// Eigenvalues of each symmetry block of rho; values below cutoff are
/// dropped, so an unoccupied sector is empty.
EntanglementSpectrum entanglement_spectrum(const DensityMatrix &rho,
                                           const SectorPartition &partition,
                                           double cutoff = kDefaultCutoff);

/// Spectrum of rho = exp(-H)/Z for a fitted entanglement Hamiltonian: each
/// symmetry block of H is diagonalized and shifted by log Z. No cutoff.
EntanglementSpectrum spectrum_from_hamiltonian(const Eigen::MatrixXcd &h,
                                               const SectorPartition &partition);

/// r = min(d_k, d_{k-1}) / max(d_k, d_{k-1}) for consecutive gaps of an
/// ascending list. Two zero gaps give r = 1 and increment *ties.
/// Returns empty for fewer than three levels.
std::vector<double> gap_ratios(const std::vector<double> &xi,
                               int *ties = nullptr);

struct Histogram {
    std::vector<double> density; // per bin, integrates to 1
    double bin_width = 0.0;
    double mean = 0.0;
    std::size_t count = 0;

    [[nodiscard]] double bin_center(std::size_t i) const {
        return (static_cast<double>(i) + 0.5) * bin_width;
    }
};

/// Histogram of gap ratios on [0, 1] with n_bins equal bins.
Histogram egrd(const std::vector<double> &ratios, int n_bins = 12);

enum class Ensemble { Poisson, GOE, GUE };

std::string_view ensemble_name(Ensemble e);

/// Density of the folded gap ratio on [0, 1]: 2/(1+r)^2 for Poisson and the
/// normalized surmise (r+r^2)^b / (1+r+r^2)^(1+3b/2) for b = 1, 2.
double reference_density(Ensemble e, double r);
/// Mean of reference_density, by adaptive quadrature.
double reference_mean(Ensemble e);

std::vector<double> log_theta_grid(int n = 200, double lo = 1e-2,
                                   double hi = 1e3);

/// |sum_l exp(i theta xi_l)|^2 / R^2 for one sector's levels.
std::vector<double> esff(const std::vector<double> &xi,
                         const std::vector<double> &theta);

struct RampFit {
    double kappa = 0.0;
    double intercept = 0.0; // log F at log theta = 0
    double uncertainty = 0.0;
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    int points = 0;
    bool monotone = true;
};

/// Least-squares slope of log F against log theta inside
/// [theta_lo, theta_hi]. The uncertainty is the largest change of the slope
/// when either window end moves by +/-25%.
RampFit fit_ramp(const std::vector<double> &theta, const std::vector<double> &f,
                 double theta_lo, double theta_hi);

struct RampWindow {
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    double dip_theta = 0.0;
    double dip_value = 0.0;
    double plateau = 0.0;
};

/// Locates the ramp of an averaged form factor: from the global minimum
/// (dip) up to the first point that reaches `fraction` of the late-theta
/// plateau, the mean of F over theta >= plateau_from.
RampWindow locate_ramp(const std::vector<double> &theta,
                       const std::vector<double> &f, double plateau_from = 1e2,
                       double fraction = 0.8);

struct EntropyDecomposition {
    double s_vn = 0.0;
    double s_symmetry = 0.0;
    double s_distillable = 0.0;
    std::array<double, 4> weights{};
};

/// S_vN = -sum p_s log p_s + sum p_s S(rho_s / p_s), natural logarithms.
EntropyDecomposition entropy_decomposition(const DensityMatrix &rho,
                                           const SectorPartition &partition);

double von_neumann_entropy(const DensityMatrix &rho);

struct RegimeWindows {
    double i_end = 1.8;
    double ii_end = 5.0;
    double iii_end = 10.0;

    /// 1, 2 or 3 for gt inside the windows, 0 otherwise.
    [[nodiscard]] int regime(double gt) const;
};

} // namespace z2chaos
