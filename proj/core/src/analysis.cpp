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

#include "z2chaos/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace z2chaos {

int EntanglementSpectrum::total_rank() const {
    int r = 0;
    for (const auto &x : xi) {
        r += static_cast<int>(x.size());
    }
    return r;
}

namespace {

Eigen::MatrixXcd sector_block(const Eigen::MatrixXcd &m,
                              const std::vector<int> &idx) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd b(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < k; ++c) {
            b(r, c) = m(idx[static_cast<std::size_t>(r)],
                        idx[static_cast<std::size_t>(c)]);
        }
    }
    return b;
}

void check_partition(std::size_t dim, const SectorPartition &partition) {
    if (dim != partition.dim()) {
        throw std::invalid_argument("matrix does not match the sector partition");
    }
}

} // namespace

EntanglementSpectrum entanglement_spectrum(const DensityMatrix &rho,
                                           const SectorPartition &partition,
                                           double cutoff) {
    if (!(cutoff > 0.0 && cutoff < 1.0)) {
        throw std::invalid_argument("cutoff must lie in (0, 1)");
    }
    check_partition(rho.dim(), partition);
    EntanglementSpectrum out;
    out.cutoff_used = cutoff;
    for (int s = 0; s < 4; ++s) {
        const Eigen::MatrixXcd b =
            sector_block(rho.matrix(), partition.indices(s + 1));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
        auto &xi = out.xi[static_cast<std::size_t>(s)];
        for (Eigen::Index i = es.eigenvalues().size(); i-- > 0;) {
            const double p = es.eigenvalues()[i];
            if (p >= cutoff) {
                xi.push_back(-std::log(p));
            }
        }
    }
    return out;
}

EntanglementSpectrum spectrum_from_hamiltonian(const Eigen::MatrixXcd &h,
                                               const SectorPartition &partition) {
    check_partition(static_cast<std::size_t>(h.rows()), partition);
    std::array<Eigen::VectorXd, 4> e;
    double e0 = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 4; ++s) {
        const Eigen::MatrixXcd b = sector_block(h, partition.indices(s + 1));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
        e[static_cast<std::size_t>(s)] = es.eigenvalues();
        e0 = std::min(e0, es.eigenvalues().minCoeff());
    }
    double z = 0.0;
    for (const auto &v : e) {
        z += (-(v.array() - e0)).exp().sum();
    }
    const double log_z = -e0 + std::log(z);
    EntanglementSpectrum out;
    out.cutoff_used = 0.0;
    for (std::size_t s = 0; s < 4; ++s) {
        for (Eigen::Index i = 0; i < e[s].size(); ++i) {
            out.xi[s].push_back(e[s][i] + log_z);
        }
    }
    return out;
}

std::vector<double> gap_ratios(const std::vector<double> &xi, int *ties) {
    std::vector<double> r;
    if (xi.size() < 3) {
        return r;
    }
    r.reserve(xi.size() - 2);
    for (std::size_t k = 2; k < xi.size(); ++k) {
        const double d0 = xi[k - 1] - xi[k - 2];
        const double d1 = xi[k] - xi[k - 1];
        if (d0 < 0.0 || d1 < 0.0) {
            throw std::invalid_argument("gap_ratios needs ascending levels");
        }
        const double hi = std::max(d0, d1);
        if (hi == 0.0) {
            r.push_back(1.0);
            if (ties != nullptr) {
                ++*ties;
            }
        } else {
            r.push_back(std::min(d0, d1) / hi);
        }
    }
    return r;
}

Histogram egrd(const std::vector<double> &ratios, int n_bins) {
    if (ratios.empty()) {
        throw std::invalid_argument("egrd needs a nonempty pool");
    }
    if (n_bins < 1) {
        throw std::invalid_argument("egrd needs at least one bin");
    }
    Histogram h;
    h.bin_width = 1.0 / n_bins;
    h.density.assign(static_cast<std::size_t>(n_bins), 0.0);
    h.count = ratios.size();
    double sum = 0.0;
    for (double r : ratios) {
        if (!(r >= 0.0 && r <= 1.0)) {
            throw std::invalid_argument("gap ratio outside [0, 1]");
        }
        const auto bin = std::min(static_cast<std::size_t>(r * n_bins),
                                  static_cast<std::size_t>(n_bins - 1));
        h.density[bin] += 1.0;
        sum += r;
    }
    const double norm = static_cast<double>(ratios.size()) * h.bin_width;
    for (double &d : h.density) {
        d /= norm;
    }
    h.mean = sum / static_cast<double>(ratios.size());
    return h;
}

std::string_view ensemble_name(Ensemble e) {
    switch (e) {
    case Ensemble::Poisson:
        return "poisson";
    case Ensemble::GOE:
        return "goe";
    case Ensemble::GUE:
        return "gue";
    }
    return "unknown";
}

namespace {

double surmise_unnormalized(double beta, double r) {
    return std::pow(r + r * r, beta) /
           std::pow(1.0 + r + r * r, 1.0 + 1.5 * beta);
}

template <class F> double integrate01(F f) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, 0.0, 1.0, 15, 1e-14);
}

double surmise_norm(double beta) {
    return integrate01([beta](double r) { return surmise_unnormalized(beta, r); });
}

} // namespace

double reference_density(Ensemble e, double r) {
    if (r < 0.0 || r > 1.0) {
        return 0.0;
    }
    switch (e) {
    case Ensemble::Poisson:
        return 2.0 / ((1.0 + r) * (1.0 + r));
    case Ensemble::GOE: {
        static const double n1 = surmise_norm(1.0);
        return surmise_unnormalized(1.0, r) / n1;
    }
    case Ensemble::GUE: {
        static const double n2 = surmise_norm(2.0);
        return surmise_unnormalized(2.0, r) / n2;
    }
    }
    return 0.0;
}

double reference_mean(Ensemble e) {
    return integrate01([e](double r) { return r * reference_density(e, r); });
}

std::vector<double> log_theta_grid(int n, double lo, double hi) {
    if (n < 2 || !(lo > 0.0) || !(hi > lo)) {
        throw std::invalid_argument("invalid theta grid");
    }
    std::vector<double> t(static_cast<std::size_t>(n));
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < n; ++i) {
        t[static_cast<std::size_t>(i)] =
            std::pow(10.0, a + (b - a) * i / (n - 1));
    }
    return t;
}

std::vector<double> esff(const std::vector<double> &xi,
                         const std::vector<double> &theta) {
    if (xi.empty()) {
        throw std::invalid_argument("esff needs a nonempty sector spectrum");
    }
    const double r2 = static_cast<double>(xi.size()) * static_cast<double>(xi.size());
    std::vector<double> f(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        double re = 0.0;
        double im = 0.0;
        for (double x : xi) {
            re += std::cos(theta[k] * x);
            im += std::sin(theta[k] * x);
        }
        f[k] = (re * re + im * im) / r2;
    }
    return f;
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    int points = 0;
    bool monotone = true;
};

LineFit fit_loglog(const std::vector<double> &theta, const std::vector<double> &f,
                   double lo, double hi) {
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    int n = 0;
    LineFit out;
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < theta.size(); ++k) {
        if (theta[k] < lo || theta[k] > hi) {
            continue;
        }
        if (!(f[k] > 0.0) || !(theta[k] > 0.0)) {
            throw std::invalid_argument("ramp fit needs positive values");
        }
        const double x = std::log(theta[k]);
        const double y = std::log(f[k]);
        if (f[k] < prev) {
            out.monotone = false;
        }
        prev = f[k];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) {
        throw std::invalid_argument("ramp window holds fewer than two points");
    }
    const double denom = n * sxx - sx * sx;
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    out.points = n;
    return out;
}

} // namespace

RampFit fit_ramp(const std::vector<double> &theta, const std::vector<double> &f,
                 double theta_lo, double theta_hi) {
    if (theta.size() != f.size()) {
        throw std::invalid_argument("theta and F lengths differ");
    }
    const LineFit base = fit_loglog(theta, f, theta_lo, theta_hi);
    RampFit r;
    r.kappa = base.slope;
    r.intercept = base.intercept;
    r.points = base.points;
    r.monotone = base.monotone;
    r.theta_lo = theta_lo;
    r.theta_hi = theta_hi;
    const std::array<std::pair<double, double>, 4> variants = {{
        {theta_lo * 0.75, theta_hi},
        {theta_lo * 1.25, theta_hi},
        {theta_lo, theta_hi * 0.75},
        {theta_lo, theta_hi * 1.25},
    }};
    for (const auto &[lo, hi] : variants) {
        try {
            const LineFit v = fit_loglog(theta, f, lo, hi);
            r.uncertainty = std::max(r.uncertainty, std::abs(v.slope - base.slope));
        } catch (const std::invalid_argument &) {
            // A shrunken window with too few points adds no information.
        }
    }
    return r;
}

RampWindow locate_ramp(const std::vector<double> &theta,
                       const std::vector<double> &f, double plateau_from,
                       double fraction) {
    if (theta.size() != f.size() || theta.empty()) {
        throw std::invalid_argument("theta and F lengths differ");
    }
    RampWindow w;
    double acc = 0.0;
    int n = 0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        if (theta[k] >= plateau_from) {
            acc += f[k];
            ++n;
        }
    }
    if (n == 0) {
        throw std::invalid_argument("theta grid ends before the plateau region");
    }
    w.plateau = acc / n;
    std::size_t dip = 0;
    for (std::size_t k = 1; k < theta.size(); ++k) {
        if (theta[k] >= plateau_from) {
            break;
        }
        if (f[k] < f[dip]) {
            dip = k;
        }
    }
    w.dip_theta = theta[dip];
    w.dip_value = f[dip];
    std::size_t end = dip;
    while (end + 1 < theta.size() && f[end] < fraction * w.plateau) {
        ++end;
    }
    w.theta_lo = theta[dip];
    w.theta_hi = theta[end];
    return w;
}

double von_neumann_entropy(const DensityMatrix &rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (rho.matrix() + rho.matrix().adjoint()), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()[i];
        if (p > 0.0) {
            s -= p * std::log(p);
        }
    }
    return s;
}

EntropyDecomposition entropy_decomposition(const DensityMatrix &rho,
                                           const SectorPartition &partition) {
    check_partition(rho.dim(), partition);
    EntropyDecomposition d;
    for (int s = 0; s < 4; ++s) {
        const Eigen::MatrixXcd b =
            sector_block(rho.matrix(), partition.indices(s + 1));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
        double ps = 0.0;
        double plogp = 0.0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const double p = es.eigenvalues()[i];
            if (p > 0.0) {
                ps += p;
                plogp += p * std::log(p);
            }
        }
        d.weights[static_cast<std::size_t>(s)] = ps;
        if (ps > 0.0) {
            d.s_symmetry -= ps * std::log(ps);
            // p_s S(rho_s / p_s) = -sum p log p + p_s log p_s
            d.s_distillable += -plogp + ps * std::log(ps);
        }
    }
    d.s_vn = von_neumann_entropy(rho);
    return d;
}

int RegimeWindows::regime(double gt) const {
    if (gt >= 0.0 && gt < i_end) {
        return 1;
    }
    if (gt >= i_end && gt < ii_end) {
        return 2;
    }
    if (gt >= ii_end && gt <= iii_end) {
        return 3;
    }
    return 0;
}

} // namespace z2chaos
