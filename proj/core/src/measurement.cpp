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

#include "z2chaos/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace z2chaos {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void RandomBasis::validate() const {
    for (const auto &a : angles) {
        for (double v : a) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("basis angle must be finite");
            }
        }
        if (a[1] < 0.0 || a[1] > std::numbers::pi) {
            throw std::invalid_argument("polar basis angle outside [0, pi]");
        }
    }
}

RandomBasis sample_cue_basis(CounterRng &rng, int n_qubits, int basis_id) {
    if (n_qubits < 1) {
        throw std::invalid_argument("basis needs at least one qubit");
    }
    RandomBasis b;
    b.basis_id = basis_id;
    b.angles.resize(static_cast<std::size_t>(n_qubits));
    for (auto &a : b.angles) {
        a[0] = kTwoPi * rng.uniform();
        a[1] = std::acos(std::clamp(2.0 * rng.uniform() - 1.0, -1.0, 1.0));
        a[2] = kTwoPi * rng.uniform();
    }
    return b;
}

Circuit basis_rotation_circuit(const RandomBasis &basis) {
    basis.validate();
    Circuit c(basis.n_qubits());
    for (int q = 0; q < basis.n_qubits(); ++q) {
        const auto &a = basis.angles[static_cast<std::size_t>(q)];
        c.push_back(Gate::rz(q, a[0]));
        c.push_back(Gate::ry(q, a[1]));
        c.push_back(Gate::rz(q, a[2]));
    }
    return c;
}

Eigen::Matrix2cd basis_unitary(const std::array<double, 3> &angles) {
    auto as2 = [](const Gate &g) -> Eigen::Matrix2cd { return gate_matrix(g); };
    return as2(Gate::rz(0, angles[2])) * as2(Gate::ry(0, angles[1])) *
           as2(Gate::rz(0, angles[0]));
}

Eigen::MatrixXcd basis_unitary(const RandomBasis &basis, int m) {
    if (m < 0 || m > basis.n_qubits()) {
        throw std::invalid_argument("basis has fewer qubits than requested");
    }
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = 0; q < m; ++q) {
        const Eigen::Matrix2cd uq =
            basis_unitary(basis.angles[static_cast<std::size_t>(q)]);
        Eigen::MatrixXcd next(u.rows() * 2, u.cols() * 2);
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            for (Eigen::Index c = 0; c < u.cols(); ++c) {
                next.block<2, 2>(2 * r, 2 * c) = u(r, c) * uq;
            }
        }
        u = std::move(next);
    }
    return u;
}

std::vector<double> MeasurementRecord::frequencies() const {
    std::vector<double> f(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        f[i] = static_cast<double>(counts[i]) / static_cast<double>(n_shots);
    }
    return f;
}

void MeasurementRecord::validate() const {
    basis.validate();
    if (subsystem_size < 1 || subsystem_size > n_qubits ||
        basis.n_qubits() != n_qubits) {
        throw std::invalid_argument("inconsistent record register sizes");
    }
    if (counts.size() != (std::size_t{1} << subsystem_size)) {
        throw std::invalid_argument("record count table has the wrong size");
    }
    std::int64_t total = 0;
    for (std::int64_t c : counts) {
        if (c < 0) {
            throw std::invalid_argument("negative count in record");
        }
        total += c;
    }
    if (n_shots < 1 || total != n_shots) {
        throw std::invalid_argument("record counts do not sum to n_shots");
    }
}

namespace {

std::vector<double> rotated_probabilities(const StateVector &state,
                                          const RandomBasis &basis) {
    if (basis.n_qubits() != state.n_qubits()) {
        throw std::invalid_argument("basis and state sizes differ");
    }
    const StateVector rotated =
        apply_circuit(state, basis_rotation_circuit(basis));
    std::vector<double> p(rotated.dim());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::norm(rotated[i]);
    }
    return p;
}

} // namespace

MeasurementRecord simulate_measurements(const StateVector &state,
                                        const RandomBasis &basis,
                                        std::int64_t n_shots, CounterRng &rng,
                                        int subsystem_size) {
    if (n_shots < 1) {
        throw std::invalid_argument("n_shots must be positive");
    }
    const int n = state.n_qubits();
    if (subsystem_size < 1 || subsystem_size > n) {
        throw std::invalid_argument("subsystem size out of range");
    }
    const std::vector<double> p = rotated_probabilities(state, basis);
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        cdf[i] = acc;
    }
    MeasurementRecord r;
    r.basis = basis;
    r.n_qubits = n;
    r.subsystem_size = subsystem_size;
    r.n_shots = n_shots;
    r.counts.assign(std::size_t{1} << subsystem_size, 0);
    const int drop = n - subsystem_size;
    for (std::int64_t s = 0; s < n_shots; ++s) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        const auto idx = static_cast<std::size_t>(it - cdf.begin());
        ++r.counts[idx >> drop];
    }
    return r;
}

std::vector<double> marginal_basis_probabilities(const StateVector &state,
                                                 const RandomBasis &basis,
                                                 int subsystem_size) {
    const std::vector<double> p = rotated_probabilities(state, basis);
    const int drop = state.n_qubits() - subsystem_size;
    if (drop < 0 || subsystem_size < 1) {
        throw std::invalid_argument("subsystem size out of range");
    }
    std::vector<double> out(std::size_t{1} << subsystem_size, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i >> drop] += p[i];
    }
    return out;
}

std::vector<double> exact_basis_probabilities(const DensityMatrix &rho,
                                              const RandomBasis &basis) {
    const int m = rho.n_qubits();
    const Eigen::MatrixXcd u = basis_unitary(basis, m);
    const Eigen::MatrixXcd ur = u * rho.matrix();
    std::vector<double> p(rho.dim());
    for (Eigen::Index b = 0; b < u.rows(); ++b) {
        p[static_cast<std::size_t>(b)] = ur.row(b).dot(u.row(b)).real();
    }
    return p;
}

std::string format_record(const MeasurementRecord &r) {
    r.validate();
    std::ostringstream out;
    out << std::setprecision(17);
    out << "basis_id " << r.basis.basis_id << "\n";
    out << "n_qubits " << r.n_qubits << "\n";
    out << "subsystem_size " << r.subsystem_size << "\n";
    out << "n_shots " << r.n_shots << "\n";
    for (int q = 0; q < r.n_qubits; ++q) {
        const auto &a = r.basis.angles[static_cast<std::size_t>(q)];
        out << "angle " << q << ' ' << a[0] << ' ' << a[1] << ' ' << a[2]
            << "\n";
    }
    out << "counts\n";
    for (std::size_t i = 0; i < r.counts.size(); ++i) {
        if (r.counts[i] == 0) {
            continue;
        }
        for (int q = 0; q < r.subsystem_size; ++q) {
            out << ((i >> (r.subsystem_size - 1 - q)) & 1U);
        }
        out << ' ' << r.counts[i] << "\n";
    }
    out << "end\n";
    return out.str();
}

std::vector<MeasurementRecord> parse_records(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<MeasurementRecord> out;
    std::string line;
    int lineno = 0;
    MeasurementRecord cur;
    bool open = false;
    bool in_counts = false;
    auto fail = [&](const std::string &what) {
        throw std::invalid_argument("record line " + std::to_string(lineno) +
                                    ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') {
            continue;
        }
        if (key == "end") {
            if (!open) {
                fail("'end' without a record");
            }
            try {
                cur.validate();
            } catch (const std::invalid_argument &e) {
                fail(e.what());
            }
            out.push_back(std::move(cur));
            cur = MeasurementRecord{};
            open = false;
            in_counts = false;
            continue;
        }
        if (in_counts) {
            std::int64_t c = 0;
            if (!(ls >> c) ||
                key.size() != static_cast<std::size_t>(cur.subsystem_size)) {
                fail("expected '<bitstring> <count>'");
            }
            std::size_t idx = 0;
            for (char ch : key) {
                if (ch != '0' && ch != '1') {
                    fail("bad bitstring");
                }
                idx = (idx << 1) | static_cast<std::size_t>(ch - '0');
            }
            cur.counts[idx] += c;
            continue;
        }
        open = true;
        if (key == "basis_id") {
            ls >> cur.basis.basis_id;
        } else if (key == "n_qubits") {
            ls >> cur.n_qubits;
            if (cur.n_qubits < 1 || cur.n_qubits > 30) {
                fail("n_qubits out of range");
            }
            cur.basis.angles.assign(static_cast<std::size_t>(cur.n_qubits),
                                    {0.0, 0.0, 0.0});
        } else if (key == "subsystem_size") {
            ls >> cur.subsystem_size;
        } else if (key == "n_shots") {
            ls >> cur.n_shots;
        } else if (key == "angle") {
            int q = -1;
            std::array<double, 3> a{};
            if (!(ls >> q >> a[0] >> a[1] >> a[2]) || q < 0 ||
                q >= cur.n_qubits) {
                fail("bad angle row");
            }
            cur.basis.angles[static_cast<std::size_t>(q)] = a;
        } else if (key == "counts") {
            if (cur.subsystem_size < 1 || cur.subsystem_size > cur.n_qubits) {
                fail("subsystem_size missing or out of range");
            }
            cur.counts.assign(std::size_t{1} << cur.subsystem_size, 0);
            in_counts = true;
        } else {
            fail("unknown key '" + key + "'");
        }
        if (ls.fail()) {
            fail("malformed value");
        }
    }
    if (open) {
        throw std::invalid_argument("record text ends inside a record");
    }
    return out;
}

void write_records(const std::filesystem::path &path,
                   const std::vector<MeasurementRecord> &records) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (const auto &r : records) {
        out << format_record(r);
    }
}

std::vector<MeasurementRecord> read_records(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_records(buf.str());
}

} // namespace z2chaos
