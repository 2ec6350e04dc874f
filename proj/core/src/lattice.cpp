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

#include "z2chaos/lattice.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "z2chaos/rng.hpp"

namespace z2chaos {

void ModelConfig::validate() const {
    if (la < 2) {
        throw std::invalid_argument(
            "la must be at least 2 so that A has an interior plaquette");
    }
    if (2 * la > lx) {
        throw std::invalid_argument("la must not exceed lx/2");
    }
    if (n_qubits() > 30) {
        throw std::invalid_argument("lx too large for a dense state vector");
    }
    if (!std::isfinite(g)) {
        throw std::invalid_argument("g must be finite");
    }
    if (v_y != 1) {
        throw std::invalid_argument("only the v_y = +1 sector is supported");
    }
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

ModelConfig parse_model_config(std::string_view text) {
    ModelConfig c;
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
            throw std::invalid_argument("config line " +
                                        std::to_string(lineno) +
                                        ": expected key = value");
        }
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string val = trim(std::string_view(t).substr(eq + 1));
        try {
            if (key == "lx") {
                c.lx = std::stoi(val);
            } else if (key == "la") {
                c.la = std::stoi(val);
            } else if (key == "g") {
                c.g = std::stod(val);
            } else if (key == "seed") {
                c.seed = std::stoull(val);
            } else {
                throw std::invalid_argument("unknown key '" + key + "'");
            }
        } catch (const std::logic_error &e) {
            throw std::invalid_argument("config line " +
                                        std::to_string(lineno) + ": " +
                                        e.what());
        }
    }
    c.validate();
    return c;
}

std::string format_model_config(const ModelConfig &config) {
    std::ostringstream out;
    out.precision(17);
    out << "lx = " << config.lx << "\n"
        << "la = " << config.la << "\n"
        << "g = " << config.g << "\n"
        << "seed = " << config.seed << "\n";
    return out.str();
}

ModelConfig read_model_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model_config(buf.str());
}

void write_model_config(const std::filesystem::path &path,
                        const ModelConfig &config) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write config file " + path.string());
    }
    out << format_model_config(config);
}

std::string_view family_name(TermFamily f) {
    switch (f) {
    case TermFamily::MagneticBulk:
        return "magnetic-bulk";
    case TermFamily::MagneticBoundary:
        return "magnetic-boundary";
    case TermFamily::ElectricPair:
        return "electric-pair";
    case TermFamily::ElectricBoundary:
        return "electric-boundary";
    case TermFamily::ElectricBulkSingle:
        return "electric-bulk-single";
    }
    return "unknown";
}

std::size_t HamiltonianSpec::count(TermFamily f) const {
    std::size_t n = 0;
    for (const auto &t : terms) {
        n += t.family == f ? 1 : 0;
    }
    return n;
}

std::uint64_t BasisState::index() const {
    std::uint64_t idx = 0;
    for (std::uint8_t b : bits) {
        idx = (idx << 1) | (b & 1U);
    }
    return idx;
}

std::string BasisState::to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (std::uint8_t b : bits) {
        s.push_back(b != 0 ? '1' : '0');
    }
    return s;
}

BasisState BasisState::from_index(std::uint64_t index, int n_qubits) {
    if (n_qubits < 64 && (index >> n_qubits) != 0) {
        throw std::out_of_range("basis index does not fit the register");
    }
    BasisState s;
    s.bits.resize(static_cast<std::size_t>(n_qubits));
    for (int q = 0; q < n_qubits; ++q) {
        s.bits[static_cast<std::size_t>(q)] =
            static_cast<std::uint8_t>((index >> (n_qubits - 1 - q)) & 1U);
    }
    return s;
}

BasisState BasisState::parse(std::string_view text) {
    static constexpr std::string_view kUp = "↑";
    static constexpr std::string_view kDown = "↓";
    BasisState s;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '0' || text[i] == '1') {
            s.bits.push_back(static_cast<std::uint8_t>(text[i] - '0'));
            ++i;
        } else if (text.substr(i, kUp.size()) == kUp) {
            s.bits.push_back(0);
            i += kUp.size();
        } else if (text.substr(i, kDown.size()) == kDown) {
            s.bits.push_back(1);
            i += kDown.size();
        } else {
            throw std::invalid_argument("invalid basis state character");
        }
    }
    return s;
}

HamiltonianSpec build_dual_hamiltonian(const ModelConfig &config) {
    config.validate();
    const int lx = config.lx;
    const int la = config.la;
    const int b1 = la + 1; // inner boundary link
    const int last = lx + 1;
    const double g = config.g;

    HamiltonianSpec h;
    h.n_qubits = config.n_qubits();
    auto add = [&](double c, PauliString p, TermFamily f) {
        if (c != 0.0) {
            h.terms.push_back({PauliTerm(c, p), f});
        }
    };

    // One magnetic term per plaquette. Plaquettes next to a boundary link
    // pick up the link operator.
    for (int p = 1; p <= la; ++p) {
        if (p == 1) {
            add(1.0, PauliString::x_string({0, 1}),
                TermFamily::MagneticBoundary);
        } else if (p == la) {
            add(1.0, PauliString::x_string({la, b1}),
                TermFamily::MagneticBoundary);
        } else {
            add(1.0, PauliString::single(p, Axis::X),
                TermFamily::MagneticBulk);
        }
    }
    for (int p = la + 2; p <= last; ++p) {
        if (p == la + 2) {
            add(1.0, PauliString::x_string({b1, p}),
                TermFamily::MagneticBoundary);
        } else if (p == last) {
            add(1.0, PauliString::x_string({0, p}),
                TermFamily::MagneticBoundary);
        } else {
            add(1.0, PauliString::single(p, Axis::X),
                TermFamily::MagneticBulk);
        }
    }

    // Electric terms: shared links between bulk plaquettes of one side,
    // the two boundary links, and the kappa-weighted vertical links.
    for (int p = 1; p < la; ++p) {
        add(g, PauliString::z_string({p, p + 1}), TermFamily::ElectricPair);
    }
    for (int p = la + 2; p < last; ++p) {
        add(g, PauliString::z_string({p, p + 1}), TermFamily::ElectricPair);
    }
    add(g, PauliString::single(0, Axis::Z), TermFamily::ElectricBoundary);
    add(g, PauliString::single(b1, Axis::Z), TermFamily::ElectricBoundary);
    for (int p = 1; p <= last; ++p) {
        if (p == b1) {
            continue;
        }
        add(config.kappa() * g, PauliString::single(p, Axis::Z),
            TermFamily::ElectricBulkSingle);
    }

    const auto gauss = gauss_operators(config);
    h.conserved = {gauss[0].string(), gauss[1].string()};
    return h;
}

std::array<PauliTerm, 2> gauss_operators(const ModelConfig &config) {
    config.validate();
    const int la = config.la;
    const int last = config.lx + 1;
    return {PauliTerm(1.0, PauliString::z_string({last, 0, 1})),
            PauliTerm(1.0, PauliString::z_string({la, la + 1, la + 2}))};
}

std::array<PauliTerm, 2> symmetry_operators(const ModelConfig &config) {
    config.validate();
    const int la = config.la;
    return {PauliTerm(1.0, PauliString::z_string({0, 1})),
            PauliTerm(1.0, PauliString::z_string({la, la + 1}))};
}

BasisState sample_initial_state(const ModelConfig &config,
                                std::uint64_t seed) {
    config.validate();
    const int n = config.n_qubits();
    const int la = config.la;
    const int last = config.lx + 1;
    CounterRng rng = CounterRng::stream(seed, {0x1A771CE});
    BasisState s;
    s.bits.assign(static_cast<std::size_t>(n), 0);
    for (int q = 1; q <= last; ++q) {
        if (q != la + 1) {
            s.bits[static_cast<std::size_t>(q)] =
                static_cast<std::uint8_t>(rng() >> 63);
        }
    }
    auto bit = [&](int q) { return s.bits[static_cast<std::size_t>(q)]; };
    s.bits[0] = bit(last) ^ bit(1);
    s.bits[static_cast<std::size_t>(la + 1)] = bit(la) ^ bit(la + 2);
    return s;
}

int z_string_value(const PauliString &z, const BasisState &state) {
    if (!z.is_diagonal()) {
        throw std::invalid_argument("z_string_value needs a diagonal string");
    }
    int parity = 0;
    for (const auto &[q, a] : z.factors()) {
        (void)a;
        if (q >= state.n_qubits()) {
            throw std::out_of_range("Z string outside the basis state");
        }
        parity ^= state.bits[static_cast<std::size_t>(q)];
    }
    return parity != 0 ? -1 : 1;
}

int sector_label(std::uint64_t row_index, const ModelConfig &config) {
    config.validate();
    const int m = config.subsystem_qubits();
    if (row_index >= (std::uint64_t{1} << m)) {
        throw std::out_of_range("subsystem row index out of range");
    }
    auto bit = [&](int q) {
        return static_cast<int>((row_index >> (m - 1 - q)) & 1U);
    };
    const bool s1_minus = (bit(0) ^ bit(1)) != 0;
    const bool s2_minus = (bit(config.la) ^ bit(config.la + 1)) != 0;
    return 1 + (s1_minus ? 2 : 0) + (s2_minus ? 1 : 0);
}

SectorPartition::SectorPartition(const ModelConfig &config)
    : m_(config.subsystem_qubits()) {
    const std::size_t dim = std::size_t{1} << m_;
    labels_.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const int s = sector_label(i, config);
        labels_[i] = s;
        blocks_[static_cast<std::size_t>(s - 1)].push_back(
            static_cast<int>(i));
    }
}

const std::vector<int> &SectorPartition::indices(int s) const {
    if (s < 1 || s > 4) {
        throw std::out_of_range("sector label must be 1..4");
    }
    return blocks_[static_cast<std::size_t>(s - 1)];
}

} // namespace z2chaos
