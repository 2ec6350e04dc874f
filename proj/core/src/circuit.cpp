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

#include "z2chaos/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace z2chaos {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string_view gate_name(GateKind k) {
    switch (k) {
    case GateKind::RX:
        return "RX";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::RXX:
        return "RXX";
    }
    return "?";
}

void Gate::validate(int n_qubits) const {
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("gate angle must be finite");
    }
    if (q0 < 0 || q0 >= n_qubits) {
        throw std::invalid_argument("gate qubit out of range");
    }
    if (two_qubit()) {
        if (q1 < 0 || q1 >= n_qubits || q1 == q0) {
            throw std::invalid_argument("RXX needs two distinct qubits");
        }
    } else if (q1 != -1) {
        throw std::invalid_argument("single-qubit gate with a second qubit");
    }
}

std::size_t Circuit::count(GateKind k) const {
    std::size_t n = 0;
    for (const Gate &g : gates_) {
        n += g.kind == k ? 1 : 0;
    }
    return n;
}

void Circuit::push_back(const Gate &g) {
    g.validate(n_);
    gates_.push_back(g);
}

void Circuit::append(const std::vector<Gate> &gs) {
    for (const Gate &g : gs) {
        push_back(g);
    }
}

void Circuit::append(const Circuit &c) {
    if (c.n_ > n_) {
        throw std::invalid_argument("appended circuit is wider");
    }
    append(c.gates_);
}

Circuit Circuit::inverse() const {
    Circuit inv(n_);
    inv.gates_.reserve(gates_.size());
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
        Gate g = *it;
        g.angle = -g.angle;
        inv.gates_.push_back(g);
    }
    return inv;
}

std::string Circuit::to_text() const {
    std::ostringstream out;
    out << "qubits " << n_ << "\n";
    out << std::setprecision(17);
    for (const Gate &g : gates_) {
        out << gate_name(g.kind) << ' ' << g.q0;
        if (g.two_qubit()) {
            out << ' ' << g.q1;
        }
        out << ' ' << g.angle << "\n";
    }
    return out.str();
}

Circuit Circuit::from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    Circuit c;
    bool have_header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') {
            continue;
        }
        auto fail = [&](const std::string &what) {
            throw std::invalid_argument("circuit line " +
                                        std::to_string(lineno) + ": " + what);
        };
        if (!have_header) {
            int n = 0;
            if (word != "qubits" || !(ls >> n) || n < 1) {
                fail("expected 'qubits n' header");
            }
            c = Circuit(n);
            have_header = true;
            continue;
        }
        Gate g;
        if (word == "RX") {
            g.kind = GateKind::RX;
        } else if (word == "RY") {
            g.kind = GateKind::RY;
        } else if (word == "RZ") {
            g.kind = GateKind::RZ;
        } else if (word == "RXX") {
            g.kind = GateKind::RXX;
        } else {
            fail("unknown gate '" + word + "'");
        }
        if (!(ls >> g.q0)) {
            fail("missing qubit");
        }
        if (g.two_qubit() && !(ls >> g.q1)) {
            fail("missing second qubit");
        }
        if (!(ls >> g.angle)) {
            fail("missing angle");
        }
        try {
            c.push_back(g);
        } catch (const std::invalid_argument &e) {
            fail(e.what());
        }
    }
    if (!have_header) {
        throw std::invalid_argument("circuit text has no header");
    }
    return c;
}

void write_circuit(const std::filesystem::path &path, const Circuit &c) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << c.to_text();
}

Circuit read_circuit(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return Circuit::from_text(buf.str());
}

std::vector<Gate> decompose_zz(int i, int j, double angle) {
    if (i == j) {
        throw std::invalid_argument("decompose_zz needs distinct qubits");
    }
    return {Gate::ry(i, -kPi / 2), Gate::ry(j, -kPi / 2),
            Gate::rxx(i, j, angle), Gate::ry(i, kPi / 2),
            Gate::ry(j, kPi / 2)};
}

MsAngle reduce_ms_angle(double angle) {
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("MS angle must be finite");
    }
    // exp(-i a XX) has period pi up to sign, so [-pi, pi] covers everything.
    double a = std::remainder(angle, 2.0 * kPi);
    const double a_abs = std::abs(a);
    if (a_abs <= kPi / 4) {
        return {a, false};
    }
    if (a_abs <= 3 * kPi / 4) {
        // exp(-i(a -/+ pi/2)XX) * (-i XX) up to sign; -XX = RX(pi) (x) RX(pi).
        return {a > 0 ? a - kPi / 2 : a + kPi / 2, true};
    }
    return {a > 0 ? a - kPi : a + kPi, false};
}

std::vector<Gate> ms_gate(int i, int j, double angle) {
    const MsAngle r = reduce_ms_angle(angle);
    std::vector<Gate> out;
    if (r.x_flips) {
        out.push_back(Gate::rx(i, kPi));
        out.push_back(Gate::rx(j, kPi));
    }
    out.push_back(Gate::rxx(i, j, r.angle));
    return out;
}

std::string_view trotter_family_name(TrotterFamily f) {
    switch (f) {
    case TrotterFamily::Z:
        return "Z";
    case TrotterFamily::ZZ:
        return "ZZ";
    case TrotterFamily::X:
        return "X";
    case TrotterFamily::XX:
        return "XX";
    }
    return "?";
}

TrotterFamily parse_trotter_family(std::string_view name) {
    if (name == "Z") {
        return TrotterFamily::Z;
    }
    if (name == "ZZ") {
        return TrotterFamily::ZZ;
    }
    if (name == "X") {
        return TrotterFamily::X;
    }
    if (name == "XX") {
        return TrotterFamily::XX;
    }
    throw std::invalid_argument("unknown Trotter family '" + std::string(name) +
                                "'");
}

namespace {

TrotterFamily classify(const PauliString &p) {
    const int w = p.weight();
    if (p.is_pure(Axis::Z) && (w == 1 || w == 2)) {
        return w == 1 ? TrotterFamily::Z : TrotterFamily::ZZ;
    }
    if (p.is_pure(Axis::X) && (w == 1 || w == 2)) {
        return w == 1 ? TrotterFamily::X : TrotterFamily::XX;
    }
    throw std::invalid_argument("term " + p.to_string(p.max_qubit() + 1) +
                                " has no native gate family");
}

} // namespace

Circuit build_trotter_circuit(const HamiltonianSpec &h, double t, int n_steps,
                              const TrotterOrder &order) {
    if (n_steps < 1) {
        throw std::invalid_argument("n_steps must be at least 1");
    }
    if (!std::isfinite(t)) {
        throw std::invalid_argument("evolution time must be finite");
    }
    std::vector<std::vector<Gate>> per_family(4);
    const double dt = t / n_steps;
    for (const auto &ht : h.terms) {
        const PauliString &p = ht.term.string();
        const double c = ht.term.coefficient();
        const TrotterFamily f = classify(p);
        auto &out = per_family[static_cast<std::size_t>(f)];
        const int q0 = p.min_qubit();
        const int q1 = p.max_qubit();
        switch (f) {
        case TrotterFamily::Z:
            out.push_back(Gate::rz(q0, 2.0 * c * dt));
            break;
        case TrotterFamily::X:
            out.push_back(Gate::rx(q0, 2.0 * c * dt));
            break;
        case TrotterFamily::XX:
            for (const Gate &g : ms_gate(q0, q1, c * dt)) {
                out.push_back(g);
            }
            break;
        case TrotterFamily::ZZ: {
            const MsAngle r = reduce_ms_angle(c * dt);
            std::vector<Gate> zz = decompose_zz(q0, q1, r.angle);
            if (r.x_flips) {
                // The compensating flips stay inside the basis change.
                zz.insert(zz.begin() + 2, Gate::rx(q1, kPi));
                zz.insert(zz.begin() + 2, Gate::rx(q0, kPi));
            }
            out.insert(out.end(), zz.begin(), zz.end());
            break;
        }
        }
    }
    std::vector<Gate> step;
    for (TrotterFamily f : order) {
        const auto &gs = per_family[static_cast<std::size_t>(f)];
        step.insert(step.end(), gs.begin(), gs.end());
    }
    Circuit c(h.n_qubits);
    for (int s = 0; s < n_steps; ++s) {
        c.append(step);
    }
    // Families missing from the order would silently drop terms.
    for (std::size_t f = 0; f < 4; ++f) {
        if (!per_family[f].empty() &&
            std::find(order.begin(), order.end(),
                      static_cast<TrotterFamily>(f)) == order.end()) {
            throw std::invalid_argument("Trotter order omits a used family");
        }
    }
    return c;
}

void apply_gate(StateVector &state, const Gate &g) {
    const int n = state.n_qubits();
    g.validate(n);
    const std::uint64_t dim = state.dim();
    cplx *a = state.amplitudes().data();
    const double c = std::cos(g.angle / 2);
    const double s = std::sin(g.angle / 2);
    const std::uint64_t b0 = qubit_bit(g.q0, n);
    switch (g.kind) {
    case GateKind::RX:
        for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & b0) == 0) {
                const cplx u = a[i];
                const cplx v = a[i | b0];
                a[i] = c * u - cplx(0, s) * v;
                a[i | b0] = c * v - cplx(0, s) * u;
            }
        }
        break;
    case GateKind::RY:
        for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & b0) == 0) {
                const cplx u = a[i];
                const cplx v = a[i | b0];
                a[i] = c * u - s * v;
                a[i | b0] = s * u + c * v;
            }
        }
        break;
    case GateKind::RZ: {
        const cplx lo(c, -s);
        const cplx hi(c, s);
        for (std::uint64_t i = 0; i < dim; ++i) {
            a[i] *= (i & b0) == 0 ? lo : hi;
        }
        break;
    }
    case GateKind::RXX: {
        const std::uint64_t b1 = qubit_bit(g.q1, n);
        const double cf = std::cos(g.angle);
        const cplx ms(0, -std::sin(g.angle));
        const std::uint64_t both = b0 | b1;
        for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & both) == 0) {
                const cplx a00 = a[i];
                const cplx a01 = a[i | b1];
                const cplx a10 = a[i | b0];
                const cplx a11 = a[i | both];
                a[i] = cf * a00 + ms * a11;
                a[i | both] = cf * a11 + ms * a00;
                a[i | b1] = cf * a01 + ms * a10;
                a[i | b0] = cf * a10 + ms * a01;
            }
        }
        break;
    }
    }
}

void apply_circuit_inplace(StateVector &state, const Circuit &c) {
    if (c.n_qubits() != state.n_qubits()) {
        throw std::invalid_argument("circuit and state sizes differ");
    }
    for (const Gate &g : c.gates()) {
        apply_gate(state, g);
    }
}

StateVector apply_circuit(const StateVector &state, const Circuit &c) {
    StateVector out = state;
    apply_circuit_inplace(out, c);
    return out;
}

Eigen::MatrixXcd gate_matrix(const Gate &g) {
    const double c = std::cos(g.angle / 2);
    const double s = std::sin(g.angle / 2);
    Eigen::MatrixXcd m;
    switch (g.kind) {
    case GateKind::RX:
        m.resize(2, 2);
        m << c, cplx(0, -s), cplx(0, -s), c;
        break;
    case GateKind::RY:
        m.resize(2, 2);
        m << c, -s, s, c;
        break;
    case GateKind::RZ:
        m.resize(2, 2);
        m << cplx(c, -s), 0, 0, cplx(c, s);
        break;
    case GateKind::RXX: {
        const double cf = std::cos(g.angle);
        const cplx ms(0, -std::sin(g.angle));
        m = Eigen::MatrixXcd::Zero(4, 4);
        for (int k = 0; k < 4; ++k) {
            m(k, k) = cf;
            m(k, 3 - k) = ms;
        }
        break;
    }
    }
    return m;
}

} // namespace z2chaos
