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

#include "z2chaos/state_vector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace z2chaos {

namespace {

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

inline double parity_sign(std::uint64_t z, std::uint64_t b) {
    return (std::popcount(z & b) & 1) != 0 ? -1.0 : 1.0;
}

void check_register(const PauliString &p, int n_qubits) {
    if (!p.is_identity() && p.max_qubit() >= n_qubits) {
        throw std::invalid_argument("Pauli string acts outside the register");
    }
}

} // namespace

StateVector::StateVector(int n_qubits)
    : n_(n_qubits),
      amps_(Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits)) {
    if (n_qubits < 1 || n_qubits > 30) {
        throw std::invalid_argument("state vector register size out of range");
    }
}

StateVector::StateVector(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits < 1 || n_qubits > 30 ||
        amps_.size() != (Eigen::Index{1} << n_qubits)) {
        throw std::invalid_argument("amplitude count does not match 2^n");
    }
}

double StateVector::fidelity(const StateVector &other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("fidelity of mismatched registers");
    }
    return std::norm(amps_.dot(other.amps_));
}

IndexMasks index_masks(const PauliString &p, int n_qubits) {
    check_register(p, n_qubits);
    IndexMasks m;
    for (const auto &[q, a] : p.factors()) {
        const std::uint64_t bit = qubit_bit(q, n_qubits);
        if (a != Axis::Z) {
            m.x |= bit;
        }
        if (a != Axis::X) {
            m.z |= bit;
        }
    }
    m.y_count = p.y_count();
    return m;
}

DensityMatrix::DensityMatrix(int n_qubits, Eigen::MatrixXcd entries)
    : n_(n_qubits), m_(std::move(entries)) {
    if (n_qubits < 0 || n_qubits > 16 ||
        m_.rows() != (Eigen::Index{1} << n_qubits) || m_.cols() != m_.rows()) {
        throw std::invalid_argument("density matrix shape does not match 2^m");
    }
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    return {n_qubits,
            Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d)};
}

DensityCheck DensityMatrix::check() const {
    DensityCheck c;
    c.hermiticity = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    c.trace_error = std::abs(m_.trace() - cplx(1.0, 0.0));
    const Eigen::MatrixXcd h = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h,
                                                       Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

void DensityMatrix::validate(double herm_tol, double trace_tol,
                             double eig_tol) const {
    const DensityCheck c = check();
    if (!c.ok(herm_tol, trace_tol, eig_tol)) {
        std::ostringstream msg;
        msg << "invalid density matrix: hermiticity " << c.hermiticity
            << ", trace error " << c.trace_error << ", min eigenvalue "
            << c.min_eigenvalue;
        throw std::domain_error(msg.str());
    }
}

StateVector prepare(const BasisState &basis_state) {
    StateVector s(basis_state.n_qubits());
    s[basis_state.index()] = 1.0;
    return s;
}

void apply_pauli(StateVector &state, const PauliString &p) {
    const IndexMasks m = index_masks(p, state.n_qubits());
    const cplx phase = kIPow[m.y_count % 4];
    Eigen::VectorXcd out(state.amplitudes().size());
    const std::uint64_t dim = state.dim();
    for (std::uint64_t b = 0; b < dim; ++b) {
        out[static_cast<Eigen::Index>(b ^ m.x)] =
            phase * parity_sign(m.z, b) * state[b];
    }
    state.amplitudes() = std::move(out);
}

double expectation(const StateVector &state, const PauliString &p) {
    const IndexMasks m = index_masks(p, state.n_qubits());
    cplx acc = 0.0;
    const std::uint64_t dim = state.dim();
    for (std::uint64_t b = 0; b < dim; ++b) {
        acc += std::conj(state[b ^ m.x]) * parity_sign(m.z, b) * state[b];
    }
    acc *= kIPow[m.y_count % 4];
    if (std::abs(acc.imag()) > 1e-8) {
        throw std::logic_error(
            "expectation value has a non-negligible imaginary part");
    }
    return acc.real();
}

double expectation(const StateVector &state, const PauliTerm &term) {
    return term.coefficient() * expectation(state, term.string());
}

double energy(const StateVector &state, const HamiltonianSpec &h) {
    double e = 0.0;
    for (const auto &t : h.terms) {
        e += expectation(state, t.term);
    }
    return e;
}

Eigen::MatrixXcd dense_matrix(const PauliString &p, int n_qubits) {
    if (n_qubits > 14) {
        throw std::invalid_argument("dense Pauli matrix too large");
    }
    const IndexMasks m = index_masks(p, n_qubits);
    const cplx phase = kIPow[m.y_count % 4];
    const std::uint64_t dim = std::uint64_t{1} << n_qubits;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(dim));
    for (std::uint64_t b = 0; b < dim; ++b) {
        out(static_cast<Eigen::Index>(b ^ m.x), static_cast<Eigen::Index>(b)) =
            phase * parity_sign(m.z, b);
    }
    return out;
}

Eigen::MatrixXcd dense_matrix(const HamiltonianSpec &h) {
    const Eigen::Index dim = Eigen::Index{1} << h.n_qubits;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &t : h.terms) {
        out += t.term.coefficient() * dense_matrix(t.term.string(), h.n_qubits);
    }
    return out;
}

DensityMatrix partial_trace(const StateVector &state, int keep_count) {
    const int n = state.n_qubits();
    if (keep_count < 0 || keep_count > n) {
        throw std::invalid_argument("partial_trace keep_count out of range");
    }
    const Eigen::Index rest = Eigen::Index{1} << (n - keep_count);
    const Eigen::Index kept = Eigen::Index{1} << keep_count;
    // Column i of b holds psi[i * 2^c + k] for k = 0..2^c-1.
    const Eigen::Map<const Eigen::MatrixXcd> b(state.amplitudes().data(), rest,
                                               kept);
    Eigen::MatrixXcd rho = b.transpose() * b.conjugate();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return {keep_count, std::move(rho)};
}

ExactPropagator::ExactPropagator(const HamiltonianSpec &h) : n_(h.n_qubits) {
    if (n_ < 1 || n_ > 20) {
        throw std::invalid_argument("exact propagator register out of range");
    }
    for (const auto &c : h.conserved) {
        if (!c.is_diagonal()) {
            throw std::invalid_argument("conserved charge must be a Z string");
        }
        for (const auto &t : h.terms) {
            if (!t.term.string().commutes_with(c)) {
                throw std::invalid_argument(
                    "Hamiltonian term does not commute with a listed charge");
            }
        }
    }
    bool real = true;
    std::vector<IndexMasks> masks;
    std::vector<double> coeffs;
    for (const auto &t : h.terms) {
        masks.push_back(index_masks(t.term.string(), n_));
        coeffs.push_back(t.term.coefficient());
        real = real && (masks.back().y_count % 2 == 0);
    }
    std::vector<std::uint64_t> charge_masks;
    for (const auto &c : h.conserved) {
        charge_masks.push_back(index_masks(c, n_).z);
    }

    const std::uint64_t dim = std::uint64_t{1} << n_;
    std::map<std::uint64_t, std::size_t> block_of_key;
    std::vector<std::size_t> position(dim);
    for (std::uint64_t b = 0; b < dim; ++b) {
        std::uint64_t key = 0;
        for (std::size_t k = 0; k < charge_masks.size(); ++k) {
            key |= static_cast<std::uint64_t>(std::popcount(charge_masks[k] & b) & 1)
                   << k;
        }
        auto [it, inserted] = block_of_key.emplace(key, blocks_.size());
        if (inserted) {
            blocks_.emplace_back();
        }
        Block &blk = blocks_[it->second];
        position[b] = blk.indices.size();
        blk.indices.push_back(b);
    }

    for (Block &blk : blocks_) {
        const auto bd = static_cast<Eigen::Index>(blk.indices.size());
        Eigen::MatrixXcd hb = Eigen::MatrixXcd::Zero(bd, bd);
        for (Eigen::Index col = 0; col < bd; ++col) {
            const std::uint64_t b = blk.indices[static_cast<std::size_t>(col)];
            for (std::size_t k = 0; k < masks.size(); ++k) {
                const std::uint64_t j = b ^ masks[k].x;
                hb(static_cast<Eigen::Index>(position[j]), col) +=
                    coeffs[k] * kIPow[masks[k].y_count % 4] *
                    parity_sign(masks[k].z, b);
            }
        }
        if (real) {
            const Eigen::MatrixXd hr = hb.real();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hr);
            if (es.info() != Eigen::Success) {
                throw std::runtime_error(
                    "eigendecomposition of the Hamiltonian did not converge");
            }
            blk.energies = es.eigenvalues();
            blk.vectors = es.eigenvectors().cast<cplx>();
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hb);
            if (es.info() != Eigen::Success) {
                throw std::runtime_error(
                    "eigendecomposition of the Hamiltonian did not converge");
            }
            blk.energies = es.eigenvalues();
            blk.vectors = es.eigenvectors();
        }
    }
}

StateVector ExactPropagator::evolve(const StateVector &state, double t) const {
    if (state.n_qubits() != n_) {
        throw std::invalid_argument("state and Hamiltonian sizes differ");
    }
    if (!std::isfinite(t)) {
        throw std::invalid_argument("evolution time must be finite");
    }
    StateVector out(n_);
    for (const Block &blk : blocks_) {
        const auto bd = static_cast<Eigen::Index>(blk.indices.size());
        Eigen::VectorXcd local(bd);
        for (Eigen::Index i = 0; i < bd; ++i) {
            local[i] = state[blk.indices[static_cast<std::size_t>(i)]];
        }
        if (local.cwiseAbs2().sum() == 0.0) {
            continue;
        }
        Eigen::VectorXcd c = blk.vectors.adjoint() * local;
        for (Eigen::Index k = 0; k < bd; ++k) {
            c[k] *= std::exp(cplx(0.0, -blk.energies[k] * t));
        }
        local.noalias() = blk.vectors * c;
        for (Eigen::Index i = 0; i < bd; ++i) {
            out[blk.indices[static_cast<std::size_t>(i)]] = local[i];
        }
    }
    return out;
}

std::vector<double> ExactPropagator::eigenvalues() const {
    std::vector<double> e;
    e.reserve(dim());
    for (const Block &blk : blocks_) {
        e.insert(e.end(), blk.energies.data(),
                 blk.energies.data() + blk.energies.size());
    }
    std::sort(e.begin(), e.end());
    return e;
}

std::pair<double, StateVector> ExactPropagator::eigenpair(std::size_t k) const {
    for (const Block &blk : blocks_) {
        const std::size_t bd = blk.indices.size();
        if (k < bd) {
            StateVector v(n_);
            for (std::size_t i = 0; i < bd; ++i) {
                v[blk.indices[i]] = blk.vectors(static_cast<Eigen::Index>(i),
                                                static_cast<Eigen::Index>(k));
            }
            return {blk.energies[static_cast<Eigen::Index>(k)], v};
        }
        k -= bd;
    }
    throw std::out_of_range("eigenpair index out of range");
}

namespace {

std::string spec_key(const HamiltonianSpec &h) {
    std::string key;
    auto put = [&key](const void *p, std::size_t n) {
        key.append(static_cast<const char *>(p), n);
    };
    put(&h.n_qubits, sizeof h.n_qubits);
    for (const auto &t : h.terms) {
        const double c = t.term.coefficient();
        const std::uint64_t x = t.term.string().x_mask();
        const std::uint64_t z = t.term.string().z_mask();
        put(&c, sizeof c);
        put(&x, sizeof x);
        put(&z, sizeof z);
    }
    key.push_back('|');
    for (const auto &c : h.conserved) {
        const std::uint64_t z = c.z_mask();
        put(&z, sizeof z);
    }
    return key;
}

} // namespace

std::shared_ptr<const ExactPropagator>
cached_propagator(const HamiltonianSpec &h) {
    static std::mutex mu;
    static std::vector<std::pair<std::string, std::shared_ptr<const ExactPropagator>>>
        cache;
    constexpr std::size_t kCapacity = 4;
    const std::string key = spec_key(h);
    {
        std::lock_guard<std::mutex> lock(mu);
        for (const auto &[k, p] : cache) {
            if (k == key) {
                return p;
            }
        }
    }
    auto prop = std::make_shared<const ExactPropagator>(h);
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() >= kCapacity) {
        cache.erase(cache.begin());
    }
    cache.emplace_back(key, prop);
    return prop;
}

StateVector exact_evolve(const StateVector &state, const HamiltonianSpec &h,
                         double t) {
    return cached_propagator(h)->evolve(state, t);
}

} // namespace z2chaos
