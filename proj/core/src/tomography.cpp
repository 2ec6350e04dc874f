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

#include "z2chaos/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "z2chaos/rng.hpp"

namespace z2chaos {

std::string_view provenance_name(Provenance p) {
    switch (p) {
    case Provenance::HamiltonianTerm:
        return "hamiltonian-term";
    case Provenance::CommutatorDepth1:
        return "commutator-depth-1";
    case Provenance::CommutatorDepth2:
        return "commutator-depth-2";
    case Provenance::BoundarySymmetry:
        return "boundary-symmetry";
    }
    return "unknown";
}

Provenance parse_provenance(std::string_view name) {
    for (Provenance p :
         {Provenance::HamiltonianTerm, Provenance::CommutatorDepth1,
          Provenance::CommutatorDepth2, Provenance::BoundarySymmetry}) {
        if (provenance_name(p) == name) {
            return p;
        }
    }
    throw std::invalid_argument("unknown provenance '" + std::string(name) +
                                "'");
}

Eigen::MatrixXcd AnsatzOperator::matrix(int n_qubits) const {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (const auto &t : terms) {
        m += t.coefficient() * dense_matrix(t.string(), n_qubits);
    }
    return m;
}

AnsatzOperatorSet::AnsatzOperatorSet(ModelConfig config,
                                     std::vector<AnsatzOperator> ops)
    : config_(config), ops_(std::move(ops)) {
    config_.validate();
    const int m = config_.subsystem_qubits();
    for (const auto &op : ops_) {
        if (op.terms.empty()) {
            throw std::invalid_argument("ansatz operator without terms");
        }
        for (const auto &t : op.terms) {
            t.check_qubits(m);
        }
    }
}

std::size_t AnsatzOperatorSet::count(Provenance p) const {
    return static_cast<std::size_t>(
        std::count_if(ops_.begin(), ops_.end(),
                      [p](const AnsatzOperator &o) { return o.provenance == p; }));
}

namespace {

/// Smallest representative of p modulo the Gauss operators, preferring
/// strings supported inside the first m qubits.
PauliString gauss_canonical(const PauliString &p,
                            const std::array<PauliTerm, 2> &gauss, int m,
                            int n) {
    const PauliString g1 = gauss[0].string();
    const PauliString g2 = gauss[1].string();
    const PauliString candidates[4] = {
        p, multiply(p, g1).string, multiply(p, g2).string,
        multiply(multiply(p, g1).string, g2).string};
    const PauliString *best = nullptr;
    std::string best_key;
    for (const auto &c : candidates) {
        const bool inside = c.is_identity() || c.max_qubit() < m;
        const std::string key = std::string(inside ? "0" : "1") + c.to_string(n);
        if (best == nullptr || key < best_key) {
            best = &c;
            best_key = key;
        }
    }
    return *best;
}

} // namespace

AnsatzOperatorSet generate_ansatz(const ModelConfig &config,
                                  const AnsatzOptions &opts) {
    config.validate();
    if (opts.depth < 0 || opts.max_span < 1) {
        throw std::invalid_argument("invalid ansatz options");
    }
    const int m = config.subsystem_qubits();
    const int n = config.n_qubits();
    const auto gauss = gauss_operators(config);
    const auto sym = symmetry_operators(config);

    struct Entry {
        PauliString string;
        Provenance provenance;
    };
    std::vector<Entry> pool;
    std::set<PauliString> seen;
    auto add = [&](const PauliString &p, Provenance prov) {
        if (p.is_identity() || !seen.insert(p).second) {
            return false;
        }
        pool.push_back({p, prov});
        return true;
    };

    const HamiltonianSpec h = build_dual_hamiltonian(config);
    for (const auto &t : h.terms) {
        const PauliString &p = t.term.string();
        if (p.max_qubit() < m) {
            add(p, Provenance::HamiltonianTerm);
        }
    }
    for (const auto &s : sym) {
        add(s.string(), Provenance::BoundarySymmetry);
    }

    // i[P, Q] = 2i PQ is Hermitian whenever P and Q anticommute, and it is a
    // real multiple of a single Pauli string, so the string alone is kept.
    for (int d = 1; d <= opts.depth; ++d) {
        const Provenance prov =
            d == 1 ? Provenance::CommutatorDepth1 : Provenance::CommutatorDepth2;
        const std::size_t current = pool.size();
        std::vector<PauliString> fresh;
        for (std::size_t i = 0; i < current; ++i) {
            for (std::size_t j = i + 1; j < current; ++j) {
                const PauliString &a = pool[i].string;
                const PauliString &b = pool[j].string;
                if (a.commutes_with(b)) {
                    continue;
                }
                const PauliProduct ab = multiply(a, b);
                if (ab.phase % 2 == 0) {
                    throw std::logic_error(
                        "anticommuting product with a real phase");
                }
                fresh.push_back(ab.string);
            }
        }
        std::sort(fresh.begin(), fresh.end());
        for (const auto &p : fresh) {
            add(p, d <= 2 ? prov : Provenance::CommutatorDepth2);
        }
    }

    auto keep = [&](const PauliString &p) {
        if (p.span() > opts.max_span || p.max_qubit() >= m) {
            return false;
        }
        for (const auto &g : gauss) {
            if (!p.commutes_with(g.string())) {
                return false;
            }
        }
        for (const auto &s : sym) {
            if (!p.commutes_with(s.string())) {
                return false;
            }
        }
        return true;
    };

    std::vector<Entry> kept;
    std::set<PauliString> canon_seen;
    for (const auto &e : pool) {
        if (!keep(e.string)) {
            continue;
        }
        if (!canon_seen.insert(gauss_canonical(e.string, gauss, m, n)).second) {
            continue;
        }
        kept.push_back(e);
    }
    // Seeds first in construction order, then commutators by depth,
    // span and position.
    std::stable_sort(kept.begin(), kept.end(), [](const Entry &a, const Entry &b) {
        auto rank = [](Provenance p) {
            switch (p) {
            case Provenance::HamiltonianTerm:
                return 0;
            case Provenance::BoundarySymmetry:
                return 1;
            case Provenance::CommutatorDepth1:
                return 2;
            case Provenance::CommutatorDepth2:
                return 3;
            }
            return 4;
        };
        const int ra = rank(a.provenance);
        const int rb = rank(b.provenance);
        if (ra != rb) {
            return ra < rb;
        }
        if (ra <= 1) {
            return false;
        }
        if (a.string.span() != b.string.span()) {
            return a.string.span() < b.string.span();
        }
        if (a.string.min_qubit() != b.string.min_qubit()) {
            return a.string.min_qubit() < b.string.min_qubit();
        }
        return a.string < b.string;
    });

    std::vector<AnsatzOperator> ops;
    ops.reserve(kept.size());
    for (const auto &e : kept) {
        ops.push_back({{PauliTerm(1.0, e.string)}, e.provenance});
    }
    return {config, std::move(ops)};
}

void EHParameters::validate(double bound) const {
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
        if (!std::isfinite(beta[i]) || std::abs(beta[i]) > bound) {
            throw std::invalid_argument("beta entry outside the allowed box");
        }
    }
}

AnsatzModel::AnsatzModel(const AnsatzOperatorSet &ops)
    : m_(ops.subsystem_qubits()), n_params_(ops.size()),
      part_(ops.config()) {
    for (int s = 0; s < 4; ++s) {
        const auto k = part_.indices(s + 1).size();
        packed_size_ += k * k;
    }
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const Eigen::MatrixXcd full = ops[i].matrix(m_);
        if ((full - full.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
            throw std::invalid_argument("ansatz operator is not Hermitian");
        }
        double covered = 0.0;
        for (int s = 0; s < 4; ++s) {
            const auto &idx = part_.indices(s + 1);
            const auto k = static_cast<Eigen::Index>(idx.size());
            Eigen::MatrixXcd blk(k, k);
            for (Eigen::Index r = 0; r < k; ++r) {
                for (Eigen::Index c = 0; c < k; ++c) {
                    blk(r, c) = full(idx[static_cast<std::size_t>(r)],
                                     idx[static_cast<std::size_t>(c)]);
                }
            }
            covered += blk.squaredNorm();
            op_blocks_[static_cast<std::size_t>(s)].push_back(std::move(blk));
        }
        if (std::abs(full.squaredNorm() - covered) > 1e-12) {
            throw std::invalid_argument(
                "ansatz operator mixes symmetry sectors");
        }
    }
}

Eigen::MatrixXcd AnsatzModel::block_hamiltonian(const Eigen::VectorXd &beta,
                                                int s) const {
    if (static_cast<std::size_t>(beta.size()) != n_params_) {
        throw std::invalid_argument("beta length does not match the ansatz");
    }
    const auto &blocks = op_blocks_[static_cast<std::size_t>(s)];
    const auto k = static_cast<Eigen::Index>(part_.indices(s + 1).size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(k, k);
    for (std::size_t i = 0; i < n_params_; ++i) {
        const double b = beta[static_cast<Eigen::Index>(i)];
        if (b != 0.0) {
            h += b * blocks[i];
        }
    }
    return h;
}

Eigen::MatrixXcd AnsatzModel::hamiltonian(const Eigen::VectorXd &beta) const {
    const Eigen::Index d = Eigen::Index{1} << m_;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
    for (int s = 0; s < 4; ++s) {
        const auto &idx = part_.indices(s + 1);
        const Eigen::MatrixXcd hb = block_hamiltonian(beta, s);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t c = 0; c < idx.size(); ++c) {
                h(idx[r], idx[c]) = hb(static_cast<Eigen::Index>(r),
                                       static_cast<Eigen::Index>(c));
            }
        }
    }
    return h;
}

double AnsatzModel::log_partition(const Eigen::VectorXd &beta) const {
    std::array<Eigen::VectorXd, 4> e;
    double e0 = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 4; ++s) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            block_hamiltonian(beta, s), Eigen::EigenvaluesOnly);
        e[static_cast<std::size_t>(s)] = es.eigenvalues();
        e0 = std::min(e0, es.eigenvalues().minCoeff());
    }
    double z = 0.0;
    for (const auto &v : e) {
        z += (-(v.array() - e0)).exp().sum();
    }
    return -e0 + std::log(z);
}

std::array<Eigen::MatrixXcd, 4>
AnsatzModel::gibbs_blocks(const Eigen::VectorXd &beta) const {
    std::array<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>, 4> es;
    double e0 = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 4; ++s) {
        es[static_cast<std::size_t>(s)].compute(block_hamiltonian(beta, s));
        e0 = std::min(e0, es[static_cast<std::size_t>(s)].eigenvalues().minCoeff());
    }
    // Shifting by the smallest eigenvalue keeps exp() in range for any beta.
    std::array<Eigen::VectorXd, 4> w;
    double z = 0.0;
    for (std::size_t s = 0; s < 4; ++s) {
        w[s] = (-(es[s].eigenvalues().array() - e0)).exp();
        z += w[s].sum();
    }
    std::array<Eigen::MatrixXcd, 4> out;
    for (std::size_t s = 0; s < 4; ++s) {
        const Eigen::MatrixXcd &v = es[s].eigenvectors();
        out[s] = v * (w[s] / z).asDiagonal() * v.adjoint();
    }
    return out;
}

DensityMatrix AnsatzModel::density(const Eigen::VectorXd &beta) const {
    const auto blocks = gibbs_blocks(beta);
    const Eigen::Index d = Eigen::Index{1} << m_;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (int s = 0; s < 4; ++s) {
        const auto &idx = part_.indices(s + 1);
        const auto &b = blocks[static_cast<std::size_t>(s)];
        for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t c = 0; c < idx.size(); ++c) {
                rho(idx[r], idx[c]) = b(static_cast<Eigen::Index>(r),
                                        static_cast<Eigen::Index>(c));
            }
        }
    }
    return {m_, std::move(rho)};
}

Eigen::VectorXd
AnsatzModel::pack(const std::array<Eigen::MatrixXcd, 4> &blocks) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(packed_size_));
    Eigen::Index pos = 0;
    for (const auto &b : blocks) {
        const Eigen::Index k = b.rows();
        for (Eigen::Index i = 0; i < k; ++i) {
            x[pos++] = b(i, i).real();
        }
        for (Eigen::Index i = 0; i < k; ++i) {
            for (Eigen::Index j = i + 1; j < k; ++j) {
                x[pos++] = b(i, j).real();
                x[pos++] = b(i, j).imag();
            }
        }
    }
    return x;
}

Eigen::VectorXd AnsatzModel::expectations(const DensityMatrix &rho) const {
    if (rho.n_qubits() != m_) {
        throw std::invalid_argument("density matrix does not match the ansatz");
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_params_));
    const Eigen::MatrixXcd &r = rho.matrix();
    for (int s = 0; s < 4; ++s) {
        const auto &idx = part_.indices(s + 1);
        const auto k = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXcd rb(k, k);
        for (Eigen::Index a = 0; a < k; ++a) {
            for (Eigen::Index b = 0; b < k; ++b) {
                rb(a, b) = r(idx[static_cast<std::size_t>(a)],
                             idx[static_cast<std::size_t>(b)]);
            }
        }
        const auto &ob = op_blocks_[static_cast<std::size_t>(s)];
        for (std::size_t i = 0; i < n_params_; ++i) {
            // Tr[rb O] = sum_ab rb(a,b) O(b,a)
            out[static_cast<Eigen::Index>(i)] +=
                (rb.cwiseProduct(ob[i].transpose())).sum().real();
        }
    }
    return out;
}

Eigen::MatrixXcd ansatz_hamiltonian(const EHParameters &beta,
                                    const AnsatzOperatorSet &ops) {
    beta.validate();
    if (static_cast<std::size_t>(beta.beta.size()) != ops.size()) {
        throw std::invalid_argument("beta length does not match the ansatz");
    }
    const int m = ops.subsystem_qubits();
    const Eigen::Index d = Eigen::Index{1} << m;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const double b = beta.beta[static_cast<Eigen::Index>(i)];
        if (b != 0.0) {
            h += b * ops[i].matrix(m);
        }
    }
    return h;
}

DensityMatrix ansatz_density_matrix(const EHParameters &beta,
                                    const AnsatzOperatorSet &ops) {
    const Eigen::MatrixXcd h = ansatz_hamiltonian(beta, ops);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition of H(beta) failed");
    }
    const Eigen::VectorXd &e = es.eigenvalues();
    const Eigen::VectorXd w = (-(e.array() - e.minCoeff())).exp();
    const Eigen::MatrixXcd &v = es.eigenvectors();
    Eigen::MatrixXcd rho = v * (w / w.sum()).asDiagonal() * v.adjoint();
    return {ops.subsystem_qubits(), std::move(rho)};
}

namespace {

void check_records(const std::vector<MeasurementRecord> &records, int m) {
    if (records.empty()) {
        throw std::invalid_argument("at least one measurement record needed");
    }
    for (const auto &r : records) {
        r.validate();
        if (r.subsystem_size != m) {
            throw std::invalid_argument(
                "record subsystem size does not match the ansatz");
        }
    }
}

} // namespace

double tomography_cost(const EHParameters &beta,
                       const std::vector<MeasurementRecord> &records,
                       const AnsatzOperatorSet &ops) {
    check_records(records, ops.subsystem_qubits());
    const DensityMatrix rho = ansatz_density_matrix(beta, ops);
    double total = 0.0;
    for (const auto &r : records) {
        const std::vector<double> p = exact_basis_probabilities(rho, r.basis);
        const std::vector<double> f = r.frequencies();
        for (std::size_t b = 0; b < p.size(); ++b) {
            const double d = f[b] - p[b];
            total += d * d;
        }
    }
    return total / static_cast<double>(records.size());
}

TomographyProblem::TomographyProblem(
    const AnsatzOperatorSet &ops, const std::vector<MeasurementRecord> &records)
    : model_(ops), n_bases_(records.size()) {
    const int m = ops.subsystem_qubits();
    check_records(records, m);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << m);
    const auto np = static_cast<Eigen::Index>(model_.packed_size());
    gram_ = Eigen::MatrixXd::Zero(np, np);
    linear_ = Eigen::VectorXd::Zero(np);
    Eigen::MatrixXd a(dim, np);
    for (const auto &r : records) {
        const Eigen::MatrixXcd u = basis_unitary(r.basis, m);
        Eigen::Index col = 0;
        for (int s = 0; s < 4; ++s) {
            const auto &idx = model_.partition().indices(s + 1);
            const std::size_t k = idx.size();
            for (std::size_t i = 0; i < k; ++i) {
                a.col(col++) = u.col(idx[i]).cwiseAbs2();
            }
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = i + 1; j < k; ++j) {
                    const Eigen::VectorXcd w =
                        u.col(idx[i]).cwiseProduct(u.col(idx[j]).conjugate());
                    a.col(col++) = 2.0 * w.real();
                    a.col(col++) = -2.0 * w.imag();
                }
            }
        }
        const std::vector<double> f = r.frequencies();
        const Eigen::Map<const Eigen::VectorXd> fv(f.data(), dim);
        gram_.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
        linear_.noalias() += a.transpose() * fv;
        constant_ += fv.squaredNorm();
    }
    gram_ = gram_.selfadjointView<Eigen::Lower>();
}

double TomographyProblem::cost(const Eigen::VectorXd &beta) const {
    const Eigen::VectorXd x = model_.pack(model_.gibbs_blocks(beta));
    const double q = x.dot(gram_.selfadjointView<Eigen::Lower>() * x) -
                     2.0 * linear_.dot(x) + constant_;
    return std::max(0.0, q) / static_cast<double>(n_bases_);
}

KlProblem::KlProblem(const AnsatzOperatorSet &ops, const DensityMatrix &target)
    : model_(ops) {
    target.validate(1e-10, 1e-8, 1e-8);
    target_expectations_ = model_.expectations(target);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (target.matrix() + target.matrix().adjoint()),
        Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()[i];
        if (p > 0.0) {
            s -= p * std::log(p);
        }
    }
    target_entropy_ = s;
}

double KlProblem::divergence(const Eigen::VectorXd &beta) const {
    return -target_entropy_ + beta.dot(target_expectations_) +
           model_.log_partition(beta);
}

namespace {

TomographyResult multistart(const Objective &f, const AnsatzModel &model,
                            const FitOptions &opts) {
    const auto n = static_cast<Eigen::Index>(model.n_params());
    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -opts.beta_bound);
    const Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, opts.beta_bound);
    LbfgsbOptions lopts;
    lopts.max_iter = opts.max_iter;
    lopts.g_tol = opts.g_tol;
    lopts.fd_step = opts.fd_step;

    TomographyResult best;
    best.cost_final = std::numeric_limits<double>::infinity();
    bool have = false;
    OptimizerResult best_run;
    for (int start = 0; start <= opts.n_restarts; ++start) {
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
        if (start > 0) {
            CounterRng rng = CounterRng::stream(
                opts.seed, {0x7F17, static_cast<std::uint64_t>(start)});
            for (Eigen::Index i = 0; i < n; ++i) {
                x0[i] = rng.uniform(-1.0, 1.0);
            }
        }
        OptimizerResult run = minimize_box(f, x0, lo, hi, lopts);
        if (run.status == OptimizerStatus::NotFinite) {
            best.start_costs.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        best.start_costs.push_back(run.f);
        if (!have || run.f < best_run.f) {
            best_run = std::move(run);
            have = true;
        }
    }
    if (!have) {
        best.converged = false;
        best.status = optimizer_status_name(OptimizerStatus::NotFinite);
        best.beta_star.beta = Eigen::VectorXd::Zero(n);
        best.rho_fit = model.density(best.beta_star.beta);
        best.cost_final = std::numeric_limits<double>::quiet_NaN();
        return best;
    }
    best.beta_star.beta = best_run.x;
    best.rho_fit = model.density(best_run.x);
    best.cost_final = best_run.f;
    best.converged = best_run.converged();
    best.iterations = best_run.iterations;
    best.status = optimizer_status_name(best_run.status);
    best.trace = std::move(best_run.trace);
    return best;
}

} // namespace

TomographyResult
fit_eh_from_measurements(const std::vector<MeasurementRecord> &records,
                         const AnsatzOperatorSet &ops, const FitOptions &opts) {
    const TomographyProblem problem(ops, records);
    return multistart(
        [&problem](const Eigen::VectorXd &b) { return problem.cost(b); },
        problem.model(), opts);
}

TomographyResult fit_eh_infinite(const DensityMatrix &rho_exact,
                                 const AnsatzOperatorSet &ops,
                                 const FitOptions &opts) {
    const KlProblem problem(ops, rho_exact);
    return multistart(
        [&problem](const Eigen::VectorXd &b) { return problem.divergence(b); },
        problem.model(), opts);
}

std::string format_fit(const TomographyResult &fit,
                       const AnsatzOperatorSet &ops) {
    if (static_cast<std::size_t>(fit.beta_star.beta.size()) != ops.size()) {
        throw std::invalid_argument("fit and ansatz sizes differ");
    }
    const int m = ops.subsystem_qubits();
    std::ostringstream out;
    out << std::setprecision(17);
    out << "subsystem_qubits " << m << "\n";
    out << "n_operators " << ops.size() << "\n";
    out << "time_tag " << fit.beta_star.time_tag << "\n";
    out << "cost " << fit.cost_final << "\n";
    out << "converged " << (fit.converged ? 1 : 0) << "\n";
    out << "iterations " << fit.iterations << "\n";
    out << "status " << (fit.status.empty() ? "none" : fit.status) << "\n";
    for (std::size_t i = 0; i < ops.size(); ++i) {
        out << "op " << i << ' ' << provenance_name(ops[i].provenance) << ' ';
        const auto &terms = ops[i].terms;
        for (std::size_t k = 0; k < terms.size(); ++k) {
            if (k > 0) {
                out << '+';
            }
            if (terms[k].coefficient() != 1.0) {
                out << terms[k].coefficient() << '*';
            }
            out << terms[k].string().to_string(m);
        }
        out << ' ' << fit.beta_star.beta[static_cast<Eigen::Index>(i)] << "\n";
    }
    out << "end\n";
    return out.str();
}

FitFile parse_fit(std::string_view text) {
    std::istringstream in{std::string(text)};
    FitFile f;
    std::string line;
    int lineno = 0;
    std::size_t n_ops = 0;
    std::vector<double> beta;
    bool ended = false;
    auto fail = [&](const std::string &what) {
        throw std::invalid_argument("fit line " + std::to_string(lineno) + ": " +
                                    what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') {
            continue;
        }
        if (key == "end") {
            ended = true;
            break;
        }
        if (key == "subsystem_qubits") {
            ls >> f.subsystem_qubits;
        } else if (key == "n_operators") {
            ls >> n_ops;
        } else if (key == "time_tag") {
            ls >> f.time_tag;
        } else if (key == "cost") {
            std::string v;
            ls >> v;
            f.cost = std::stod(v);
        } else if (key == "converged") {
            int c = 0;
            ls >> c;
            f.converged = c != 0;
        } else if (key == "iterations") {
            ls >> f.iterations;
        } else if (key == "status") {
            ls >> f.status;
        } else if (key == "op") {
            std::size_t idx = 0;
            std::string prov;
            std::string op;
            double b = 0.0;
            if (!(ls >> idx >> prov >> op >> b) || idx != f.operators.size()) {
                fail("malformed operator row");
            }
            f.provenance.push_back(parse_provenance(prov));
            f.operators.push_back(op);
            beta.push_back(b);
        } else {
            fail("unknown key '" + key + "'");
        }
        if (ls.fail()) {
            fail("malformed value");
        }
    }
    if (!ended || f.operators.size() != n_ops) {
        throw std::invalid_argument("fit text is truncated");
    }
    f.beta = Eigen::Map<Eigen::VectorXd>(beta.data(),
                                         static_cast<Eigen::Index>(beta.size()));
    return f;
}

void write_fit(const std::filesystem::path &path, const TomographyResult &fit,
               const AnsatzOperatorSet &ops) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << format_fit(fit, ops);
}

FitFile read_fit(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_fit(buf.str());
}

} // namespace z2chaos
