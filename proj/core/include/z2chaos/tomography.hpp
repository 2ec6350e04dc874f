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
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "z2chaos/lattice.hpp"
#include "z2chaos/measurement.hpp"
#include "z2chaos/optimizer.hpp"
#include "z2chaos/pauli.hpp"
#include "z2chaos/state_vector.hpp"

namespace z2chaos {

enum class Provenance {
    HamiltonianTerm,
    CommutatorDepth1,
    CommutatorDepth2,
    BoundarySymmetry,
};

std::string_view provenance_name(Provenance p);
Provenance parse_provenance(std::string_view name);

/// Hermitian operator on the subsystem: a real combination of Pauli strings.
struct AnsatzOperator {
    std::vector<PauliTerm> terms;
    Provenance provenance = Provenance::HamiltonianTerm;

    /// First string of the combination; identifies single-string operators.
    [[nodiscard]] const PauliString &leading() const {
        return terms.front().string();
    }
    [[nodiscard]] Eigen::MatrixXcd matrix(int n_qubits) const;
};

struct AnsatzOptions {
    int depth = 2;    // rounds of pairwise commutators
    int max_span = 3; // adjacent dual sites covered by one operator
};

class AnsatzOperatorSet {
  public:
    AnsatzOperatorSet() = default;
    AnsatzOperatorSet(ModelConfig config, std::vector<AnsatzOperator> ops);

    [[nodiscard]] const ModelConfig &config() const { return config_; }
    [[nodiscard]] int subsystem_qubits() const {
        return config_.subsystem_qubits();
    }
    [[nodiscard]] std::size_t size() const { return ops_.size(); }
    [[nodiscard]] const std::vector<AnsatzOperator> &operators() const {
        return ops_;
    }
    [[nodiscard]] const AnsatzOperator &operator[](std::size_t i) const {
        return ops_[i];
    }
    [[nodiscard]] std::size_t count(Provenance p) const;

  private:
    ModelConfig config_;
    std::vector<AnsatzOperator> ops_;
};

/// Seeds with the Hamiltonian terms supported inside A and the two boundary
/// symmetry strings, closes under commutators for opts.depth rounds (each
/// commutator of Pauli strings is made Hermitian by the factor i), keeps
/// operators commuting with the Gauss and symmetry operators, drops those
/// spanning more than opts.max_span sites, and removes duplicates modulo
/// Gauss operators and scalar factors.
AnsatzOperatorSet generate_ansatz(const ModelConfig &config,
                                  const AnsatzOptions &opts = {});

constexpr double kBetaBound = 50.0;

struct EHParameters {
    Eigen::VectorXd beta;
    double time_tag = 0.0;

    /// Throws std::invalid_argument when an entry leaves [-50, 50].
    void validate(double bound = kBetaBound) const;
};

/// Block-diagonal view of an ansatz in the four symmetry sectors.
/// Evaluates H(beta), rho(beta) and log Z without building 2^m x 2^m
/// exponentials.
class AnsatzModel {
  public:
    explicit AnsatzModel(const AnsatzOperatorSet &ops);

    [[nodiscard]] const SectorPartition &partition() const { return part_; }
    [[nodiscard]] std::size_t n_params() const { return n_params_; }
    [[nodiscard]] int subsystem_qubits() const { return m_; }

    /// H(beta) restricted to sector s (0-based), in partition index order.
    [[nodiscard]] Eigen::MatrixXcd block_hamiltonian(const Eigen::VectorXd &beta,
                                                     int s) const;
    [[nodiscard]] Eigen::MatrixXcd hamiltonian(const Eigen::VectorXd &beta) const;
    /// log Tr exp(-H(beta)), with the minimum eigenvalue shifted out.
    [[nodiscard]] double log_partition(const Eigen::VectorXd &beta) const;
    /// Normalized Gibbs blocks; stacked real coordinates (see pack()).
    [[nodiscard]] std::array<Eigen::MatrixXcd, 4>
    gibbs_blocks(const Eigen::VectorXd &beta) const;
    [[nodiscard]] DensityMatrix density(const Eigen::VectorXd &beta) const;

    /// Real coordinates of a block-diagonal Hermitian matrix: per sector the
    /// diagonal, then (Re, Im) of the strict upper triangle.
    [[nodiscard]] Eigen::VectorXd
    pack(const std::array<Eigen::MatrixXcd, 4> &blocks) const;
    [[nodiscard]] std::size_t packed_size() const { return packed_size_; }

    /// Tr[rho O_i] for every operator.
    [[nodiscard]] Eigen::VectorXd
    expectations(const DensityMatrix &rho) const;

  private:
    int m_ = 0;
    std::size_t n_params_ = 0;
    std::size_t packed_size_ = 0;
    SectorPartition part_;
    // op_blocks_[s][i] = operator i restricted to sector s.
    std::array<std::vector<Eigen::MatrixXcd>, 4> op_blocks_;
};

Eigen::MatrixXcd ansatz_hamiltonian(const EHParameters &beta,
                                    const AnsatzOperatorSet &ops);
DensityMatrix ansatz_density_matrix(const EHParameters &beta,
                                    const AnsatzOperatorSet &ops);

/// (1/N_U) sum_U sum_b (P_U(b) - p_b(rho(beta), U))^2 with P_U the raw
/// frequencies. Direct evaluation from the density matrix.
double tomography_cost(const EHParameters &beta,
                       const std::vector<MeasurementRecord> &records,
                       const AnsatzOperatorSet &ops);

/// The same cost as a quadratic form in the packed Gibbs state, with the
/// basis-dependent part precomputed once per record set.
class TomographyProblem {
  public:
    TomographyProblem(const AnsatzOperatorSet &ops,
                      const std::vector<MeasurementRecord> &records);

    [[nodiscard]] double cost(const Eigen::VectorXd &beta) const;
    [[nodiscard]] const AnsatzModel &model() const { return model_; }
    [[nodiscard]] std::size_t n_bases() const { return n_bases_; }

  private:
    AnsatzModel model_;
    std::size_t n_bases_ = 0;
    Eigen::MatrixXd gram_;
    Eigen::VectorXd linear_;
    double constant_ = 0.0;
};

/// Relative entropy D(rho || rho(beta)), with rho's entropy taken over its
/// support.
class KlProblem {
  public:
    KlProblem(const AnsatzOperatorSet &ops, const DensityMatrix &target);

    [[nodiscard]] double divergence(const Eigen::VectorXd &beta) const;
    [[nodiscard]] const AnsatzModel &model() const { return model_; }

  private:
    AnsatzModel model_;
    Eigen::VectorXd target_expectations_;
    double target_entropy_ = 0.0;
};

struct FitOptions {
    int max_iter = 2000;
    double g_tol = 1e-8;
    int n_restarts = 4;
    std::uint64_t seed = 0;
    double fd_step = 1e-6;
    double beta_bound = kBetaBound;
};

struct TomographyResult {
    EHParameters beta_star;
    DensityMatrix rho_fit;
    double cost_final = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string status;
    std::vector<double> start_costs; // final cost per start, NaN if aborted
    std::vector<double> trace;       // accepted costs of the best start
};

/// Multi-start minimization of tomography_cost: beta = 0 first, then
/// opts.n_restarts points uniform in [-1, 1]^n. Never throws on
/// non-convergence.
TomographyResult fit_eh_from_measurements(
    const std::vector<MeasurementRecord> &records, const AnsatzOperatorSet &ops,
    const FitOptions &opts = {});

/// Minimizes the relative entropy to an exactly known reduced state.
TomographyResult fit_eh_infinite(const DensityMatrix &rho_exact,
                                 const AnsatzOperatorSet &ops,
                                 const FitOptions &opts = {});

/// Text form: header lines, one "op index provenance string beta" row per
/// operator, closed by "end".
std::string format_fit(const TomographyResult &fit,
                       const AnsatzOperatorSet &ops);

struct FitFile {
    int subsystem_qubits = 0;
    double time_tag = 0.0;
    double cost = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string status;
    std::vector<std::string> operators;
    std::vector<Provenance> provenance;
    Eigen::VectorXd beta;
};

FitFile parse_fit(std::string_view text);
void write_fit(const std::filesystem::path &path, const TomographyResult &fit,
               const AnsatzOperatorSet &ops);
FitFile read_fit(const std::filesystem::path &path);

} // namespace z2chaos
