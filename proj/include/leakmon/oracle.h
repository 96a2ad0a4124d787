// Copyright 2026 The leakmon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef _LEAKMON_ORACLE_H
#define _LEAKMON_ORACLE_H

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "leakmon/hmm.h"

namespace leakmon {

using cplx = std::complex<double>;

/// Dense state of a register of qubits and qutrits. Site 0 is the most significant digit.
class MixedRegister {
   public:
    static constexpr size_t MAX_DIMENSION = 4096;

    explicit MixedRegister(std::vector<size_t> dims);

    size_t dimension() const {
        return amplitudes_.size();
    }
    const std::vector<size_t> &dims() const {
        return dims_;
    }
    std::vector<cplx> &amplitudes() {
        return amplitudes_;
    }
    const std::vector<cplx> &amplitudes() const {
        return amplitudes_;
    }

    /// Sets a computational basis state.
    void set_basis(const std::vector<size_t> &digits);
    double norm() const;
    void normalize();

    /// Applies a dense operator acting on one site.
    void apply1(size_t site, const Eigen::MatrixXcd &op);
    /// Applies a dense operator acting on two sites; op index = digit(a) * dim(b) + digit(b).
    void apply2(size_t a, size_t b, const Eigen::MatrixXcd &op);
    /// Projects a qubit site onto |bit> and returns the probability of that outcome (state left unnormalized).
    double project(size_t site, size_t level);
    /// Resets a qubit site to |0> after it was projected onto |level>.
    void reset_from(size_t site, size_t level);

   private:
    std::vector<size_t> dims_;
    std::vector<size_t> strides_;
    std::vector<cplx> amplitudes_;
};

/// Identity on a qutrit.
Eigen::MatrixXcd qutrit_identity();
/// Controlled phase of the CZ on a high-frequency data qutrit.
Eigen::MatrixXcd tilde_z(double phi_stat);
/// Effective X of the Hadamard-conjugated check on a data qutrit.
Eigen::MatrixXcd tilde_x(double phi_stat);
/// Hadamard that acts as the identity on |2>.
Eigen::MatrixXcd qutrit_hadamard();
/// CZ between an ancilla qubit (first) and a data qutrit (second) in the zero-leakage limit.
Eigen::MatrixXcd cz_leaky(double phi_stat);

struct AnticommutationNorms {
    /// Anticommutator of the effective Z and X, restricted to the computational block.
    double anticommutator_c;
    /// Commutator of the effective Z and X, restricted to the leaked level.
    double commutator_l;
    /// Anticommutator of the weight-4 effective checks with qubit a leaked.
    double check_anticommutator_la;
    /// Projector defect ||M^2 - M|| of the X-type back-action operators with qubit a leaked.
    double projector_defect_x;
    /// Projector defect of the Z-type back-action operators with qubit a leaked.
    double projector_defect_z;
};

AnticommutationNorms anticommutation_checks(double phi_stat);

struct PlaquetteStatistics {
    /// Probability that the product of the two Z-type gauge outcomes changes between cycles.
    double z_supercheck_defect = 0;
    double x_supercheck_defect = 0;
    /// Per-check defect probabilities of the gauge checks.
    std::array<double, 2> z_gauge_defect{0, 0};
    std::array<double, 2> x_gauge_defect{0, 0};
    /// Sum of probabilities over all enumerated branches.
    double total_probability = 0;
};

/// Exact outcome statistics of the four checks touching a leaked central data qutrit.
///
/// Register: 8 computational data qubits, the leaked qutrit and one reused, reset ancilla.
/// Each cycle measures both X-type gauge checks, then both Z-type ones. Defect statistics
/// compare consecutive cycles and are averaged over all cycle pairs.
PlaquetteStatistics plaquette_outcome_distribution(
    double phi_stat, const std::vector<uint8_t> &initial_bits = {}, size_t n_cycles = 3);

/// Posterior P(L) at each step by summing over all hidden paths.
std::vector<double> hmm_brute_force(const HmmModel &model, const std::vector<Observation> &observations);

/// Pauli-twirl probabilities (I, X, Y, Z) of a channel given by Kraus operators.
std::array<double, 4> pauli_twirl(const std::vector<Eigen::Matrix2cd> &kraus);

/// Kraus operators of amplitude damping followed by pure dephasing.
std::vector<Eigen::Matrix2cd> damping_kraus(double t_ns, double T1_us, double Tphi_us);

/// Max deviation between the exact twirl and twirl_damping.
double twirl_compare(double t_ns, double T1_us, double Tphi_us);

/// Z-flip probability in the exact twirl of Rz(phi).
double twirl_rz_flip(double phi);

/// Minimum weight of a perfect matching of n nodes in which every node may alternatively
/// be matched to the boundary. Exhaustive search.
double brute_force_matching_weight(
    size_t n, const std::function<double(size_t, size_t)> &pair_weight,
    const std::function<double(size_t)> &boundary_weight);

}  // namespace leakmon

#endif
