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

#include "leakmon/oracle.h"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "leakmon/errmodel.h"
#include "leakmon/lattice.h"

namespace leakmon {

MixedRegister::MixedRegister(std::vector<size_t> dims) : dims_(std::move(dims)) {
    size_t total = 1;
    for (size_t d : dims_) {
        if (d != 2 && d != 3) {
            throw std::invalid_argument("sites must be qubits or qutrits");
        }
        total *= d;
        if (total > MAX_DIMENSION) {
            throw std::length_error("register dimension exceeds the oracle cap");
        }
    }
    strides_.assign(dims_.size(), 1);
    for (size_t k = dims_.size(); k-- > 1;) {
        strides_[k - 1] = strides_[k] * dims_[k];
    }
    amplitudes_.assign(total, 0);
    amplitudes_[0] = 1;
}

void MixedRegister::set_basis(const std::vector<size_t> &digits) {
    if (digits.size() != dims_.size()) {
        throw std::invalid_argument("digit count mismatch");
    }
    std::fill(amplitudes_.begin(), amplitudes_.end(), 0);
    size_t idx = 0;
    for (size_t k = 0; k < digits.size(); k++) {
        if (digits[k] >= dims_[k]) {
            throw std::invalid_argument("digit out of range");
        }
        idx += digits[k] * strides_[k];
    }
    amplitudes_[idx] = 1;
}

double MixedRegister::norm() const {
    double s = 0;
    for (const auto &a : amplitudes_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

void MixedRegister::normalize() {
    double n = norm();
    for (auto &a : amplitudes_) {
        a /= n;
    }
}

void MixedRegister::apply1(size_t site, const Eigen::MatrixXcd &op) {
    size_t d = dims_[site];
    size_t stride = strides_[site];
    if ((size_t)op.rows() != d || (size_t)op.cols() != d) {
        throw std::invalid_argument("operator size mismatch");
    }
    std::vector<cplx> buf(d);
    for (size_t base = 0; base < amplitudes_.size(); base++) {
        if ((base / stride) % d != 0) {
            continue;
        }
        for (size_t i = 0; i < d; i++) {
            buf[i] = amplitudes_[base + i * stride];
        }
        for (size_t i = 0; i < d; i++) {
            cplx acc = 0;
            for (size_t j = 0; j < d; j++) {
                acc += op(i, j) * buf[j];
            }
            amplitudes_[base + i * stride] = acc;
        }
    }
}

void MixedRegister::apply2(size_t a, size_t b, const Eigen::MatrixXcd &op) {
    size_t da = dims_[a], db = dims_[b];
    size_t sa = strides_[a], sb = strides_[b];
    size_t d = da * db;
    if ((size_t)op.rows() != d || (size_t)op.cols() != d) {
        throw std::invalid_argument("operator size mismatch");
    }
    std::vector<cplx> buf(d);
    for (size_t base = 0; base < amplitudes_.size(); base++) {
        if ((base / sa) % da != 0 || (base / sb) % db != 0) {
            continue;
        }
        for (size_t i = 0; i < da; i++) {
            for (size_t j = 0; j < db; j++) {
                buf[i * db + j] = amplitudes_[base + i * sa + j * sb];
            }
        }
        for (size_t r = 0; r < d; r++) {
            cplx acc = 0;
            for (size_t c = 0; c < d; c++) {
                acc += op(r, c) * buf[c];
            }
            amplitudes_[base + (r / db) * sa + (r % db) * sb] = acc;
        }
    }
}

double MixedRegister::project(size_t site, size_t level) {
    double p = 0;
    for (size_t idx = 0; idx < amplitudes_.size(); idx++) {
        if ((idx / strides_[site]) % dims_[site] == level) {
            p += std::norm(amplitudes_[idx]);
        } else {
            amplitudes_[idx] = 0;
        }
    }
    return p;
}

void MixedRegister::reset_from(size_t site, size_t level) {
    if (level == 0) {
        return;
    }
    for (size_t idx = 0; idx < amplitudes_.size(); idx++) {
        if ((idx / strides_[site]) % dims_[site] == level) {
            amplitudes_[idx - level * strides_[site]] = amplitudes_[idx];
            amplitudes_[idx] = 0;
        }
    }
}

Eigen::MatrixXcd qutrit_identity() {
    return Eigen::MatrixXcd::Identity(3, 3);
}

Eigen::MatrixXcd tilde_z(double phi_stat) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = 1;
    m(1, 1) = -1;
    m(2, 2) = -std::exp(cplx(0, -phi_stat));
    return m;
}

Eigen::MatrixXcd tilde_x(double phi_stat) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 1) = 1;
    m(1, 0) = 1;
    m(2, 2) = -std::exp(cplx(0, -phi_stat));
    return m;
}

Eigen::MatrixXcd qutrit_hadamard() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    double s = 1 / std::sqrt(2.0);
    m(0, 0) = s;
    m(0, 1) = s;
    m(1, 0) = s;
    m(1, 1) = -s;
    m(2, 2) = 1;
    return m;
}

Eigen::MatrixXcd cz_leaky(double phi_stat) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
    m.block(0, 0, 3, 3) = qutrit_identity();
    m.block(3, 3, 3, 3) = tilde_z(phi_stat);
    return m;
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Eigen::MatrixXcd pauli_z() {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Eigen::MatrixXcd pauli_x() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Eigen::MatrixXcd hadamard() {
    Eigen::MatrixXcd m(2, 2);
    double s = 1 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

Eigen::MatrixXcd cz_qubits() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}

}  // namespace

AnticommutationNorms anticommutation_checks(double phi_stat) {
    AnticommutationNorms out{};
    Eigen::MatrixXcd z = tilde_z(phi_stat);
    Eigen::MatrixXcd x = tilde_x(phi_stat);
    Eigen::MatrixXcd anti = z * x + x * z;
    Eigen::MatrixXcd comm = z * x - x * z;
    out.anticommutator_c = anti.block(0, 0, 2, 2).norm();
    out.commutator_l = std::abs(comm(2, 2));

    // Check on (a, b, c, d): a and b are data qutrits, c and d are data qubits.
    Eigen::MatrixXcd za = kron(kron(kron(z, z), pauli_z()), pauli_z());
    Eigen::MatrixXcd xa = kron(kron(kron(x, x), pauli_x()), pauli_x());
    Eigen::MatrixXcd ia = Eigen::MatrixXcd::Identity(36, 36);
    // Projector onto a in |2>, b in the computational block.
    Eigen::MatrixXcd pa = Eigen::MatrixXcd::Zero(3, 3);
    pa(2, 2) = 1;
    Eigen::MatrixXcd pb = Eigen::MatrixXcd::Zero(3, 3);
    pb(0, 0) = 1;
    pb(1, 1) = 1;
    Eigen::MatrixXcd p = kron(kron(kron(pa, pb), Eigen::MatrixXcd::Identity(2, 2)), Eigen::MatrixXcd::Identity(2, 2));
    out.check_anticommutator_la = (p * (za * xa + xa * za) * p).norm();

    double defect_x = 0;
    double defect_z = 0;
    for (double sign : {1.0, -1.0}) {
        Eigen::MatrixXcd mx = p * (ia + sign * xa) * p / 2.0;
        Eigen::MatrixXcd mz = p * (ia + sign * za) * p / 2.0;
        defect_x = std::max(defect_x, (mx * mx - mx).norm());
        defect_z = std::max(defect_z, (mz * mz - mz).norm());
    }
    out.projector_defect_x = defect_x;
    out.projector_defect_z = defect_z;
    return out;
}

namespace {

struct PlaquetteCircuit {
    size_t ancilla_site;
    size_t leaked_site;
    size_t num_data;
    /// Gauge checks in measurement order: X pair then Z pair. Each is the ordered data support.
    std::vector<std::vector<size_t>> checks;
    std::vector<CheckType> types;
    Eigen::MatrixXcd cz_leak;
    Eigen::MatrixXcd cz;
    Eigen::MatrixXcd h;
    Eigen::MatrixXcd h3;
};

struct PlaquetteAccumulator {
    size_t n_cycles;
    size_t per_cycle;
    PlaquetteStatistics stats;
};

void apply_data_hadamards(MixedRegister &reg, const PlaquetteCircuit &circ) {
    for (size_t q = 0; q < circ.num_data; q++) {
        reg.apply1(q, q == circ.leaked_site ? circ.h3 : circ.h);
    }
}

void entangle_check(MixedRegister &reg, const PlaquetteCircuit &circ, size_t k) {
    reg.apply1(circ.ancilla_site, circ.h);
    for (size_t q : circ.checks[k]) {
        reg.apply2(circ.ancilla_site, q, q == circ.leaked_site ? circ.cz_leak : circ.cz);
    }
    reg.apply1(circ.ancilla_site, circ.h);
}

void branch(
    const MixedRegister &reg,
    double prob,
    const PlaquetteCircuit &circ,
    std::vector<uint8_t> &outcomes,
    size_t step,
    PlaquetteAccumulator &acc) {
    size_t total_steps = acc.n_cycles * acc.per_cycle;
    if (step == total_steps) {
        auto &s = acc.stats;
        s.total_probability += prob;
        double w = prob / (double)(acc.n_cycles - 1);
        for (size_t n = 1; n < acc.n_cycles; n++) {
            const uint8_t *now = &outcomes[n * acc.per_cycle];
            const uint8_t *prev = &outcomes[(n - 1) * acc.per_cycle];
            s.x_gauge_defect[0] += w * (now[0] ^ prev[0]);
            s.x_gauge_defect[1] += w * (now[1] ^ prev[1]);
            s.z_gauge_defect[0] += w * (now[2] ^ prev[2]);
            s.z_gauge_defect[1] += w * (now[3] ^ prev[3]);
            s.x_supercheck_defect += w * (now[0] ^ now[1] ^ prev[0] ^ prev[1]);
            s.z_supercheck_defect += w * (now[2] ^ now[3] ^ prev[2] ^ prev[3]);
        }
        return;
    }
    size_t k = step % acc.per_cycle;
    MixedRegister pre = reg;
    if (k == 0) {
        apply_data_hadamards(pre, circ);
    }
    entangle_check(pre, circ, k);
    for (uint8_t bit = 0; bit < 2; bit++) {
        MixedRegister post = pre;
        double p = post.project(circ.ancilla_site, bit);
        if (p < 1e-15) {
            continue;
        }
        post.normalize();
        post.reset_from(circ.ancilla_site, bit);
        if (k == 1) {
            apply_data_hadamards(post, circ);
        }
        outcomes[step] = bit;
        branch(post, prob * p, circ, outcomes, step + 1, acc);
    }
}

}  // namespace

PlaquetteStatistics plaquette_outcome_distribution(
    double phi_stat, const std::vector<uint8_t> &initial_bits, size_t n_cycles) {
    if (n_cycles < 2) {
        throw std::invalid_argument("need at least two cycles to form defects");
    }
    Layout layout = build_surface17();
    size_t leaked = layout.data_qubit("D4");
    PlaquetteCircuit circ;
    circ.num_data = layout.num_data;
    circ.leaked_site = leaked;
    circ.ancilla_site = layout.num_data;
    for (CheckType type : {CheckType::X, CheckType::Z}) {
        for (size_t c : same_type_checks(layout, leaked, type)) {
            circ.checks.push_back(layout.checks[c].support);
            circ.types.push_back(type);
        }
    }
    if (circ.checks.size() != 4) {
        throw std::logic_error("central data qubit must touch four checks");
    }
    circ.cz_leak = cz_leaky(phi_stat);
    circ.cz = cz_qubits();
    circ.h = hadamard();
    circ.h3 = qutrit_hadamard();

    std::vector<size_t> dims(layout.num_data + 1, 2);
    dims[leaked] = 3;
    MixedRegister reg(dims);
    std::vector<size_t> digits(dims.size(), 0);
    for (size_t q = 0, k = 0; q < layout.num_data; q++) {
        if (q == leaked) {
            digits[q] = 2;
            continue;
        }
        digits[q] = k < initial_bits.size() ? initial_bits[k] : 0;
        k++;
    }
    reg.set_basis(digits);

    PlaquetteAccumulator acc{n_cycles, 4, {}};
    std::vector<uint8_t> outcomes(n_cycles * 4, 0);
    branch(reg, 1.0, circ, outcomes, 0, acc);
    return acc.stats;
}

std::vector<double> hmm_brute_force(const HmmModel &model, const std::vector<Observation> &observations) {
    size_t n = observations.size();
    if (n > 16) {
        throw std::length_error("brute-force HMM limited to 16 steps");
    }
    std::vector<std::array<double, 2>> like(n);
    for (size_t t = 0; t < n; t++) {
        const auto &obs = observations[t];
        for (int s = 0; s < 2; s++) {
            double v = 1;
            for (size_t i = 0; i < obs.defects.size(); i++) {
                if (obs.defects[i] < 0) {
                    continue;
                }
                double p1 = s == 0 ? model.emissions[i].p_c : model.emissions[i].p_l;
                v *= obs.defects[i] ? p1 : 1 - p1;
            }
            if (model.use_analog && obs.has_analog) {
                double n0 = model.iq.density(0, obs.analog);
                double n1 = model.iq.density(1, obs.analog);
                double n2 = model.iq.density(2, obs.analog);
                double mix = model.rule == AnalogRule::NormalizedMixture ? (n0 + n1) / 2 : n0 + n1;
                v *= s == 0 ? mix : n2;
            }
            like[t][s] = v;
        }
    }
    std::vector<double> out;
    for (size_t len = 1; len <= n; len++) {
        double joint[2] = {0, 0};
        for (uint32_t path = 0; path < (1u << len); path++) {
            for (int s0 = 0; s0 < 2; s0++) {
                double p = s0 == 0 ? 1 - model.initial_leak : model.initial_leak;
                int prev = s0;
                for (size_t t = 0; t < len; t++) {
                    int s = (path >> t) & 1;
                    p *= model.A[s][prev] * like[t][s];
                    prev = s;
                }
                joint[(path >> (len - 1)) & 1] += p;
            }
        }
        out.push_back(joint[1] / (joint[0] + joint[1]));
    }
    return out;
}

std::array<double, 4> pauli_twirl(const std::vector<Eigen::Matrix2cd> &kraus) {
    std::array<Eigen::Matrix2cd, 4> paulis;
    paulis[0] << 1, 0, 0, 1;
    paulis[1] << 0, 1, 1, 0;
    paulis[2] << 0, cplx(0, -1), cplx(0, 1), 0;
    paulis[3] << 1, 0, 0, -1;
    std::array<double, 4> out{0, 0, 0, 0};
    for (const auto &k : kraus) {
        for (size_t p = 0; p < 4; p++) {
            out[p] += std::norm((paulis[p].adjoint() * k).trace() / 2.0);
        }
    }
    return out;
}

std::vector<Eigen::Matrix2cd> damping_kraus(double t_ns, double T1_us, double Tphi_us) {
    double t = t_ns * 1e-3;
    double gamma = 1 - std::exp(-t / T1_us);
    double lambda = std::exp(-t / Tphi_us);
    Eigen::Matrix2cd a0, a1, d0, d1;
    a0 << 1, 0, 0, std::sqrt(1 - gamma);
    a1 << 0, std::sqrt(gamma), 0, 0;
    d0 << std::sqrt((1 + lambda) / 2), 0, 0, std::sqrt((1 + lambda) / 2);
    d1 << std::sqrt((1 - lambda) / 2), 0, 0, -std::sqrt((1 - lambda) / 2);
    return {d0 * a0, d0 * a1, d1 * a0, d1 * a1};
}

double twirl_compare(double t_ns, double T1_us, double Tphi_us) {
    auto exact = pauli_twirl(damping_kraus(t_ns, T1_us, Tphi_us));
    auto ch = twirl_damping(t_ns, T1_us, Tphi_us);
    double dev = std::abs(exact[1] - ch.pX);
    dev = std::max(dev, std::abs(exact[2] - ch.pY));
    dev = std::max(dev, std::abs(exact[3] - ch.pZ));
    dev = std::max(dev, std::abs(exact[0] - (1 - ch.total())));
    return dev;
}

double twirl_rz_flip(double phi) {
    Eigen::Matrix2cd rz;
    rz << std::exp(cplx(0, -phi / 2)), 0, 0, std::exp(cplx(0, phi / 2));
    return pauli_twirl({rz})[3];
}

namespace {

double match_rec(
    uint32_t remaining,
    size_t n,
    const std::function<double(size_t, size_t)> &pair_weight,
    const std::function<double(size_t)> &boundary_weight) {
    if (remaining == 0) {
        return 0;
    }
    size_t i = (size_t)std::countr_zero(remaining);
    uint32_t rest = remaining & ~(1u << i);
    double best = boundary_weight(i) + match_rec(rest, n, pair_weight, boundary_weight);
    for (size_t j = i + 1; j < n; j++) {
        if (rest & (1u << j)) {
            best = std::min(best, pair_weight(i, j) + match_rec(rest & ~(1u << j), n, pair_weight, boundary_weight));
        }
    }
    return best;
}

}  // namespace

double brute_force_matching_weight(
    size_t n, const std::function<double(size_t, size_t)> &pair_weight,
    const std::function<double(size_t)> &boundary_weight) {
    if (n > 20) {
        throw std::length_error("brute-force matching limited to 20 nodes");
    }
    return match_rec(n == 0 ? 0 : (uint32_t)((1u << n) - 1), n, pair_weight, boundary_weight);
}

}  // namespace leakmon
