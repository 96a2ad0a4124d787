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

#include "leakmon/sim.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace leakmon {

namespace {

inline double uniform(std::mt19937_64 &rng) {
    return (double)(rng() >> 11) * 0x1.0p-53;
}

inline uint8_t coin(std::mt19937_64 &rng) {
    return (uint8_t)(rng() >> 63);
}

}  // namespace

struct FrameSimulator::State {
    std::vector<uint8_t> x;
    std::vector<uint8_t> z;
    std::vector<LeakState> leak;
    std::vector<uint8_t> pinned;
    /// Data-frame parity transferred into each check during the current cycle.
    std::vector<uint8_t> contrib;
    std::vector<LeakagePhases> phases;
    std::mt19937_64 rng;

    bool computational(size_t q) const {
        return leak[q] == LeakState::C;
    }
    void randomize(size_t q) {
        x[q] = coin(rng);
        z[q] = coin(rng);
    }
};

void SimParams::validate() const {
    leakage.validate();
    coherence.validate();
    iq.validate();
}

std::mt19937_64 run_rng(uint64_t master_seed, uint64_t run_index, uint64_t stream) {
    std::seed_seq seq{
        (uint32_t)master_seed,
        (uint32_t)(master_seed >> 32),
        (uint32_t)run_index,
        (uint32_t)(run_index >> 32),
        (uint32_t)stream};
    return std::mt19937_64(seq);
}

FrameSimulator::FrameSimulator(const Layout &layout, const SimParams &params) : layout_(layout), params_(params) {
    params_.validate();
    size_t n = layout_.num_qubits();
    tracked_ = layout_.tracked_qubits();
    tracked_index_.assign(n, SIZE_MAX);
    for (size_t k = 0; k < tracked_.size(); k++) {
        tracked_index_[tracked_[k]] = k;
    }

    const auto &coh = params_.coherence;
    auto cumulative = [&](const TwirledPauliChannel &ch) {
        if (!coh.damping) {
            return Cumulative{0, 0, 0};
        }
        return Cumulative{ch.pX, ch.pX + ch.pY, ch.pX + ch.pY + ch.pZ};
    };
    auto idle = [&](double t, double tphi) {
        return cumulative(twirl_damping(t, coh.T1_us, tphi));
    };

    // Qubit pairs that share a CZ somewhere in the schedule.
    std::vector<std::vector<size_t>> partners(n);
    for (const auto &slot : layout_.schedule) {
        if (auto *cz = std::get_if<CzLayer>(&slot)) {
            for (const auto &g : cz->gates) {
                partners[g.flux].push_back(g.stat);
                partners[g.stat].push_back(g.flux);
            }
        }
    }

    for (const auto &slot : layout_.schedule) {
        std::vector<Cumulative> noise(n, Cumulative{0, 0, 0});
        slot_first_gate_.push_back(num_gates_);
        if (auto *sq = std::get_if<SingleQubitLayer>(&slot)) {
            for (size_t q = 0; q < n; q++) {
                noise[q] = idle(sq->duration_ns, coh.Tphi_sweet_us);
            }
        } else if (auto *ig = std::get_if<IdleGap>(&slot)) {
            for (size_t q = 0; q < n; q++) {
                noise[q] = idle(ig->duration_ns, coh.Tphi_sweet_us);
            }
        } else if (auto *cz = std::get_if<CzLayer>(&slot)) {
            std::vector<uint8_t> active(n, 0);
            std::vector<uint8_t> fluxing(n, 0);
            for (const auto &g : cz->gates) {
                if (layout_.qubits[g.flux].role == FrequencyRole::Low &&
                    layout_.qubits[g.stat].role == FrequencyRole::Low) {
                    throw std::logic_error("CZ between two low-frequency qubits");
                }
                active[g.flux] = active[g.stat] = 1;
                fluxing[g.flux] = 1;
                double half = cz->duration_ns / 2;
                double t_int_half = std::min(coh.timing.t_int, cz->duration_ns) / 2;
                auto role = (size_t)layout_.qubits[g.flux].role;
                TwirledPauliChannel flux_ch = twirl_damping(t_int_half, coh.T1_us, coh.Tphi_int_us[role]);
                flux_ch = compose(flux_ch, twirl_damping(half - t_int_half, coh.T1_us, coh.Tphi_sweet_us));
                TwirledPauliChannel stat_ch = twirl_damping(half, coh.T1_us, coh.Tphi_sweet_us);
                gate_noise_.push_back({cumulative(flux_ch), cumulative(stat_ch)});
                num_gates_++;
            }
            for (size_t q = 0; q < n; q++) {
                if (active[q]) {
                    continue;
                }
                bool parked = false;
                for (size_t p : partners[q]) {
                    parked |= fluxing[p] && layout_.qubits[p].role > layout_.qubits[q].role;
                }
                auto role = (size_t)layout_.qubits[q].role;
                noise[q] = idle(cz->duration_ns, parked ? coh.Tphi_park_us[role] : coh.Tphi_sweet_us);
            }
        }
        slot_noise_.push_back(std::move(noise));
    }
    seep_l2_ = relaxation_seepage_l2(coh);
    seep_l3_ = relaxation_seepage_l3(coh);
}

void FrameSimulator::apply_channel(State &s, size_t q, const Cumulative &c) const {
    if (c.xyz == 0 || !s.computational(q)) {
        return;
    }
    double u = uniform(s.rng);
    if (u >= c.xyz) {
        return;
    }
    if (u < c.x) {
        s.x[q] ^= 1;
    } else if (u < c.xy) {
        s.x[q] ^= 1;
        s.z[q] ^= 1;
    } else {
        s.z[q] ^= 1;
    }
}

void FrameSimulator::apply_cz(State &s, const CzGate &gate, size_t gate_index) const {
    const auto &lp = params_.leakage;
    const auto &noise = gate_noise_[gate_index];
    size_t a = gate.flux;
    size_t b = gate.stat;
    apply_channel(s, a, noise.first);
    apply_channel(s, b, noise.second);

    bool la = !s.computational(a);
    bool lb = !s.computational(b);
    if (!la && !lb) {
        if (lp.L1 > 0 && !s.pinned[a] && uniform(s.rng) < lp.L1) {
            s.leak[a] = LeakState::L2;
            s.randomize(b);
        } else {
            size_t data = layout_.is_data(a) ? a : b;
            s.contrib[gate.check] ^= s.x[data];
            s.z[a] ^= s.x[b];
            s.z[b] ^= s.x[a];
        }
    } else if (la != lb) {
        size_t leaked = la ? a : b;
        size_t other = la ? b : a;
        double u = uniform(s.rng);
        double seep = (la && s.leak[a] == LeakState::L2 && !s.pinned[a]) ? 2 * lp.L1 : 0;
        double hop = (layout_.is_tracked(other) && !s.pinned[leaked]) ? lp.Lm : 0;
        if (u < seep) {
            s.leak[a] = LeakState::C;
            s.randomize(a);
            s.randomize(b);
        } else if (u < seep + hop) {
            s.leak[other] = s.leak[leaked];
            s.leak[leaked] = LeakState::C;
            s.randomize(leaked);
        } else {
            if (!layout_.is_data(leaked)) {
                const auto &ph = s.phases[gate_index];
                double phi = la ? ph.stat : ph.flux;
                if (uniform(s.rng) < phase_flip_prob(phi)) {
                    s.z[other] ^= 1;
                }
            }
            if (lp.include_L3 && la && !s.pinned[a] && lp.L3 > 0) {
                if (uniform(s.rng) < lp.L3 / 2) {
                    s.leak[a] = s.leak[a] == LeakState::L2 ? LeakState::L3 : LeakState::L2;
                    s.x[b] ^= 1;
                }
            }
        }
    }

    apply_channel(s, a, noise.first);
    apply_channel(s, b, noise.second);
}

void FrameSimulator::measure_layer(State &s, const MeasureLayer &layer, RunRecord &record, size_t cycle) const {
    size_t num_checks = layout_.checks.size();
    std::vector<int8_t> gauge(num_checks, -1);
    for (size_t q = 0; q < layout_.num_data; q++) {
        if (s.computational(q)) {
            continue;
        }
        auto pair = same_type_checks(layout_, q, layer.type);
        if (pair.empty()) {
            continue;
        }
        size_t c1 = pair[0];
        if (gauge[c1] < 0) {
            gauge[c1] = (int8_t)coin(s.rng);
        }
        if (pair.size() == 1) {
            continue;
        }
        size_t c2 = pair[1];
        // Conditional phases picked up by the two ancillas from the leaked qubit.
        double cos_prod = 1;
        size_t g = 0;
        for (const auto &slot : layout_.schedule) {
            if (auto *cz = std::get_if<CzLayer>(&slot)) {
                for (const auto &gate : cz->gates) {
                    if ((gate.check == c1 || gate.check == c2) && (gate.flux == q || gate.stat == q)) {
                        double phi = gate.flux == q ? s.phases[g].stat : s.phases[g].flux;
                        cos_prod *= std::cos(phi);
                    }
                    g++;
                }
            }
        }
        uint8_t nu = uniform(s.rng) < (1 - cos_prod) / 2;
        uint8_t value = (uint8_t)gauge[c1] ^ s.contrib[c1] ^ s.contrib[c2] ^ nu;
        if (gauge[c2] < 0) {
            gauge[c2] = (int8_t)value;
        }
    }

    for (size_t c : layer.checks) {
        size_t anc = layout_.checks[c].ancilla;
        uint8_t m;
        if (!s.computational(anc)) {
            m = 2;
        } else {
            if (gauge[c] >= 0) {
                s.x[anc] ^= s.contrib[c] ^ (uint8_t)gauge[c];
            }
            m = s.x[anc];
            s.z[anc] = 0;
        }
        record.outcome[cycle * num_checks + c] = m;
        record.declared[cycle * num_checks + c] = m != 0;
        record.truth[cycle * record.num_tracked + tracked_index_[anc]] = s.leak[anc];
    }
}

RunRecord FrameSimulator::run(size_t n_cycles, uint64_t master_seed, uint64_t run_index, const SimOptions &options)
    const {
    if (n_cycles == 0) {
        throw std::invalid_argument("n_cycles must be at least 1");
    }
    size_t n = layout_.num_qubits();
    size_t num_checks = layout_.checks.size();
    RunRecord record;
    record.n_cycles = n_cycles;
    record.num_checks = num_checks;
    record.num_tracked = tracked_.size();
    record.seed = run_index;
    record.outcome.assign(n_cycles * num_checks, 0);
    record.declared.assign(n_cycles * num_checks, 0);
    record.analog.assign(n_cycles * num_checks, 0);
    record.truth.assign(n_cycles * tracked_.size(), LeakState::C);
    record.readout.assign(n_cycles, 0);

    State s;
    s.rng = run_rng(master_seed, run_index, STREAM_TRAJECTORY);
    s.x.assign(n, 0);
    s.z.assign(n, 0);
    s.leak.assign(n, LeakState::C);
    s.pinned.assign(n, 0);
    s.contrib.assign(num_checks, 0);
    s.phases = sample_phase_table(params_.leakage, num_gates_, s.rng);
    for (const auto &[q, state] : options.pinned) {
        if (q >= n || !layout_.is_tracked(q)) {
            throw std::invalid_argument("only tracked qubits can be pinned");
        }
        s.leak[q] = state;
        s.pinned[q] = 1;
    }
    if (options.random_initial_frames) {
        for (size_t q = 0; q < layout_.num_data; q++) {
            s.z[q] = coin(s.rng);
        }
    }
    // Reference Z readout of |0_L>: a random product of X-check supports.
    uint64_t reference = 0;
    for (const auto &check : layout_.checks) {
        if (check.type == CheckType::X && coin(s.rng)) {
            for (size_t q : check.support) {
                reference ^= uint64_t{1} << q;
            }
        }
    }

    auto inject = [&](size_t cycle, size_t slot) {
        for (const auto &f : options.faults) {
            if (f.cycle == cycle && f.slot == slot && s.computational(f.qubit)) {
                s.x[f.qubit] ^= f.x;
                s.z[f.qubit] ^= f.z;
            }
        }
    };

    const auto &schedule = layout_.schedule;
    for (size_t cycle = 0; cycle < n_cycles; cycle++) {
        if (cycle > 0) {
            for (size_t q : tracked_) {
                if (s.pinned[q]) {
                    continue;
                }
                if (s.leak[q] == LeakState::L2 && uniform(s.rng) < seep_l2_) {
                    s.leak[q] = LeakState::C;
                    s.randomize(q);
                } else if (s.leak[q] == LeakState::L3 && uniform(s.rng) < seep_l3_) {
                    s.leak[q] = LeakState::L2;
                }
            }
        }
        std::fill(s.contrib.begin(), s.contrib.end(), 0);
        for (size_t k = 0; k < schedule.size(); k++) {
            if (!options.faults.empty()) {
                inject(cycle, k);
            }
            const auto &slot = schedule[k];
            const auto &noise = slot_noise_[k];
            if (auto *sq = std::get_if<SingleQubitLayer>(&slot)) {
                for (size_t q = 0; q < n; q++) {
                    apply_channel(s, q, noise[q]);
                }
                for (size_t q : sq->qubits) {
                    if (s.computational(q)) {
                        std::swap(s.x[q], s.z[q]);
                    }
                }
            } else if (auto *cz = std::get_if<CzLayer>(&slot)) {
                size_t g = slot_first_gate_[k];
                for (const auto &gate : cz->gates) {
                    apply_cz(s, gate, g++);
                }
                for (size_t q = 0; q < n; q++) {
                    apply_channel(s, q, noise[q]);
                }
            } else if (auto *ml = std::get_if<MeasureLayer>(&slot)) {
                measure_layer(s, *ml, record, cycle);
            } else {
                for (size_t q = 0; q < n; q++) {
                    apply_channel(s, q, noise[q]);
                }
            }
        }
        if (!options.faults.empty()) {
            inject(cycle, schedule.size());
        }
        uint64_t bits = reference;
        for (size_t q = 0; q < layout_.num_data; q++) {
            if (!s.computational(q)) {
                bits |= uint64_t{1} << q;
            } else if (s.x[q]) {
                bits ^= uint64_t{1} << q;
            }
            if (tracked_index_[q] != SIZE_MAX) {
                record.truth[cycle * tracked_.size() + tracked_index_[q]] = s.leak[q];
            }
        }
        record.readout[cycle] = bits;
    }

    resample_analog(record, params_.iq, master_seed, run_index);
    return record;
}

RunRecord simulate_run(
    const Layout &layout,
    const SimParams &params,
    size_t n_cycles,
    uint64_t master_seed,
    uint64_t run_index,
    const SimOptions &options) {
    return FrameSimulator(layout, params).run(n_cycles, master_seed, run_index, options);
}

double sample_analog(int m, const IqModel &iq, std::mt19937_64 &rng) {
    if (m < 0 || m > 2) {
        throw std::invalid_argument("outcome must be 0, 1 or 2");
    }
    std::normal_distribution<double> dist(0, 1);
    return iq.mu[m] + iq.sigma * dist(rng);
}

void resample_analog(RunRecord &record, const IqModel &iq, uint64_t master_seed, uint64_t run_index) {
    auto rng = run_rng(master_seed, run_index, STREAM_ANALOG);
    for (size_t k = 0; k < record.outcome.size(); k++) {
        record.analog[k] = (float)sample_analog(record.outcome[k], iq, rng);
    }
}

void declare_outcomes(RunRecord &record) {
    for (size_t k = 0; k < record.outcome.size(); k++) {
        record.declared[k] = record.outcome[k] != 0;
    }
}

DefectStream compute_defects(const Layout &layout, const RunRecord &record) {
    DefectStream out;
    out.n_cycles = record.n_cycles;
    out.num_checks = record.num_checks;
    out.bits.assign(record.n_cycles * record.num_checks, 0);
    for (size_t c = 0; c < record.num_checks; c++) {
        bool x_type = layout.checks[c].type == CheckType::X;
        for (size_t n = 0; n < record.n_cycles; n++) {
            if (x_type && n < 2) {
                continue;
            }
            uint8_t prev = n >= 2 ? record.decl(n - 2, c) : 0;
            out.bits[n * record.num_checks + c] = record.decl(n, c) ^ prev;
        }
    }
    return out;
}

}  // namespace leakmon
