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

#ifndef _LEAKMON_SIM_H
#define _LEAKMON_SIM_H

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "leakmon/errmodel.h"
#include "leakmon/lattice.h"
#include "leakmon/readout.h"

namespace leakmon {

enum class LeakState : uint8_t { C = 0, L2 = 1, L3 = 2 };

struct SimParams {
    LeakageParams leakage;
    CoherenceParams coherence;
    IqModel iq = build_model(0.996, 0.884);

    void validate() const;
};

/// Pauli applied to a computational qubit immediately before a schedule slot.
struct FaultInjection {
    size_t cycle;
    /// Slot index within the cycle; schedule.size() means after the last slot.
    size_t slot;
    size_t qubit;
    bool x;
    bool z;
};

/// Test and analysis hooks. Defaults give the physical model.
struct SimOptions {
    /// Qubits held in a fixed leaked state for the whole run.
    std::vector<std::pair<size_t, LeakState>> pinned;
    std::vector<FaultInjection> faults;
    /// Random initial Z frames on data qubits (random X-check outcomes).
    bool random_initial_frames = true;
};

/// One simulated run. Arrays are cycle-major.
struct RunRecord {
    size_t n_cycles = 0;
    size_t num_checks = 0;
    size_t num_tracked = 0;
    /// Run index; together with the dataset master seed it fixes every random draw.
    uint64_t seed = 0;
    /// Raw ternary outcomes, [cycle][check].
    std::vector<uint8_t> outcome;
    /// Declared bits (2 declared as 1), [cycle][check].
    std::vector<uint8_t> declared;
    /// Analog in-phase responses, [cycle][check].
    std::vector<float> analog;
    /// Ground-truth leakage state, [cycle][tracked qubit].
    std::vector<LeakState> truth;
    /// Z-basis data readout that would be obtained by stopping after each cycle, bit q = data qubit q.
    std::vector<uint64_t> readout;

    uint8_t m(size_t cycle, size_t check) const {
        return outcome[cycle * num_checks + check];
    }
    uint8_t decl(size_t cycle, size_t check) const {
        return declared[cycle * num_checks + check];
    }
    float I(size_t cycle, size_t check) const {
        return analog[cycle * num_checks + check];
    }
    LeakState state(size_t cycle, size_t tracked_index) const {
        return truth[cycle * num_tracked + tracked_index];
    }
    bool leaked(size_t cycle, size_t tracked_index) const {
        return state(cycle, tracked_index) != LeakState::C;
    }
};

/// Defect bits, [cycle][check].
struct DefectStream {
    size_t n_cycles = 0;
    size_t num_checks = 0;
    std::vector<uint8_t> bits;

    uint8_t at(size_t cycle, size_t check) const {
        return bits[cycle * num_checks + check];
    }
};

/// Independent generator for a (master seed, run index, stream) triple.
std::mt19937_64 run_rng(uint64_t master_seed, uint64_t run_index, uint64_t stream);

enum RngStream : uint64_t { STREAM_TRAJECTORY = 0, STREAM_ANALOG = 1 };

/// Trajectory engine bound to a layout and parameter set.
class FrameSimulator {
   public:
    FrameSimulator(const Layout &layout, const SimParams &params);

    /// Simulates one run. Analog samples are drawn from a separate stream so that
    /// they can be regenerated for another readout model without changing the trajectory.
    RunRecord run(size_t n_cycles, uint64_t master_seed, uint64_t run_index, const SimOptions &options = {}) const;

    const Layout &layout() const {
        return layout_;
    }
    const SimParams &params() const {
        return params_;
    }
    /// Index of the gate within the cycle, used to key per-pair leakage phases.
    size_t num_gates() const {
        return num_gates_;
    }

   private:
    struct Cumulative {
        double x;
        double xy;
        double xyz;
    };
    struct State;

    void apply_channel(State &s, size_t q, const Cumulative &c) const;
    void apply_cz(State &s, const CzGate &gate, size_t gate_index) const;
    void measure_layer(State &s, const MeasureLayer &layer, RunRecord &record, size_t cycle) const;

    Layout layout_;
    SimParams params_;
    size_t num_gates_ = 0;
    std::vector<size_t> tracked_;
    std::vector<size_t> tracked_index_;
    /// Per slot, per qubit noise applied to every computational qubit not in a CZ.
    std::vector<std::vector<Cumulative>> slot_noise_;
    /// Per gate: half-duration noise on (flux, stat).
    std::vector<std::pair<Cumulative, Cumulative>> gate_noise_;
    std::vector<size_t> slot_first_gate_;
    double seep_l2_ = 0;
    double seep_l3_ = 0;
};

/// Convenience wrapper around FrameSimulator::run.
RunRecord simulate_run(
    const Layout &layout,
    const SimParams &params,
    size_t n_cycles,
    uint64_t master_seed,
    uint64_t run_index,
    const SimOptions &options = {});

/// Gaussian draw of the analog response for outcome m.
double sample_analog(int m, const IqModel &iq, std::mt19937_64 &rng);

/// Redraws all analog samples of the record from its analog stream with a new readout model.
void resample_analog(RunRecord &record, const IqModel &iq, uint64_t master_seed, uint64_t run_index);

/// d[n] = declared[n] xor declared[n-2]; Z checks pad with zeros, X checks report no defect in the first two cycles.
DefectStream compute_defects(const Layout &layout, const RunRecord &record);

/// Sets the declared bits from the raw outcomes.
void declare_outcomes(RunRecord &record);

}  // namespace leakmon

#endif
