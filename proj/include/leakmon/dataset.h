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

#ifndef _LEAKMON_DATASET_H
#define _LEAKMON_DATASET_H

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "leakmon/lattice.h"
#include "leakmon/sim.h"

namespace leakmon {

constexpr int DATASET_SCHEMA_VERSION = 1;

struct Dataset {
    /// Self-description: parameters, seed, shape and schema version.
    nlohmann::json header;
    uint64_t master_seed = 0;
    size_t n_cycles = 0;
    std::vector<RunRecord> runs;

    size_t size() const {
        return runs.size();
    }
    SimParams params() const;
};

/// Simulates n_runs independent runs. Results do not depend on the worker count.
Dataset simulate_dataset(
    const Layout &layout,
    const SimParams &params,
    size_t n_runs,
    size_t n_cycles,
    uint64_t master_seed,
    size_t workers = 1,
    const SimOptions &options = {});

/// Regenerates the analog column with another readout model, keeping trajectories.
void resample_analog(Dataset &dataset, const IqModel &iq);

/// Binary layout: 8-byte magic, u64 header length, JSON header, then per run:
/// u64 seed, outcome[n*C] u8, declared[n*C] u8, analog[n*C] f32, truth[n*T] u8, readout[n] u64.
void write_dataset(const Dataset &dataset, std::ostream &out);
void write_dataset(const Dataset &dataset, const std::string &path);
Dataset read_dataset(std::istream &in);
Dataset read_dataset(const std::string &path);

/// Long-format CSV: run,cycle,qubit,m,declared,I,truth_state plus data readout rows.
void write_dataset_csv(const Dataset &dataset, const Layout &layout, std::ostream &out);

/// Runs with indices in [begin, end) in a fresh dataset sharing the header.
/// Per-run, per-tracked-qubit, per-cycle filter posteriors with a self-describing header.
struct TraceFile {
    nlohmann::json header;
    std::vector<std::vector<std::vector<float>>> traces;
};

void write_traces(const TraceFile &file, std::ostream &out);
void write_traces(const TraceFile &file, const std::string &path);
TraceFile read_traces(std::istream &in);
TraceFile read_traces(const std::string &path);

Dataset slice(const Dataset &dataset, size_t begin, size_t end);

/// Applies fn(index) for index in [0, count) over worker threads.
void parallel_for(size_t count, size_t workers, const std::function<void(size_t)> &fn);

}  // namespace leakmon

#endif
