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

#ifndef _LEAKMON_DECODER_H
#define _LEAKMON_DECODER_H

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "leakmon/dataset.h"
#include "leakmon/lattice.h"
#include "leakmon/sim.h"
#include "json.hpp"

namespace leakmon {

constexpr size_t BOUNDARY = std::numeric_limits<size_t>::max();

/// Detector index = round * num_z_checks + z-check position. Rounds 0..n-1 are the
/// measured Z checks; round n is the layer derived from the final data readout.
struct DetectorLayout {
    std::vector<size_t> z_checks;
    size_t n_cycles = 0;

    size_t num_rounds() const {
        return n_cycles + 1;
    }
    size_t num_detectors() const {
        return num_rounds() * z_checks.size();
    }
};

DetectorLayout detector_layout(const Layout &layout, size_t n_cycles);

/// Detector bits of a run stopped after n_cycles.
std::vector<uint8_t> extract_detectors(
    const Layout &layout, const RunRecord &record, const DefectStream &defects, size_t n_cycles);

/// Parity of the final data readout over the logical Z operator.
uint8_t readout_logical(const Layout &layout, const RunRecord &record, size_t n_cycles);

struct CandidateEdge {
    size_t u;
    /// BOUNDARY for a boundary edge.
    size_t v;
    bool logical;
};

/// Candidate edges for every truncation length 1..max_cycles, derived by injecting each
/// single-qubit Pauli at every slot of a noiseless run.
struct EdgeCatalog {
    size_t max_cycles = 0;
    /// Indexed by n_cycles (entry 0 unused).
    std::vector<std::vector<CandidateEdge>> edges;
    /// Faults that produced more than two detectors or conflicting logical effects.
    size_t irregular = 0;
};

EdgeCatalog enumerate_fault_edges(const Layout &layout, size_t max_cycles);

struct GraphEdge {
    size_t u;
    size_t v;
    double p;
    double weight;
    bool logical;
};

struct DefectGraph {
    size_t num_nodes = 0;
    std::vector<GraphEdge> edges;
    /// All-pairs shortest paths over nodes + boundary, in quantized weight units.
    std::vector<int64_t> dist;
    std::vector<uint8_t> parity;

    void finalize();
    size_t boundary_index() const {
        return num_nodes;
    }
    int64_t distance(size_t a, size_t b) const;
    uint8_t path_parity(size_t a, size_t b) const;
};

constexpr double WEIGHT_SCALE = 1e4;

double edge_weight(double p);

struct EdgeEstimate {
    std::vector<double> p;
    size_t clipped = 0;
};

/// Correlation estimate of independent XOR-edge probabilities. samples[k] holds the detector
/// bits of one shot.
EdgeEstimate estimate_edge_probs(
    const std::vector<CandidateEdge> &edges,
    size_t num_nodes,
    const std::vector<std::vector<uint8_t>> &samples,
    double floor = 1e-6);

DefectGraph build_graph(size_t num_nodes, const std::vector<CandidateEdge> &edges, const std::vector<double> &p);

struct Matching {
    /// (a, b) with a < b, b == BOUNDARY for boundary matches; sorted.
    std::vector<std::pair<size_t, size_t>> pairs;
    int64_t weight = 0;
    uint8_t parity = 0;
};

/// Exact minimum-weight perfect matching of the defect set, the boundary absorbing any subset.
Matching mwpm(const DefectGraph &graph, std::vector<size_t> defects);

struct LogicalResult {
    uint8_t logical = 0;
    Matching matching;
};

LogicalResult decode_detectors(const DefectGraph &graph, const std::vector<uint8_t> &detectors, uint8_t observed);

/// Trained graphs for every truncation length.
struct Decoder {
    std::vector<DefectGraph> graphs;
    size_t clipped = 0;

    size_t max_cycles() const {
        return graphs.empty() ? 0 : graphs.size() - 1;
    }
};

/// Trains edge weights on a leakage-free dataset.
Decoder train_decoder(const Layout &layout, const Dataset &leakage_free, const EdgeCatalog &catalog, double floor = 1e-6);

LogicalResult decode_run(const Layout &layout, const Decoder &decoder, const RunRecord &record, size_t n_cycles);

/// success[run][n-1] = declared logical equals the prepared state after n cycles.
using SuccessTable = std::vector<std::vector<uint8_t>>;

SuccessTable decode_dataset(const Layout &layout, const Decoder &decoder, const Dataset &dataset, size_t workers);

nlohmann::json decoder_to_json(const Decoder &decoder);
Decoder decoder_from_json(const nlohmann::json &j);

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitResult {
    double eps = 0;
    double n0 = 0;
    double eps_lo = 0;
    double eps_hi = 0;
    double n0_lo = 0;
    double n0_hi = 0;
    double rms = 0;
};

/// Least-squares fit of F(n) = (1 + (1 - 2 eps)^(n - n0)) / 2.
FitResult fit_error_rate(const std::vector<double> &cycles, const std::vector<double> &fidelity);

/// Mean success per truncation over the selected runs (all runs when empty).
std::vector<double> fidelity_curve(const SuccessTable &success, const std::vector<size_t> &runs = {});

/// Fit with a bootstrap over runs for confidence intervals.
FitResult fit_with_bootstrap(
    const SuccessTable &success, const std::vector<size_t> &runs, size_t n_boot, uint64_t seed, size_t first_cycle = 1);

}  // namespace leakmon

#endif
