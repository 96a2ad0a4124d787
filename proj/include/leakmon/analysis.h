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

#ifndef _LEAKMON_ANALYSIS_H
#define _LEAKMON_ANALYSIS_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "leakmon/dataset.h"
#include "leakmon/decoder.h"
#include "leakmon/errmodel.h"
#include "leakmon/hmm.h"
#include "leakmon/lattice.h"

namespace leakmon {

/// HMM posteriors, [run][tracked qubit][cycle].
using Traces = std::vector<std::vector<FilterTrace>>;

/// Flattened (score, ground truth) pairs for one qubit.
struct Scored {
    std::vector<float> score;
    std::vector<uint8_t> truth;

    size_t positives() const;
};

Scored collect_scores(const Dataset &dataset, const Traces &traces, size_t tracked, const std::vector<size_t> &runs = {});

/// Fraction of flagged cycles (score > threshold) that are leaked; absent when nothing is flagged.
std::optional<double> precision(const std::vector<float> &score, const std::vector<uint8_t> &truth, double threshold);
/// Fraction of leaked cycles that are flagged; absent when nothing is leaked.
std::optional<double> recall(const std::vector<float> &score, const std::vector<uint8_t> &truth, double threshold);

struct PrPoint {
    double threshold;
    double recall;
    double precision;
};

struct PrCurve {
    /// Ordered by increasing recall (decreasing threshold).
    std::vector<PrPoint> points;
    double auc = 0;
};

PrCurve pr_curve(const Scored &scored);

/// Area under the PR curve relative to the ideal predictor; absent without leaked cycles.
std::optional<double> optimality(const PrCurve &curve, const Scored &scored);
std::optional<double> optimality(const Scored &scored);

struct EventWindow {
    size_t run;
    /// First cycle above threshold.
    size_t onset;
};

/// Windows where a series stays at or below the threshold for k_below cycles and then above it for k_above.
std::vector<EventWindow> select_events(
    const std::vector<std::vector<double>> &series, double threshold, size_t k_below, size_t k_above);

struct ResponseCurve {
    std::vector<int> offsets;
    std::vector<double> mean;
    std::vector<double> lo;
    std::vector<double> hi;
    size_t events = 0;
};

/// Mean of the series around each onset, offsets [-before, after), with a 95% bootstrap interval.
ResponseCurve average_response(
    const std::vector<std::vector<double>> &series,
    const std::vector<EventWindow> &events,
    size_t before,
    size_t after,
    size_t n_boot = 200,
    uint64_t seed = 1);

/// Ground-truth leakage indicator of one tracked qubit, [run][cycle].
std::vector<std::vector<double>> truth_series(const Dataset &dataset, size_t tracked);
/// HMM posterior of one tracked qubit, [run][cycle].
std::vector<std::vector<double>> trace_series(const Traces &traces, size_t tracked);

/// Defect probability of every neighbor check aligned to leakage onsets of a tracked qubit.
std::map<size_t, ResponseCurve> defect_rate_around_events(
    const Dataset &dataset,
    const Layout &layout,
    size_t tracked,
    size_t k_below = 3,
    size_t k_above = 5,
    size_t before = 3,
    size_t after = 8);

/// entry[q][q'] = mean posterior of q' one cycle after leakage onsets of q (NaN without onsets).
std::vector<std::vector<double>> crosstalk_matrix(const Dataset &dataset, const Traces &traces);

struct BudgetEntry {
    size_t tracked;
    std::optional<double> all_runs;
    std::optional<double> no_ancilla_leak;
    std::optional<double> no_other_leak;
    size_t runs_a = 0;
    size_t runs_b = 0;
    size_t runs_c = 0;
};

/// Data-qubit optimality over all runs (A), runs free of ancilla leakage (B), and runs also free of
/// leakage on other data qubits (C).
std::vector<BudgetEntry> optimality_budget(const Dataset &dataset, const Layout &layout, const Traces &traces);

/// Emulates an ancilla pi pulse every other cycle, undone in post-processing: declared outcomes of a
/// leaked ancilla are flipped on cycles with odd cumulative pulse parity.
Dataset pi_pulse_postprocess(const Dataset &dataset, const Layout &layout);

/// Pulse parity accumulated before the measurement of a cycle.
bool pi_pulse_parity(size_t cycle);

/// Per-run maximum posterior, [run][tracked].
std::vector<std::vector<float>> run_maxima(const Traces &traces);
/// Per-run ground-truth leakage indicator (1 if ever leaked), [run][tracked].
std::vector<std::vector<float>> truth_maxima(const Dataset &dataset);

struct Selection {
    double discarded = 0;
    std::vector<size_t> survivors;
};

/// Discards every run in which some qubit reaches its threshold.
Selection postselect(const std::vector<std::vector<float>> &maxima, const std::vector<double> &thresholds);

struct GaConfig {
    size_t population = 64;
    size_t generations = 100;
    double crossover_prob = 0.9;
    double eta_crossover = 15;
    double eta_mutation = 20;
    /// Per-gene mutation probability; negative means 1 / number of genes.
    double mutation_prob = -1;
    double threshold_min = 0.02;
    double threshold_max = 1.0;
    size_t min_survivors = 100;
    size_t n_boot = 100;
    size_t first_cycle = 1;
    uint64_t seed = 1;
    size_t workers = 1;

    void validate() const;
};

struct ParetoPoint {
    std::vector<double> thresholds;
    double discarded = 0;
    double eps = 0;
    double eps_lo = 0;
    double eps_hi = 0;
    size_t survivors = 0;
};

/// Logical error rate of the surviving runs; 0.5 when the fit fails or too few runs survive.
double selection_error_rate(const SuccessTable &success, const std::vector<size_t> &survivors, const GaConfig &config);

/// NSGA-II over per-qubit thresholds minimizing (discarded fraction, logical error rate).
std::vector<ParetoPoint> pareto_front(
    const SuccessTable &success, const std::vector<std::vector<float>> &maxima, const GaConfig &config);

/// True when a is at least as good as b in both objectives and better in one.
bool dominates(const ParetoPoint &a, const ParetoPoint &b);

struct SteadyState {
    double p_c = 1;
    double p_l2 = 0;
    double p_l3 = 0;

    double p_l() const {
        return p_l2 + p_l3;
    }
};

SteadyState steady_state(const TransitionRates &rates);

/// Leaked population after n cycles starting from the computational subspace, n = 1..n_cycles.
std::vector<double> leak_evolution(const TransitionRates &rates, size_t n_cycles);

struct PopulationCurve {
    std::vector<double> mean;
    std::vector<double> lo;
    std::vector<double> hi;
};

/// Empirical leaked fraction per cycle with a 95% bootstrap interval over runs.
PopulationCurve leak_population(const Dataset &dataset, size_t tracked, size_t n_boot = 200, uint64_t seed = 1);

/// Effective exchange coupling of the second-excited manifold, in the units of the inputs.
double effective_coupling(double j1, double anharmonicity);

}  // namespace leakmon

#endif
