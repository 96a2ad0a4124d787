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

#ifndef _LEAKMON_HMM_H
#define _LEAKMON_HMM_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "leakmon/dataset.h"
#include "leakmon/errmodel.h"
#include "leakmon/lattice.h"
#include "leakmon/readout.h"
#include "leakmon/sim.h"

namespace leakmon {

/// A[s][s'] = P(s[n] = s | s[n-1] = s'); index 0 is computational, 1 is leaked.
using TransitionMatrix = std::array<std::array<double, 2>, 2>;

enum class AnalogRule {
    /// B(I|C) = (N0 + N1) / 2.
    NormalizedMixture,
    /// B(I|C) = N0 + N1.
    UnnormalizedSum,
};

struct DefectEmission {
    size_t check;
    /// P(d = 1 | computational).
    double p_c;
    /// P(d = 1 | leaked).
    double p_l;
};

struct HmmModel {
    size_t qubit = 0;
    TransitionMatrix A{{{1, 0}, {0, 1}}};
    std::vector<DefectEmission> emissions;
    bool use_analog = false;
    /// Check whose ancilla response feeds the analog channel.
    size_t analog_check = 0;
    IqModel iq;
    AnalogRule rule = AnalogRule::NormalizedMixture;
    /// Leakage probability before the first cycle.
    double initial_leak = 0;
};

struct HmmOptions {
    bool use_analog = true;
    AnalogRule rule = AnalogRule::NormalizedMixture;
    /// B(d=1|L) used for ancilla observables when no leaked cycles are available.
    double ancilla_leaked_prior = 0.3;
    /// B(d=1|L) used for data observables when no leaked cycles are available.
    double data_leaked_prior = 0.5;
};

/// Observation at one cycle. Defect entries are 0, 1 or -1 (not observed).
struct Observation {
    std::vector<int8_t> defects;
    bool has_analog = false;
    double analog = 0;
};

/// Posterior leakage probability per cycle.
using FilterTrace = std::vector<float>;

TransitionMatrix build_transition(const TransitionRates &rates);

/// One forward step: prior propagation followed by the Bayes update. Returns P(L).
double forward_update(double prev_leak, const Observation &obs, const HmmModel &model);

/// Log likelihoods (computational, leaked) of an observation.
std::array<double, 2> log_emission(const Observation &obs, const HmmModel &model);

/// Observation seen by the model at a cycle of a run.
Observation observe(const Layout &layout, const RunRecord &record, const DefectStream &defects, size_t cycle,
                    const HmmModel &model);

/// Emission tables for one tracked qubit from ground-truth labelled data.
std::vector<DefectEmission> calibrate_emissions(
    const Dataset &dataset, const Layout &layout, size_t qubit, const HmmOptions &options = {});

/// Calibrated models for every tracked qubit, in tracked order.
std::vector<HmmModel> calibrate_models(
    const Dataset &dataset, const Layout &layout, const SimParams &params, const HmmOptions &options = {});

/// Filters one qubit over one run.
FilterTrace filter_qubit(const Layout &layout, const RunRecord &record, const DefectStream &defects,
                         const HmmModel &model);

/// Filters every model over one run, independently per qubit.
std::vector<FilterTrace> filter_run(const Layout &layout, const RunRecord &record,
                                    const std::vector<HmmModel> &models);

/// Traces for a whole dataset, [run][model] -> per-cycle posterior.
std::vector<std::vector<FilterTrace>> filter_dataset(
    const Dataset &dataset, const Layout &layout, const std::vector<HmmModel> &models, size_t workers = 1);

void to_json(nlohmann::json &j, const HmmModel &m);
void from_json(const nlohmann::json &j, HmmModel &m);

}  // namespace leakmon

#endif
