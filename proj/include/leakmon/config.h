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


#ifndef _LEAKMON_CONFIG_H
#define _LEAKMON_CONFIG_H

#include <cstddef>
#include <cstdint>
#include <string>

#include "json.hpp"
#include "leakmon/analysis.h"
#include "leakmon/hmm.h"
#include "leakmon/sim.h"

namespace leakmon {

/// Everything needed to reproduce a pipeline stage.
struct RunConfig {
    /// Only "surface17" is supported.
    std::string layout = "surface17";
    SimParams params;
    /// Readout fidelities used to build params.iq unless an explicit "iq" block is given.
    double f01 = 0.996;
    double f12 = 0.884;
    size_t n_runs = 40000;
    size_t n_cycles = 50;
    uint64_t seed = 1;
    size_t workers = 1;
    /// Runs in the leakage-free dataset used to train decoder weights.
    size_t training_runs = 10000;
    HmmOptions hmm;
    GaConfig ga;

    void validate() const;
    Layout build_layout() const;
};

void to_json(nlohmann::json &j, const HmmOptions &v);
void from_json(const nlohmann::json &j, HmmOptions &v);
void to_json(nlohmann::json &j, const GaConfig &v);
void from_json(const nlohmann::json &j, GaConfig &v);
void to_json(nlohmann::json &j, const RunConfig &v);
void from_json(const nlohmann::json &j, RunConfig &v);

RunConfig load_config(const std::string &path);

/// Config as JSON without fields that do not affect results (worker count).
nlohmann::json reproducible_config(const RunConfig &config);

/// Stable 64-bit FNV-1a hash of reproducible_config, as 16 hex digits.
std::string config_hash(const RunConfig &config);

/// Header block written into every output file.
nlohmann::json output_header(const RunConfig &config, const std::string &stage);

}  // namespace leakmon

#endif
