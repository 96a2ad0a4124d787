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


#include "leakmon/config.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "leakmon/dataset.h"
#include "leakmon/serialize.h"

namespace leakmon {

namespace {

template <typename T>
void read_opt(const nlohmann::json &j, const char *key, T &dst) {
    if (j.contains(key)) {
        dst = j.at(key).get<T>();
    }
}

}  // namespace

void to_json(nlohmann::json &j, const HmmOptions &v) {
    j = {{"use_analog", v.use_analog},
         {"unnormalized_emissions", v.rule == AnalogRule::UnnormalizedSum},
         {"ancilla_leaked_prior", v.ancilla_leaked_prior},
         {"data_leaked_prior", v.data_leaked_prior}};
}

void from_json(const nlohmann::json &j, HmmOptions &v) {
    read_opt(j, "use_analog", v.use_analog);
    bool literal = v.rule == AnalogRule::UnnormalizedSum;
    read_opt(j, "unnormalized_emissions", literal);
    v.rule = literal ? AnalogRule::UnnormalizedSum : AnalogRule::NormalizedMixture;
    read_opt(j, "ancilla_leaked_prior", v.ancilla_leaked_prior);
    read_opt(j, "data_leaked_prior", v.data_leaked_prior);
}

void to_json(nlohmann::json &j, const GaConfig &v) {
    j = {{"population", v.population},
         {"generations", v.generations},
         {"crossover_prob", v.crossover_prob},
         {"eta_crossover", v.eta_crossover},
         {"eta_mutation", v.eta_mutation},
         {"mutation_prob", v.mutation_prob},
         {"threshold_min", v.threshold_min},
         {"threshold_max", v.threshold_max},
         {"min_survivors", v.min_survivors},
         {"n_boot", v.n_boot},
         {"first_cycle", v.first_cycle},
         {"seed", v.seed}};
}

void from_json(const nlohmann::json &j, GaConfig &v) {
    read_opt(j, "population", v.population);
    read_opt(j, "generations", v.generations);
    read_opt(j, "crossover_prob", v.crossover_prob);
    read_opt(j, "eta_crossover", v.eta_crossover);
    read_opt(j, "eta_mutation", v.eta_mutation);
    read_opt(j, "mutation_prob", v.mutation_prob);
    read_opt(j, "threshold_min", v.threshold_min);
    read_opt(j, "threshold_max", v.threshold_max);
    read_opt(j, "min_survivors", v.min_survivors);
    read_opt(j, "n_boot", v.n_boot);
    read_opt(j, "first_cycle", v.first_cycle);
    read_opt(j, "seed", v.seed);
}

void to_json(nlohmann::json &j, const RunConfig &v) {
    j = {{"layout", v.layout},
         {"leakage", v.params.leakage},
         {"coherence", v.params.coherence},
         {"iq", v.params.iq},
         {"f01", v.f01},
         {"f12", v.f12},
         {"n_runs", v.n_runs},
         {"n_cycles", v.n_cycles},
         {"seed", v.seed},
         {"workers", v.workers},
         {"training_runs", v.training_runs},
         {"hmm", v.hmm},
         {"ga", v.ga}};
}

void from_json(const nlohmann::json &j, RunConfig &v) {
    static const std::vector<std::string> known{"layout", "leakage", "coherence", "iq", "f01", "f12", "n_runs",
                                                "n_cycles", "seed", "workers", "training_runs", "hmm", "ga"};
    for (const auto &[key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
    read_opt(j, "layout", v.layout);
    read_opt(j, "leakage", v.params.leakage);
    read_opt(j, "coherence", v.params.coherence);
    read_opt(j, "f01", v.f01);
    read_opt(j, "f12", v.f12);
    v.params.iq = build_model(v.f01, v.f12);
    read_opt(j, "iq", v.params.iq);
    read_opt(j, "n_runs", v.n_runs);
    read_opt(j, "n_cycles", v.n_cycles);
    read_opt(j, "seed", v.seed);
    read_opt(j, "workers", v.workers);
    read_opt(j, "training_runs", v.training_runs);
    read_opt(j, "hmm", v.hmm);
    read_opt(j, "ga", v.ga);
}

void RunConfig::validate() const {
    if (layout != "surface17") {
        throw std::invalid_argument("unsupported layout: " + layout);
    }
    params.validate();
    if (n_runs == 0 || n_cycles == 0) {
        throw std::invalid_argument("n_runs and n_cycles must be positive");
    }
    if (workers == 0) {
        throw std::invalid_argument("workers must be positive");
    }
    ga.validate();
}

Layout RunConfig::build_layout() const {
    return build_surface17(params.coherence.timing);
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config " + path);
    }
    RunConfig config = nlohmann::json::parse(in, nullptr, true, true).get<RunConfig>();
    config.validate();
    return config;
}

nlohmann::json reproducible_config(const RunConfig &config) {
    nlohmann::json j = config;
    j.erase("workers");
    return j;
}

std::string config_hash(const RunConfig &config) {
    nlohmann::json j = reproducible_config(config);
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

nlohmann::json output_header(const RunConfig &config, const std::string &stage) {
    return {{"stage", stage},
            {"schema_version", DATASET_SCHEMA_VERSION},
            {"seed", config.seed},
            {"config_hash", config_hash(config)},
            {"config", reproducible_config(config)}};
}

}  // namespace leakmon
