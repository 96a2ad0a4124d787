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

#include "leakmon/hmm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "leakmon/serialize.h"

namespace leakmon {

namespace {

constexpr double NEG_INF = -std::numeric_limits<double>::infinity();

double safe_log(double v) {
    return v > 0 ? std::log(v) : NEG_INF;
}

double log_add(double a, double b) {
    if (a == NEG_INF) {
        return b;
    }
    if (b == NEG_INF) {
        return a;
    }
    double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

TransitionMatrix build_transition(const TransitionRates &rates) {
    double cl = rates.gamma_cl;
    double lc = rates.gamma_lc;
    if (!(cl >= 0 && cl <= 1 && lc >= 0 && lc <= 1)) {
        throw std::domain_error("transition rates must lie in [0, 1]");
    }
    return TransitionMatrix{{{1 - cl, lc}, {cl, 1 - lc}}};
}

std::array<double, 2> log_emission(const Observation &obs, const HmmModel &model) {
    if (obs.defects.size() != model.emissions.size()) {
        throw std::invalid_argument("observation does not match the model's neighbor set");
    }
    std::array<double, 2> out{0, 0};
    for (size_t i = 0; i < obs.defects.size(); i++) {
        int8_t d = obs.defects[i];
        if (d < 0) {
            continue;
        }
        const auto &e = model.emissions[i];
        out[0] += safe_log(d ? e.p_c : 1 - e.p_c);
        out[1] += safe_log(d ? e.p_l : 1 - e.p_l);
    }
    if (model.use_analog && obs.has_analog) {
        // Shared Gaussian normalization cancels in the posterior.
        double l0 = model.iq.log_density(0, obs.analog);
        double l1 = model.iq.log_density(1, obs.analog);
        double l2 = model.iq.log_density(2, obs.analog);
        double mix = log_add(l0, l1);
        if (model.rule == AnalogRule::NormalizedMixture) {
            mix -= std::log(2.0);
        }
        out[0] += mix;
        out[1] += l2;
    }
    return out;
}

double forward_update(double prev_leak, const Observation &obs, const HmmModel &model) {
    double prior_l = model.A[1][0] * (1 - prev_leak) + model.A[1][1] * prev_leak;
    double prior_c = model.A[0][0] * (1 - prev_leak) + model.A[0][1] * prev_leak;
    auto le = log_emission(obs, model);
    double lc = safe_log(prior_c) + le[0];
    double ll = safe_log(prior_l) + le[1];
    if (lc == NEG_INF && ll == NEG_INF) {
        throw std::runtime_error("numeric degeneracy: observation has zero likelihood in both states");
    }
    if (ll == NEG_INF) {
        return 0;
    }
    if (lc == NEG_INF) {
        return 1;
    }
    return 1 / (1 + std::exp(lc - ll));
}

Observation observe(const Layout &layout, const RunRecord &record, const DefectStream &defects, size_t cycle,
                    const HmmModel &model) {
    Observation obs;
    obs.defects.resize(model.emissions.size());
    for (size_t i = 0; i < model.emissions.size(); i++) {
        size_t c = model.emissions[i].check;
        bool unobserved = layout.checks[c].type == CheckType::X && cycle < 2;
        obs.defects[i] = unobserved ? -1 : (int8_t)defects.at(cycle, c);
    }
    if (model.use_analog) {
        obs.has_analog = true;
        obs.analog = record.I(cycle, model.analog_check);
    }
    return obs;
}

std::vector<DefectEmission> calibrate_emissions(
    const Dataset &dataset, const Layout &layout, size_t qubit, const HmmOptions &options) {
    auto tracked = layout.tracked_qubits();
    auto it = std::find(tracked.begin(), tracked.end(), qubit);
    if (it == tracked.end()) {
        throw std::domain_error("emissions requested for an untracked qubit");
    }
    size_t t = (size_t)(it - tracked.begin());
    auto checks = neighbor_observables(layout, qubit);
    size_t k = checks.size();
    std::vector<double> ones_all(k, 0), n_all(k, 0), ones_leak(k, 0), n_leak(k, 0);
    for (const auto &run : dataset.runs) {
        auto defects = compute_defects(layout, run);
        for (size_t n = 0; n < run.n_cycles; n++) {
            bool leaked = run.leaked(n, t);
            for (size_t i = 0; i < k; i++) {
                size_t c = checks[i];
                if (layout.checks[c].type == CheckType::X && n < 2) {
                    continue;
                }
                double d = defects.at(n, c);
                ones_all[i] += d;
                n_all[i] += 1;
                if (leaked) {
                    ones_leak[i] += d;
                    n_leak[i] += 1;
                }
            }
        }
    }
    double fallback = layout.is_data(qubit) ? options.data_leaked_prior : options.ancilla_leaked_prior;
    std::vector<DefectEmission> out;
    for (size_t i = 0; i < k; i++) {
        DefectEmission e;
        e.check = checks[i];
        e.p_c = n_all[i] > 0 ? ones_all[i] / n_all[i] : 0;
        e.p_l = n_leak[i] > 0 ? ones_leak[i] / n_leak[i] : fallback;
        out.push_back(e);
    }
    return out;
}

std::vector<HmmModel> calibrate_models(
    const Dataset &dataset, const Layout &layout, const SimParams &params, const HmmOptions &options) {
    std::vector<HmmModel> models;
    for (size_t q : layout.tracked_qubits()) {
        HmmModel m;
        m.qubit = q;
        m.A = build_transition(transition_rates(layout, q, params.leakage, params.coherence));
        m.emissions = calibrate_emissions(dataset, layout, q, options);
        if (!layout.is_data(q) && options.use_analog) {
            m.use_analog = true;
            m.analog_check = layout.check_of_ancilla[q];
            m.iq = params.iq;
            m.rule = options.rule;
        }
        models.push_back(std::move(m));
    }
    return models;
}

FilterTrace filter_qubit(const Layout &layout, const RunRecord &record, const DefectStream &defects,
                         const HmmModel &model) {
    FilterTrace trace(record.n_cycles);
    double p = model.initial_leak;
    for (size_t n = 0; n < record.n_cycles; n++) {
        p = forward_update(p, observe(layout, record, defects, n, model), model);
        trace[n] = (float)p;
    }
    return trace;
}

std::vector<FilterTrace> filter_run(const Layout &layout, const RunRecord &record,
                                    const std::vector<HmmModel> &models) {
    auto defects = compute_defects(layout, record);
    std::vector<FilterTrace> out;
    out.reserve(models.size());
    for (const auto &m : models) {
        out.push_back(filter_qubit(layout, record, defects, m));
    }
    return out;
}

std::vector<std::vector<FilterTrace>> filter_dataset(
    const Dataset &dataset, const Layout &layout, const std::vector<HmmModel> &models, size_t workers) {
    std::vector<std::vector<FilterTrace>> out(dataset.size());
    parallel_for(dataset.size(), workers, [&](size_t r) {
        out[r] = filter_run(layout, dataset.runs[r], models);
    });
    return out;
}

void to_json(nlohmann::json &j, const HmmModel &m) {
    nlohmann::json em = nlohmann::json::array();
    for (const auto &e : m.emissions) {
        em.push_back({{"check", e.check}, {"p_c", e.p_c}, {"p_l", e.p_l}});
    }
    j = {{"qubit", m.qubit},
         {"A", m.A},
         {"emissions", em},
         {"use_analog", m.use_analog},
         {"analog_check", m.analog_check},
         {"iq", m.iq},
         {"rule", m.rule == AnalogRule::NormalizedMixture ? "normalized" : "unnormalized"},
         {"initial_leak", m.initial_leak}};
}

void from_json(const nlohmann::json &j, HmmModel &m) {
    m.qubit = j.at("qubit").get<size_t>();
    m.A = j.at("A").get<TransitionMatrix>();
    m.emissions.clear();
    for (const auto &e : j.at("emissions")) {
        m.emissions.push_back({e.at("check").get<size_t>(), e.at("p_c").get<double>(), e.at("p_l").get<double>()});
    }
    m.use_analog = j.at("use_analog").get<bool>();
    m.analog_check = j.at("analog_check").get<size_t>();
    m.iq = j.at("iq").get<IqModel>();
    m.rule = j.at("rule").get<std::string>() == "normalized" ? AnalogRule::NormalizedMixture
                                                              : AnalogRule::UnnormalizedSum;
    m.initial_leak = j.value("initial_leak", 0.0);
}

}  // namespace leakmon
