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

#include "leakmon/serialize.h"

#include <stdexcept>
#include <string>

namespace leakmon {

namespace {

template <typename T>
void read_opt(const nlohmann::json &j, const char *key, T &dst) {
    if (j.contains(key)) {
        dst = j.at(key).get<T>();
    }
}

const char *phase_mode_name(PhaseMode m) {
    switch (m) {
        case PhaseMode::Fixed:
            return "fixed";
        case PhaseMode::RandomPerPairPerRun:
            return "random_per_pair_per_run";
        case PhaseMode::ConstrainedRandom:
            return "constrained_random";
    }
    return "";
}

PhaseMode parse_phase_mode(const std::string &s) {
    if (s == "fixed") {
        return PhaseMode::Fixed;
    }
    if (s == "random_per_pair_per_run") {
        return PhaseMode::RandomPerPairPerRun;
    }
    if (s == "constrained_random") {
        return PhaseMode::ConstrainedRandom;
    }
    throw std::invalid_argument("unknown phase_mode: " + s);
}

}  // namespace

void to_json(nlohmann::json &j, const Timing &v) {
    j = {{"t_single_ns", v.t_single},
         {"t_int_ns", v.t_int},
         {"t_cor_ns", v.t_cor},
         {"t_m_ns", v.t_m},
         {"t_c_ns", v.t_c}};
}

void from_json(const nlohmann::json &j, Timing &v) {
    read_opt(j, "t_single_ns", v.t_single);
    read_opt(j, "t_int_ns", v.t_int);
    read_opt(j, "t_cor_ns", v.t_cor);
    read_opt(j, "t_m_ns", v.t_m);
    read_opt(j, "t_c_ns", v.t_c);
}

void to_json(nlohmann::json &j, const LeakageParams &v) {
    j = {{"L1", v.L1},
         {"Lm", v.Lm},
         {"L3", v.L3},
         {"include_L3", v.include_L3},
         {"phase_mode", phase_mode_name(v.phase_mode)},
         {"phi_stat", v.phi_stat},
         {"phi_flux", v.phi_flux}};
}

void from_json(const nlohmann::json &j, LeakageParams &v) {
    read_opt(j, "L1", v.L1);
    read_opt(j, "Lm", v.Lm);
    read_opt(j, "L3", v.L3);
    read_opt(j, "include_L3", v.include_L3);
    if (j.contains("phase_mode")) {
        v.phase_mode = parse_phase_mode(j.at("phase_mode").get<std::string>());
    }
    read_opt(j, "phi_stat", v.phi_stat);
    read_opt(j, "phi_flux", v.phi_flux);
}

void to_json(nlohmann::json &j, const CoherenceParams &v) {
    j = {{"T1_us", v.T1_us},
         {"Tphi_sweet_us", v.Tphi_sweet_us},
         {"Tphi_int_us", {{"low", v.Tphi_int_us[0]}, {"mid", v.Tphi_int_us[1]}, {"high", v.Tphi_int_us[2]}}},
         {"Tphi_park_us", {{"low", v.Tphi_park_us[0]}, {"mid", v.Tphi_park_us[1]}, {"high", v.Tphi_park_us[2]}}},
         {"timing", v.timing},
         {"damping", v.damping}};
}

void from_json(const nlohmann::json &j, CoherenceParams &v) {
    read_opt(j, "T1_us", v.T1_us);
    read_opt(j, "Tphi_sweet_us", v.Tphi_sweet_us);
    const char *roles[3] = {"low", "mid", "high"};
    for (size_t k = 0; k < 3; k++) {
        if (j.contains("Tphi_int_us")) {
            read_opt(j.at("Tphi_int_us"), roles[k], v.Tphi_int_us[k]);
        }
        if (j.contains("Tphi_park_us")) {
            read_opt(j.at("Tphi_park_us"), roles[k], v.Tphi_park_us[k]);
        }
    }
    read_opt(j, "timing", v.timing);
    read_opt(j, "damping", v.damping);
}

void to_json(nlohmann::json &j, const IqModel &v) {
    j = {{"mu", v.mu}, {"sigma", v.sigma}};
}

void from_json(const nlohmann::json &j, IqModel &v) {
    read_opt(j, "mu", v.mu);
    read_opt(j, "sigma", v.sigma);
}

void to_json(nlohmann::json &j, const SimParams &v) {
    j = {{"leakage", v.leakage}, {"coherence", v.coherence}, {"iq", v.iq}};
}

void from_json(const nlohmann::json &j, SimParams &v) {
    read_opt(j, "leakage", v.leakage);
    read_opt(j, "coherence", v.coherence);
    read_opt(j, "iq", v.iq);
}

void to_json(nlohmann::json &j, const TransitionRates &v) {
    j = {{"gamma_cl", v.gamma_cl},
         {"gamma_lc", v.gamma_lc},
         {"gamma_l2l3", v.gamma_l2l3},
         {"gamma_l3l2", v.gamma_l3l2}};
}

void from_json(const nlohmann::json &j, TransitionRates &v) {
    read_opt(j, "gamma_cl", v.gamma_cl);
    read_opt(j, "gamma_lc", v.gamma_lc);
    read_opt(j, "gamma_l2l3", v.gamma_l2l3);
    read_opt(j, "gamma_l3l2", v.gamma_l3l2);
}

}  // namespace leakmon
