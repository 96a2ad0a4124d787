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

#include "leakmon/errmodel.h"

#include <cmath>
#include <stdexcept>

namespace leakmon {

void LeakageParams::validate() const {
    if (!(L1 >= 0 && L1 <= 0.25)) {
        throw std::domain_error("L1 must lie in [0, 0.25]");
    }
    if (!(Lm >= 0 && Lm <= 1) || !(L3 >= 0 && L3 <= 1)) {
        throw std::domain_error("Lm and L3 must lie in [0, 1]");
    }
}

void CoherenceParams::validate() const {
    bool ok = T1_us > 0 && Tphi_sweet_us > 0;
    for (size_t k = 0; k < 3; k++) {
        ok &= Tphi_int_us[k] > 0 && Tphi_park_us[k] > 0;
    }
    ok &= timing.t_single > 0 && timing.t_int > 0 && timing.t_cor >= 0 && timing.t_m > 0 && timing.t_c > 0;
    if (!ok) {
        throw std::domain_error("coherence times and durations must be positive");
    }
}

TwirledPauliChannel twirl_damping(double t_ns, double T1_us, double Tphi_us) {
    if (!(T1_us > 0) || !(Tphi_us > 0)) {
        throw std::domain_error("T1 and Tphi must be positive");
    }
    if (t_ns < 0) {
        throw std::domain_error("duration must be non-negative");
    }
    double t_us = t_ns * 1e-3;
    double gamma = -std::expm1(-t_us / T1_us);
    double coherence = std::sqrt(1 - gamma) * std::exp(-t_us / Tphi_us);
    TwirledPauliChannel ch;
    ch.pX = gamma / 4;
    ch.pY = gamma / 4;
    ch.pZ = std::max(0.0, (2 - gamma - 2 * coherence) / 4);
    return ch;
}

TwirledPauliChannel compose(const TwirledPauliChannel &a, const TwirledPauliChannel &b) {
    double a_i = 1 - a.total();
    double b_i = 1 - b.total();
    TwirledPauliChannel out;
    out.pX = a_i * b.pX + a.pX * b_i + a.pY * b.pZ + a.pZ * b.pY;
    out.pY = a_i * b.pY + a.pY * b_i + a.pX * b.pZ + a.pZ * b.pX;
    out.pZ = a_i * b.pZ + a.pZ * b_i + a.pX * b.pY + a.pY * b.pX;
    return out;
}

double phase_flip_prob(double phi) {
    double s = std::sin(phi / 2);
    return s * s;
}

double relaxation_seepage_l2(const CoherenceParams &coherence) {
    return -std::expm1(-coherence.timing.t_c * 1e-3 / (coherence.T1_us / 2));
}

double relaxation_seepage_l3(const CoherenceParams &coherence) {
    return -std::expm1(-coherence.timing.t_c * 1e-3 / (coherence.T1_us / 3));
}

TransitionRates transition_rates(
    const Layout &layout, size_t qubit, const LeakageParams &leakage, const CoherenceParams &coherence) {
    if (qubit >= layout.num_qubits() || !layout.is_tracked(qubit)) {
        throw std::domain_error("transition rates requested for an untracked qubit");
    }
    double n = (double)layout.flux_count[qubit];
    TransitionRates r;
    r.gamma_cl = n * leakage.L1;
    r.gamma_lc = n * 2 * leakage.L1 + relaxation_seepage_l2(coherence);
    if (leakage.include_L3) {
        r.gamma_l2l3 = n * leakage.L3 / 2;
        r.gamma_l3l2 = n * leakage.L3 / 2 + relaxation_seepage_l3(coherence);
    }
    return r;
}

LeakagePhases sample_leakage_phases(const LeakageParams &params, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
    switch (params.phase_mode) {
        case PhaseMode::Fixed:
            return {params.phi_stat, params.phi_flux};
        case PhaseMode::RandomPerPairPerRun: {
            double s = angle(rng);
            double f = angle(rng);
            return {s, f};
        }
        case PhaseMode::ConstrainedRandom: {
            double f = angle(rng);
            return {std::numbers::pi - f, f};
        }
    }
    return {};
}

std::vector<LeakagePhases> sample_phase_table(const LeakageParams &params, size_t num_pairs, std::mt19937_64 &rng) {
    std::vector<LeakagePhases> out;
    out.reserve(num_pairs);
    for (size_t k = 0; k < num_pairs; k++) {
        out.push_back(sample_leakage_phases(params, rng));
    }
    return out;
}

}  // namespace leakmon
