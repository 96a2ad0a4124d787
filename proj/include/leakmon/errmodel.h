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

#ifndef _LEAKMON_ERRMODEL_H
#define _LEAKMON_ERRMODEL_H

#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "leakmon/lattice.h"

namespace leakmon {

enum class PhaseMode { Fixed, RandomPerPairPerRun, ConstrainedRandom };

struct LeakageParams {
    /// Leakage probability per CZ (flux side leaks).
    double L1 = 0.00125;
    /// Probability per CZ that a leaked excitation hops to the partner.
    double Lm = 0;
    /// Superleakage probability per CZ.
    double L3 = 0;
    bool include_L3 = false;
    PhaseMode phase_mode = PhaseMode::RandomPerPairPerRun;
    /// Used in Fixed mode.
    double phi_stat = std::numbers::pi;
    double phi_flux = 0;

    void validate() const;
};

struct CoherenceParams {
    double T1_us = 30;
    double Tphi_sweet_us = 60;
    /// Dephasing during the CZ interaction window, indexed by FrequencyRole.
    double Tphi_int_us[3] = {60, 6, 8};
    /// Dephasing while parked during a CZ layer, indexed by FrequencyRole.
    double Tphi_park_us[3] = {9, 8, 60};
    Timing timing;
    /// When false no Pauli errors are drawn (leakage dynamics still apply).
    bool damping = true;

    void validate() const;
};

struct TwirledPauliChannel {
    double pX = 0;
    double pY = 0;
    double pZ = 0;

    double total() const {
        return pX + pY + pZ;
    }
};

struct TransitionRates {
    double gamma_cl = 0;
    double gamma_lc = 0;
    double gamma_l2l3 = 0;
    double gamma_l3l2 = 0;
};

struct LeakagePhases {
    /// Phase picked up by the partner when the flux side is leaked.
    double stat = 0;
    /// Phase picked up by the partner when the static side is leaked.
    double flux = 0;
};

/// Pauli twirl of amplitude damping followed by pure dephasing.
TwirledPauliChannel twirl_damping(double t_ns, double T1_us, double Tphi_us);

/// Sequential application of two Pauli channels.
TwirledPauliChannel compose(const TwirledPauliChannel &a, const TwirledPauliChannel &b);

/// Probability of a Z flip in the Pauli twirl of Rz(phi).
double phase_flip_prob(double phi);

/// Per-cycle transition probabilities of a tracked qubit.
TransitionRates transition_rates(
    const Layout &layout, size_t qubit, const LeakageParams &leakage, const CoherenceParams &coherence);

/// Probability per cycle that a qubit in L2 relaxes to the computational subspace.
double relaxation_seepage_l2(const CoherenceParams &coherence);
/// Probability per cycle that a qubit in L3 relaxes to L2.
double relaxation_seepage_l3(const CoherenceParams &coherence);

LeakagePhases sample_leakage_phases(const LeakageParams &params, std::mt19937_64 &rng);

/// One phase pair per ordered CZ pair, drawn once for a whole run.
std::vector<LeakagePhases> sample_phase_table(const LeakageParams &params, size_t num_pairs, std::mt19937_64 &rng);

}  // namespace leakmon

#endif
