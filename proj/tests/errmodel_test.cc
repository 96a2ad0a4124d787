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
#include <numbers>

#include "gtest/gtest.h"
#include "leakmon/oracle.h"

using namespace leakmon;

TEST(errmodel, twirl_matches_kraus_twirl) {
    for (double t : {10.0, 20.0, 40.0, 400.0, 800.0}) {
        for (double tphi : {6.0, 60.0}) {
            EXPECT_LT(twirl_compare(t, 30, tphi), 1e-12) << t << " " << tphi;
        }
    }
}

TEST(errmodel, twirl_zero_duration_is_identity) {
    auto ch = twirl_damping(0, 30, 60);
    EXPECT_EQ(ch.total(), 0);
}

TEST(errmodel, twirl_symmetric_in_x_and_y) {
    auto ch = twirl_damping(400, 30, 60);
    EXPECT_NEAR(ch.pX, ch.pY, 1e-15);
    EXPECT_GT(ch.pZ, 0);
}

TEST(errmodel, phase_flip_prob_matches_rz_twirl) {
    for (double phi = 0; phi < 2 * std::numbers::pi; phi += 0.3) {
        EXPECT_NEAR(phase_flip_prob(phi), twirl_rz_flip(phi), 1e-12);
    }
    EXPECT_NEAR(phase_flip_prob(std::numbers::pi), 1, 1e-15);
    EXPECT_EQ(phase_flip_prob(0), 0);
}

TEST(errmodel, compose_is_pauli_product) {
    TwirledPauliChannel a{0.01, 0.02, 0.03};
    TwirledPauliChannel b{0.04, 0.05, 0.06};
    auto c = compose(a, b);
    double ia = 1 - a.total();
    double ib = 1 - b.total();
    EXPECT_NEAR(c.pX, ia * b.pX + a.pX * ib + a.pY * b.pZ + a.pZ * b.pY, 1e-15);
    EXPECT_NEAR(c.pZ, ia * b.pZ + a.pZ * ib + a.pX * b.pY + a.pY * b.pX, 1e-15);
    auto id = compose(a, {});
    EXPECT_NEAR(id.pY, a.pY, 1e-15);
}

TEST(errmodel, transition_rates_scale_with_flux_count) {
    auto layout = build_surface17();
    LeakageParams leak;
    CoherenceParams coh;
    double seep = 1 - std::exp(-coh.timing.t_c / 1000 / (coh.T1_us / 2));
    for (size_t q : layout.tracked_qubits()) {
        auto r = transition_rates(layout, q, leak, coh);
        double n = (double)layout.flux_count[q];
        EXPECT_NEAR(r.gamma_cl, n * leak.L1, 1e-15);
        EXPECT_NEAR(r.gamma_lc, 2 * n * leak.L1 + seep, 1e-15);
        EXPECT_EQ(r.gamma_l2l3, 0);
    }
    EXPECT_EQ(layout.flux_count[layout.qubit_by_name("D4")], 4u);
    EXPECT_EQ(layout.flux_count[layout.qubit_by_name("D3")], 3u);
    EXPECT_THROW(transition_rates(layout, layout.qubit_by_name("D1"), leak, coh), std::domain_error);
}

TEST(errmodel, zero_leakage_gives_only_seepage) {
    auto layout = build_surface17();
    LeakageParams leak;
    leak.L1 = 0;
    auto r = transition_rates(layout, layout.qubit_by_name("D4"), leak, {});
    EXPECT_EQ(r.gamma_cl, 0);
    EXPECT_GT(r.gamma_lc, 0);
}

TEST(errmodel, constrained_phases_sum_to_pi) {
    LeakageParams p;
    p.phase_mode = PhaseMode::ConstrainedRandom;
    std::mt19937_64 rng(3);
    for (auto ph : sample_phase_table(p, 50, rng)) {
        EXPECT_NEAR(ph.stat + ph.flux, std::numbers::pi, 1e-12);
    }
    p.phase_mode = PhaseMode::Fixed;
    p.phi_stat = 0.25;
    p.phi_flux = 1.5;
    auto fixed = sample_leakage_phases(p, rng);
    EXPECT_EQ(fixed.stat, 0.25);
    EXPECT_EQ(fixed.flux, 1.5);
}

TEST(errmodel, random_phases_are_uniform) {
    LeakageParams p;
    std::mt19937_64 rng(5);
    double mean = 0;
    auto table = sample_phase_table(p, 20000, rng);
    for (auto ph : table) {
        ASSERT_GE(ph.stat, 0);
        ASSERT_LT(ph.stat, 2 * std::numbers::pi);
        mean += ph.stat;
    }
    EXPECT_NEAR(mean / (double)table.size(), std::numbers::pi, 0.05);
}

TEST(errmodel, validate_rejects_bad_probabilities) {
    LeakageParams p;
    p.L1 = -0.1;
    EXPECT_THROW(p.validate(), std::exception);
    p.L1 = 1.5;
    EXPECT_THROW(p.validate(), std::exception);
    CoherenceParams c;
    c.T1_us = 0;
    EXPECT_THROW(c.validate(), std::exception);
}
