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


#include "leakmon/oracle.h"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

using namespace leakmon;

TEST(oracle, leaky_cz_is_unitary) {
    for (double phi : {0.0, 0.4, std::numbers::pi}) {
        auto u = cz_leaky(phi);
        ASSERT_EQ(u.rows(), 6);
        EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(6, 6)).norm(), 1e-12);
    }
}

TEST(oracle, effective_paulis_on_computational_block) {
    auto z = tilde_z(0.7);
    auto x = tilde_x(0.7);
    Eigen::Matrix2cd pz;
    pz << 1, 0, 0, -1;
    Eigen::Matrix2cd px;
    px << 0, 1, 1, 0;
    EXPECT_LT((z.topLeftCorner(2, 2) - pz).norm(), 1e-12);
    EXPECT_LT((x.topLeftCorner(2, 2) - px).norm(), 1e-12);
    auto h = qutrit_hadamard();
    EXPECT_NEAR(std::abs(h(2, 2)), 1, 1e-12);
}

TEST(oracle, algebra_norms) {
    for (double phi : {0.0, 0.3, 1.9, std::numbers::pi}) {
        auto a = anticommutation_checks(phi);
        EXPECT_LT(a.anticommutator_c, 1e-12);
        EXPECT_LT(a.commutator_l, 1e-12);
        EXPECT_LT(a.check_anticommutator_la, 1e-12);
    }
    auto at0 = anticommutation_checks(0);
    EXPECT_LT(at0.projector_defect_x, 1e-12);
    EXPECT_LT(at0.projector_defect_z, 1e-12);
    EXPECT_GT(anticommutation_checks(0.7).projector_defect_x, 0.1);
}

TEST(oracle, register_projection) {
    MixedRegister reg({2, 3});
    reg.set_basis({0, 0});
    Eigen::MatrixXcd h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    reg.apply1(0, h);
    EXPECT_NEAR(reg.norm(), 1, 1e-12);
    MixedRegister copy = reg;
    EXPECT_NEAR(copy.project(0, 1), 0.5, 1e-12);
    EXPECT_NEAR(reg.project(0, 0), 0.5, 1e-12);
    EXPECT_THROW(MixedRegister(std::vector<size_t>(13, 2)), std::exception);
}

TEST(oracle, plaquette_statistics) {
    auto s0 = plaquette_outcome_distribution(0);
    EXPECT_NEAR(s0.total_probability, 1, 1e-9);
    EXPECT_NEAR(s0.z_supercheck_defect, 0, 1e-9);
    EXPECT_NEAR(s0.z_gauge_defect[0], 0.5, 1e-9);
    auto s = plaquette_outcome_distribution(std::numbers::pi / 2);
    EXPECT_NEAR(s.total_probability, 1, 1e-9);
    EXPECT_NEAR(s.z_supercheck_defect, 0.5, 1e-9);
    EXPECT_NEAR(s.x_gauge_defect[1], 0.5, 1e-9);
}

TEST(oracle, twirls) {
    std::vector<Eigen::Matrix2cd> id{Eigen::Matrix2cd::Identity()};
    auto p = pauli_twirl(id);
    EXPECT_NEAR(p[0], 1, 1e-15);
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    auto px = pauli_twirl({x});
    EXPECT_NEAR(px[1], 1, 1e-15);
    auto kraus = damping_kraus(400, 30, 60);
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    for (const auto &k : kraus) {
        sum += k.adjoint() * k;
    }
    EXPECT_LT((sum - Eigen::Matrix2cd::Identity()).norm(), 1e-12);
    EXPECT_NEAR(twirl_rz_flip(std::numbers::pi / 2), 0.5, 1e-12);
}

TEST(oracle, brute_force_matching_small) {
    // Nodes 0,1 close; 2 near the boundary.
    auto pair = [](size_t a, size_t b) { return (a + b == 1) ? 1.0 : 10.0; };
    auto boundary = [](size_t a) { return a == 2 ? 2.0 : 5.0; };
    EXPECT_EQ(brute_force_matching_weight(3, pair, boundary), 3.0);
    EXPECT_EQ(brute_force_matching_weight(0, pair, boundary), 0.0);
}

TEST(oracle, hmm_single_step) {
    HmmModel m;
    m.A = {{{0.995, 0.062}, {0.005, 0.938}}};
    m.emissions = {{0, 0.05, 0.5}};
    Observation o;
    o.defects = {1};
    auto post = hmm_brute_force(m, {o});
    ASSERT_EQ(post.size(), 1u);
    EXPECT_NEAR(post[0], 0.5 * 0.005 / (0.5 * 0.005 + 0.05 * 0.995), 1e-12);
}
