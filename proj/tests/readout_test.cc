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


#include "leakmon/readout.h"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "gtest/gtest.h"

using namespace leakmon;

TEST(readout, fidelity_snr_round_trip) {
    for (double f = 0.51; f < 0.9999; f += 0.007) {
        EXPECT_NEAR(fidelity_from_snr(snr_for_fidelity(f)), f, 1e-12);
    }
}

TEST(readout, fidelity_is_normal_cdf) {
    boost::math::normal_distribution<double> n01;
    for (double snr : {0.1, 0.5, 1.0, 2.0}) {
        EXPECT_NEAR(fidelity_from_snr(snr), boost::math::cdf(n01, snr), 1e-12);
    }
}

TEST(readout, model_separations) {
    auto m = build_model(0.996, 0.884);
    EXPECT_LT(m.mu[0], m.mu[1]);
    EXPECT_LT(m.mu[1], m.mu[2]);
    EXPECT_NEAR((m.mu[1] - m.mu[0]) / (2 * m.sigma), snr_for_fidelity(0.996), 1e-12);
    EXPECT_NEAR((m.mu[2] - m.mu[1]) / (2 * m.sigma), snr_for_fidelity(0.884), 1e-12);
}

TEST(readout, posteriors_normalized_and_leak_monotone) {
    auto m = build_model(0.996, 0.884);
    double prev = -1;
    for (double I = m.mu[0] - 5; I < m.mu[2] + 5; I += 0.05) {
        auto p = state_posteriors(I, m);
        EXPECT_NEAR(p[0] + p[1] + p[2], 1, 1e-12);
        double l = leak_probability(I, m);
        EXPECT_NEAR(l, p[2], 1e-12);
        EXPECT_GE(l, prev - 1e-15);
        prev = l;
    }
}

TEST(readout, posterior_at_midpoint_is_half) {
    auto m = build_model(0.996, 0.884);
    double mid = (m.mu[1] + m.mu[2]) / 2;
    auto p = state_posteriors(mid, m);
    EXPECT_NEAR(p[1], p[2], 1e-9);
}

TEST(readout, posteriors_survive_extreme_inputs) {
    auto m = build_model(0.996, 0.884);
    EXPECT_NEAR(leak_probability(1e4, m), 1, 1e-12);
    EXPECT_NEAR(leak_probability(-1e4, m), 0, 1e-12);
}

TEST(readout, rejects_invalid_fidelity) {
    EXPECT_THROW(snr_for_fidelity(0.4), std::exception);
    EXPECT_THROW(snr_for_fidelity(1.0), std::exception);
    IqModel bad;
    bad.sigma = 0;
    EXPECT_THROW(bad.validate(), std::exception);
}
