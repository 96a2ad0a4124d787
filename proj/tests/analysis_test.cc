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


#include "leakmon/analysis.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

using namespace leakmon;

namespace {

Scored make_scored(std::vector<float> score, std::vector<uint8_t> truth) {
    Scored s;
    s.score = std::move(score);
    s.truth = std::move(truth);
    return s;
}

/// Dataset with one tracked-qubit truth pattern per run; other qubits stay computational.
Dataset truth_dataset(const Layout &layout, const std::vector<std::vector<int>> &pattern, size_t tracked) {
    Dataset ds;
    ds.n_cycles = pattern[0].size();
    size_t nt = layout.tracked_qubits().size();
    for (size_t r = 0; r < pattern.size(); r++) {
        RunRecord rec;
        rec.n_cycles = ds.n_cycles;
        rec.num_checks = layout.checks.size();
        rec.num_tracked = nt;
        rec.seed = r;
        rec.outcome.assign(rec.n_cycles * rec.num_checks, 0);
        rec.declared.assign(rec.n_cycles * rec.num_checks, 0);
        rec.analog.assign(rec.n_cycles * rec.num_checks, 0);
        rec.truth.assign(rec.n_cycles * nt, LeakState::C);
        rec.readout.assign(rec.n_cycles, 0);
        for (size_t n = 0; n < rec.n_cycles; n++) {
            rec.truth[n * nt + tracked] = pattern[r][n] ? LeakState::L2 : LeakState::C;
        }
        ds.runs.push_back(rec);
    }
    return ds;
}

}  // namespace

TEST(analysis, precision_recall_hand_example) {
    std::vector<float> trace{0.1f, 0.6f, 0.7f, 0.2f};
    std::vector<uint8_t> truth{0, 0, 1, 1};
    EXPECT_DOUBLE_EQ(*precision(trace, truth, 0.5), 0.5);
    EXPECT_DOUBLE_EQ(*recall(trace, truth, 0.5), 0.5);
    EXPECT_FALSE(precision(trace, truth, 0.9).has_value());
    EXPECT_FALSE(recall(trace, {0, 0, 0, 0}, 0.5).has_value());
}

TEST(analysis, perfect_and_always_fire_predictors) {
    std::vector<uint8_t> truth{0, 1, 1, 0, 0, 1, 0, 0};
    std::vector<float> perfect(truth.begin(), truth.end());
    EXPECT_DOUBLE_EQ(*precision(perfect, truth, 0.5), 1);
    EXPECT_DOUBLE_EQ(*recall(perfect, truth, 0.5), 1);
    EXPECT_NEAR(*optimality(make_scored(perfect, truth)), 1, 1e-12);

    std::vector<float> always(truth.size(), 1.0f);
    EXPECT_DOUBLE_EQ(*precision(always, truth, 0.5), 3.0 / 8.0);
    EXPECT_DOUBLE_EQ(*recall(always, truth, 0.5), 1);
}

TEST(analysis, constant_predictor_auc_is_leaked_fraction) {
    std::vector<uint8_t> truth{0, 1, 0, 0, 1, 0, 0, 0, 0, 1};
    auto curve = pr_curve(make_scored(std::vector<float>(truth.size(), 0.3f), truth));
    EXPECT_NEAR(curve.auc, 0.3, 1e-12);
}

TEST(analysis, pr_curve_properties) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<float> u(0, 1);
    std::vector<float> score;
    std::vector<uint8_t> truth;
    for (int i = 0; i < 2000; i++) {
        uint8_t t = u(rng) < 0.1f;
        truth.push_back(t);
        score.push_back(std::clamp(u(rng) * 0.6f + (t ? 0.4f : 0.0f), 0.0f, 1.0f));
    }
    auto s = make_scored(score, truth);
    auto curve = pr_curve(s);
    EXPECT_GE(curve.auc, 0);
    EXPECT_LE(curve.auc, 1);
    EXPECT_GT(curve.auc, 0.1);
    for (size_t i = 1; i < curve.points.size(); i++) {
        EXPECT_GE(curve.points[i].recall, curve.points[i - 1].recall - 1e-12);
    }
    // Oracle: trapezoid over distinct-score thresholds computed from scratch.
    std::vector<float> th(score.begin(), score.end());
    std::sort(th.begin(), th.end());
    th.erase(std::unique(th.begin(), th.end()), th.end());
    std::vector<std::pair<double, double>> rp;
    // Walk thresholds from high to low so the curve keeps its parametric order.
    std::reverse(th.begin(), th.end());
    for (float t : th) {
        double below = std::nextafter((double)t, -1.0);
        auto p = precision(score, truth, below);
        auto r = recall(score, truth, below);
        if (p && r) {
            rp.push_back({*r, *p});
        }
    }
    double auc = rp.front().first * rp.front().second;
    for (size_t i = 1; i < rp.size(); i++) {
        auc += (rp[i].first - rp[i - 1].first) * (rp[i].second + rp[i - 1].second) / 2;
    }
    EXPECT_NEAR(curve.auc, auc, 1e-9);
    EXPECT_FALSE(optimality(make_scored(score, std::vector<uint8_t>(score.size(), 0))).has_value());
}

TEST(analysis, events_and_step_response) {
    std::vector<std::vector<double>> series{
        {0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 0, 0},
        {0, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    };
    auto events = select_events(series, 0.5, 3, 5);
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].run, 0u);
    EXPECT_EQ(events[0].onset, 4u);
    auto resp = average_response(series, events, 3, 5);
    for (size_t i = 0; i < resp.offsets.size(); i++) {
        EXPECT_EQ(resp.mean[i], resp.offsets[i] >= 0 ? 1.0 : 0.0);
    }
    EXPECT_TRUE(select_events(series, 0.5, 8, 8).empty());
}

TEST(analysis, data_leak_gauge_plateau) {
    auto layout = build_surface17();
    SimParams p;
    p.leakage.L1 = 0.005;
    auto ds = simulate_dataset(layout, p, 4000, 40, 3, 1);
    auto tracked = layout.tracked_qubits();
    size_t t = (size_t)(std::find(tracked.begin(), tracked.end(), layout.qubit_by_name("D4")) - tracked.begin());
    auto curves = defect_rate_around_events(ds, layout, t);
    ASSERT_FALSE(curves.empty());
    for (const auto &[check, curve] : curves) {
        ASSERT_GT(curve.events, 20u);
        // Plateau well inside the leaked window.
        for (size_t i = 0; i < curve.offsets.size(); i++) {
            if (curve.offsets[i] >= 2 && curve.offsets[i] <= 4) {
                EXPECT_NEAR(curve.mean[i], 0.5, 0.06) << check << " " << curve.offsets[i];
            }
        }
    }
}

TEST(analysis, crosstalk_on_clean_data_is_zero) {
    auto layout = build_surface17();
    SimParams p;
    p.leakage.L1 = 0;
    auto ds = simulate_dataset(layout, p, 100, 10, 4, 1);
    auto traces = filter_dataset(ds, layout, calibrate_models(ds, layout, p));
    auto m = crosstalk_matrix(ds, traces);
    for (const auto &row : m) {
        for (double v : row) {
            EXPECT_TRUE(std::isnan(v) || v < 0.01);
        }
    }
}

TEST(analysis, ancilla_crosstalk_diagonal_dominates) {
    auto layout = build_surface17();
    SimParams p;
    p.leakage.L1 = 0.005;
    auto ds = simulate_dataset(layout, p, 3000, 30, 5, 1);
    auto traces = filter_dataset(ds, layout, calibrate_models(ds, layout, p));
    auto m = crosstalk_matrix(ds, traces);
    auto tracked = layout.tracked_qubits();
    for (size_t i = 0; i < tracked.size(); i++) {
        if (layout.is_data(tracked[i])) {
            continue;
        }
        for (size_t j = 0; j < tracked.size(); j++) {
            if (j != i && !std::isnan(m[i][j])) {
                EXPECT_GT(m[i][i], 2 * m[i][j]) << i << " " << j;
            }
        }
    }
}

TEST(analysis, pi_pulse_transform) {
    auto layout = build_surface17();
    SimParams p;
    p.leakage.L1 = 0;
    auto ds = simulate_dataset(layout, p, 20, 10, 6, 1);
    auto same = pi_pulse_postprocess(ds, layout);
    for (size_t r = 0; r < ds.runs.size(); r++) {
        EXPECT_EQ(same.runs[r].declared, ds.runs[r].declared);
    }
    EXPECT_TRUE(same.header.at("pi_pulse").get<bool>());
    EXPECT_TRUE(pi_pulse_parity(0));
    EXPECT_TRUE(pi_pulse_parity(1));
    EXPECT_FALSE(pi_pulse_parity(2));
    EXPECT_FALSE(pi_pulse_parity(3));
    EXPECT_TRUE(pi_pulse_parity(4));
}

TEST(analysis, postselect_counts) {
    std::vector<std::vector<float>> maxima{{0.1f, 0.3f}, {0.9f, 0.0f}, {0.01f, 0.01f}, {0.5f, 0.6f}};
    auto none = postselect(maxima, {1.0, 1.0});
    EXPECT_EQ(none.discarded, 0);
    EXPECT_EQ(none.survivors.size(), 4u);
    auto floor = postselect(maxima, {0.02, 0.02});
    EXPECT_DOUBLE_EQ(floor.discarded, 0.75);
    EXPECT_EQ(floor.survivors, std::vector<size_t>{2});
    auto mid = postselect(maxima, {0.5, 0.5});
    EXPECT_DOUBLE_EQ(mid.discarded, 0.5);
}

TEST(analysis, truth_maxima_are_binary) {
    auto layout = build_surface17();
    auto ds = truth_dataset(layout, {{0, 0, 1, 0}, {0, 0, 0, 0}}, 2);
    auto m = truth_maxima(ds);
    EXPECT_EQ(m[0][2], 1.0f);
    EXPECT_EQ(m[1][2], 0.0f);
    auto series = truth_series(ds, 2);
    EXPECT_EQ(series[0], (std::vector<double>{0, 0, 1, 0}));
}

TEST(analysis, pareto_front_invariants) {
    std::mt19937_64 rng(7);
    const size_t runs = 3000;
    const size_t cycles = 12;
    // Runs flagged by qubit 0 are noisier, so discarding them lowers the error rate.
    std::vector<std::vector<float>> maxima(runs, std::vector<float>(2));
    SuccessTable success(runs, std::vector<uint8_t>(cycles));
    std::uniform_real_distribution<float> u(0, 1);
    for (size_t r = 0; r < runs; r++) {
        maxima[r][0] = u(rng);
        maxima[r][1] = u(rng);
        double eps = 0.01 + 0.05 * maxima[r][0];
        for (size_t k = 0; k < cycles; k++) {
            double f = 0.5 * (1 + std::pow(1 - 2 * eps, (double)(k + 1)));
            success[r][k] = std::bernoulli_distribution(f)(rng);
        }
    }
    GaConfig cfg;
    cfg.population = 24;
    cfg.generations = 15;
    cfg.n_boot = 20;
    auto front = pareto_front(success, maxima, cfg);
    ASSERT_FALSE(front.empty());
    for (size_t i = 0; i < front.size(); i++) {
        for (double th : front[i].thresholds) {
            EXPECT_GE(th, cfg.threshold_min);
            EXPECT_LE(th, cfg.threshold_max);
        }
        for (size_t j = 0; j < front.size(); j++) {
            EXPECT_TRUE(i == j || !dominates(front[i], front[j]));
        }
        if (i > 0) {
            EXPECT_GE(front[i].discarded, front[i - 1].discarded);
            EXPECT_LE(front[i].eps, front[i - 1].eps);
        }
    }
    EXPECT_LT(front.back().eps, front.front().eps);

    GaConfig bad;
    bad.population = 1;
    EXPECT_THROW(bad.validate(), std::exception);
    bad = {};
    bad.threshold_min = 0;
    EXPECT_THROW(bad.validate(), std::exception);
}

TEST(analysis, steady_states) {
    auto layout = build_surface17();
    LeakageParams leak;
    CoherenceParams coh;
    auto d4 = steady_state(transition_rates(layout, layout.qubit_by_name("D4"), leak, coh));
    auto d3 = steady_state(transition_rates(layout, layout.qubit_by_name("D3"), leak, coh));
    EXPECT_NEAR(d4.p_l(), 0.075, 0.0005);
    EXPECT_NEAR(d3.p_l(), 0.059, 0.0005);
    EXPECT_NEAR(d4.p_c + d4.p_l(), 1, 1e-15);
    auto zero = steady_state({});
    EXPECT_EQ(zero.p_l(), 0);
    EXPECT_EQ(leak_evolution({}, 5), std::vector<double>(5, 0));

    leak.L3 = 0.1;
    leak.include_L3 = true;
    auto three = steady_state(transition_rates(layout, layout.qubit_by_name("D4"), leak, coh));
    EXPECT_NEAR(three.p_l2, 0.071, 0.0005);
    EXPECT_NEAR(three.p_l3, 0.051, 0.0005);
    EXPECT_NEAR(three.p_c + three.p_l2 + three.p_l3, 1, 1e-12);
}

TEST(analysis, leak_evolution_tracks_discrete_chain) {
    auto layout = build_surface17();
    auto rates = transition_rates(layout, layout.qubit_by_name("D4"), {}, {});
    auto curve = leak_evolution(rates, 60);
    double p = 0;
    for (size_t n = 0; n < curve.size(); n++) {
        p = p * (1 - rates.gamma_lc) + (1 - p) * rates.gamma_cl;
        EXPECT_NEAR(curve[n], p, 2e-3);
        if (n > 0) {
            EXPECT_GT(curve[n], curve[n - 1]);
        }
    }
    EXPECT_NEAR(curve.back(), steady_state(rates).p_l(), 2e-3);
}

TEST(analysis, effective_coupling) {
    EXPECT_NEAR(effective_coupling(15, -300), 2 * std::sqrt(3.0) * 225 / 300, 1e-12);
    EXPECT_NEAR(effective_coupling(15, 300), 2.598, 0.001);
    EXPECT_EQ(effective_coupling(0, 300), 0);
    EXPECT_NEAR(effective_coupling(30, 300), 4 * effective_coupling(15, 300), 1e-12);
    EXPECT_THROW(effective_coupling(15, 0), std::domain_error);
}
