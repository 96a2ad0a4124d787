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


#include "leakmon/decoder.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "leakmon/matching.h"
#include "leakmon/oracle.h"

using namespace leakmon;

namespace {

/// Exhaustive (cardinality, weight) optimum over all matchings of a small graph.
std::pair<int64_t, int64_t> best_matching(size_t n, const std::vector<WeightedEdge> &edges, bool max_cardinality) {
    std::pair<int64_t, int64_t> best{0, 0};
    std::vector<bool> used(n, false);
    std::function<void(size_t, int64_t, int64_t)> rec = [&](size_t k, int64_t card, int64_t weight) {
        if (k == edges.size()) {
            auto key = max_cardinality ? std::make_pair(card, weight) : std::make_pair(int64_t{0}, weight);
            auto cur = max_cardinality ? best : std::make_pair(int64_t{0}, best.second);
            if (key > cur) {
                best = {card, weight};
            }
            return;
        }
        rec(k + 1, card, weight);
        const auto &e = edges[k];
        if (!used[e.u] && !used[e.v]) {
            used[e.u] = used[e.v] = true;
            rec(k + 1, card + 1, weight + e.weight);
            used[e.u] = used[e.v] = false;
        }
    };
    rec(0, 0, 0);
    return best;
}

SimParams noiseless() {
    SimParams p;
    p.leakage.L1 = 0;
    p.coherence.damping = false;
    return p;
}

}  // namespace

TEST(matching, agrees_with_exhaustive_search) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 300; trial++) {
        size_t n = 2 + rng() % 7;
        std::vector<WeightedEdge> edges;
        for (size_t i = 0; i < n; i++) {
            for (size_t j = i + 1; j < n; j++) {
                if (rng() % 2) {
                    edges.push_back({i, j, (int64_t)(rng() % 20)});
                }
            }
        }
        for (bool maxcard : {false, true}) {
            auto mate = max_weight_matching(n, edges, maxcard);
            ASSERT_EQ(mate.size(), n);
            int64_t card = 0;
            int64_t weight = 0;
            for (size_t i = 0; i < n; i++) {
                if (mate[i] >= 0) {
                    ASSERT_EQ(mate[(size_t)mate[i]], (int64_t)i);
                    if ((size_t)mate[i] > i) {
                        card++;
                        auto it = std::find_if(edges.begin(), edges.end(), [&](const WeightedEdge &e) {
                            return (e.u == i && e.v == (size_t)mate[i]) || (e.v == i && e.u == (size_t)mate[i]);
                        });
                        ASSERT_NE(it, edges.end());
                        weight += it->weight;
                    }
                }
            }
            auto best = best_matching(n, edges, maxcard);
            EXPECT_EQ(weight, best.second);
            if (maxcard) {
                EXPECT_EQ(card, best.first);
            }
        }
    }
}

TEST(matching, empty_graph) {
    auto mate = max_weight_matching(4, {}, true);
    EXPECT_EQ(mate, std::vector<int64_t>(4, -1));
}

TEST(decoder, edge_weight_is_log_likelihood) {
    EXPECT_NEAR(edge_weight(0.01), std::log(99.0), 1e-12);
    EXPECT_NEAR(edge_weight(0.5), 0, 1e-12);
    EXPECT_GT(edge_weight(1e-6), edge_weight(1e-3));
}

TEST(decoder, planted_edges_recovered) {
    const size_t nodes = 6;
    std::vector<CandidateEdge> edges;
    std::vector<double> truth;
    std::mt19937_64 rng(2);
    for (size_t i = 0; i < nodes; i++) {
        edges.push_back({i, BOUNDARY, false});
        truth.push_back(0.01 + 0.01 * (double)i);
        if (i + 1 < nodes) {
            edges.push_back({i, i + 1, false});
            truth.push_back(0.03 + 0.005 * (double)i);
        }
    }
    edges.push_back({0, 2, false});
    truth.push_back(0.02);
    const size_t shots = 100000;
    std::vector<std::vector<uint8_t>> samples(shots, std::vector<uint8_t>(nodes, 0));
    std::uniform_real_distribution<double> u(0, 1);
    for (auto &s : samples) {
        for (size_t k = 0; k < edges.size(); k++) {
            if (u(rng) < truth[k]) {
                s[edges[k].u] ^= 1;
                if (edges[k].v != BOUNDARY) {
                    s[edges[k].v] ^= 1;
                }
            }
        }
    }
    auto est = estimate_edge_probs(edges, nodes, samples);
    EXPECT_EQ(est.clipped, 0u);
    for (size_t k = 0; k < edges.size(); k++) {
        double sigma = std::sqrt(truth[k] * (1 - truth[k]) / (double)shots);
        EXPECT_NEAR(est.p[k], truth[k], 3 * sigma + 2e-3) << k;
    }
}

TEST(decoder, error_free_samples_sit_at_floor) {
    std::vector<CandidateEdge> edges{{0, 1, false}, {0, BOUNDARY, false}, {1, BOUNDARY, true}};
    std::vector<std::vector<uint8_t>> samples(100, std::vector<uint8_t>(2, 0));
    auto est = estimate_edge_probs(edges, 2, samples, 1e-6);
    for (double p : est.p) {
        EXPECT_EQ(p, 1e-6);
    }
    EXPECT_EQ(est.clipped, edges.size());
}

TEST(decoder, mwpm_matches_brute_force) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pu(0.001, 0.3);
    for (int trial = 0; trial < 200; trial++) {
        size_t nodes = 10;
        std::vector<CandidateEdge> edges;
        std::vector<double> p;
        for (size_t i = 0; i < nodes; i++) {
            edges.push_back({i, BOUNDARY, false});
            p.push_back(pu(rng));
            for (size_t j = i + 1; j < nodes; j++) {
                if (rng() % 3 == 0) {
                    edges.push_back({i, j, (rng() % 4) == 0});
                    p.push_back(pu(rng));
                }
            }
        }
        auto g = build_graph(nodes, edges, p);
        std::vector<size_t> defects(nodes);
        std::iota(defects.begin(), defects.end(), 0);
        std::shuffle(defects.begin(), defects.end(), rng);
        defects.resize(rng() % 11);
        auto m = mwpm(g, defects);
        double bf = brute_force_matching_weight(
            defects.size(), [&](size_t a, size_t b) { return (double)g.distance(defects[a], defects[b]); },
            [&](size_t a) { return (double)g.distance(defects[a], BOUNDARY); });
        ASSERT_EQ((double)m.weight, bf);
        size_t covered = 0;
        uint8_t parity = 0;
        for (auto [a, b] : m.pairs) {
            ASSERT_LT(a, b);
            covered += b == BOUNDARY ? 1 : 2;
            parity ^= g.path_parity(a, b);
        }
        EXPECT_EQ(covered, defects.size());
        EXPECT_EQ(parity, m.parity);
        EXPECT_TRUE(std::is_sorted(m.pairs.begin(), m.pairs.end()));
    }
}

TEST(decoder, mwpm_trivial_cases) {
    std::vector<CandidateEdge> edges{{0, 1, false}, {0, BOUNDARY, false}, {1, BOUNDARY, false}};
    auto g = build_graph(2, edges, {0.2, 0.001, 0.001});
    auto empty = mwpm(g, {});
    EXPECT_TRUE(empty.pairs.empty());
    EXPECT_EQ(empty.weight, 0);
    auto pair = mwpm(g, {1, 0});
    ASSERT_EQ(pair.pairs.size(), 1u);
    EXPECT_EQ(pair.pairs[0], std::make_pair(size_t{0}, size_t{1}));
}

TEST(decoder, error_free_run_decodes_to_zero) {
    auto layout = build_surface17();
    auto catalog = enumerate_fault_edges(layout, 5);
    EXPECT_EQ(catalog.irregular, 0u);
    auto train = simulate_dataset(layout, SimParams{.leakage = {.L1 = 0}}, 2000, 5, 4, 1);
    auto decoder = train_decoder(layout, train, catalog);
    for (uint64_t r = 0; r < 10; r++) {
        auto rec = simulate_run(layout, noiseless(), 5, 1, r);
        for (size_t n = 1; n <= 5; n++) {
            auto res = decode_run(layout, decoder, rec, n);
            EXPECT_EQ(res.logical, 0);
            EXPECT_TRUE(res.matching.pairs.empty());
        }
    }
    EXPECT_THROW(decode_run(layout, decoder, simulate_run(layout, noiseless(), 6, 1, 0), 6), std::out_of_range);

    auto copy = decoder_from_json(decoder_to_json(decoder));
    ASSERT_EQ(copy.max_cycles(), decoder.max_cycles());
    for (size_t n = 1; n <= decoder.max_cycles(); n++) {
        EXPECT_EQ(copy.graphs[n].dist, decoder.graphs[n].dist);
        EXPECT_EQ(copy.graphs[n].parity, decoder.graphs[n].parity);
    }
}

TEST(decoder, single_data_faults_are_corrected) {
    auto layout = build_surface17();
    const size_t n_cycles = 4;
    auto catalog = enumerate_fault_edges(layout, n_cycles);
    auto train = simulate_dataset(layout, SimParams{.leakage = {.L1 = 0}}, 4000, n_cycles, 5, 1);
    auto decoder = train_decoder(layout, train, catalog);
    FrameSimulator sim(layout, noiseless());
    size_t end_slot = layout.schedule.size();
    uint64_t run = 0;
    for (size_t c = 0; c < n_cycles; c++) {
        for (size_t slot : {size_t{0}, end_slot}) {
            for (size_t q = 0; q < layout.num_data; q++) {
                for (int pauli = 1; pauli <= 3; pauli++) {
                    SimOptions opt;
                    opt.faults.push_back({c, slot, q, (pauli & 1) != 0, (pauli & 2) != 0});
                    auto rec = sim.run(n_cycles, 6, run++, opt);
                    for (size_t n = c + 1; n <= n_cycles; n++) {
                        ASSERT_EQ(decode_run(layout, decoder, rec, n).logical, 0)
                            << "cycle " << c << " slot " << slot << " qubit " << q << " pauli " << pauli << " n " << n;
                    }
                }
            }
        }
    }
}

TEST(decoder, leaked_center_lets_two_x_errors_flip_logical) {
    auto layout = build_surface17();
    size_t d2 = layout.qubit_by_name("D2");
    size_t d4 = layout.qubit_by_name("D4");
    size_t d7 = layout.qubit_by_name("D7");
    SimOptions opt;
    opt.pinned.push_back({d4, LeakState::L2});
    opt.faults.push_back({1, 0, d2, true, false});
    opt.faults.push_back({1, 0, d7, true, false});
    auto with = simulate_run(layout, noiseless(), 3, 1, 0, opt);
    opt.faults.clear();
    auto without = simulate_run(layout, noiseless(), 3, 1, 0, opt);
    // D2 and D7 together with D4 form a logical X, so only the readout parity over them differs.
    EXPECT_NE(readout_logical(layout, with, 3), readout_logical(layout, without, 3));
}

TEST(decoder, time_like_edges_shrink_with_t1) {
    auto layout = build_surface17();
    const size_t n_cycles = 4;
    auto catalog = enumerate_fault_edges(layout, n_cycles);
    auto dl = detector_layout(layout, n_cycles);
    size_t nz = dl.z_checks.size();
    double prev = 1;
    for (double t1 : {15.0, 30.0, 60.0}) {
        SimParams p;
        p.leakage.L1 = 0;
        p.coherence.T1_us = t1;
        auto ds = simulate_dataset(layout, p, 6000, n_cycles, 7, 1);
        auto decoder = train_decoder(layout, ds, catalog);
        double sum = 0;
        size_t count = 0;
        for (const auto &e : decoder.graphs[n_cycles].edges) {
            if (e.v != BOUNDARY && e.v == e.u + nz && e.u + nz < nz * n_cycles) {
                sum += e.p;
                count++;
            }
        }
        ASSERT_GT(count, 0u);
        double mean = sum / (double)count;
        EXPECT_LT(mean, prev) << t1;
        prev = mean;
    }
}

TEST(decoder, fit_recovers_synthetic_curve) {
    std::vector<double> n, f;
    for (int k = 1; k <= 20; k++) {
        n.push_back(k);
        f.push_back(0.5 * (1 + std::pow(0.96, k)));
    }
    auto fit = fit_error_rate(n, f);
    EXPECT_NEAR(fit.eps, 0.02, 1e-6);
    EXPECT_NEAR(fit.n0, 0, 1e-4);

    auto flat = fit_error_rate(n, std::vector<double>(n.size(), 1.0));
    EXPECT_NEAR(flat.eps, 0, 1e-9);
    auto mixed = fit_error_rate(n, std::vector<double>(n.size(), 0.5));
    EXPECT_EQ(mixed.eps, 0.5);
}

TEST(decoder, fit_rejects_bad_input) {
    EXPECT_THROW(fit_error_rate({1, 2}, {0.9, 0.8}), FitError);
    EXPECT_THROW(fit_error_rate({1, 2, 3}, {0.9, 0.3, 0.8}), FitError);
    EXPECT_THROW(fit_error_rate({1, 2, 3, 4, 5, 6}, {1.0, 0.5, 1.0, 0.5, 1.0, 0.5}), FitError);
}

TEST(decoder, fidelity_curve_and_bootstrap) {
    SuccessTable table{{1, 1, 0}, {1, 0, 0}, {1, 1, 1}, {0, 1, 1}};
    auto f = fidelity_curve(table);
    EXPECT_EQ(f, (std::vector<double>{0.75, 0.75, 0.5}));
    auto sub = fidelity_curve(table, {0, 2});
    EXPECT_EQ(sub, (std::vector<double>{1.0, 1.0, 0.5}));

    std::mt19937_64 rng(9);
    const double eps = 0.03;
    SuccessTable synth(5000, std::vector<uint8_t>(15));
    for (auto &row : synth) {
        for (size_t k = 0; k < 15; k++) {
            double p = 0.5 * (1 + std::pow(1 - 2 * eps, (double)(k + 1)));
            row[k] = std::bernoulli_distribution(p)(rng);
        }
    }
    auto fit = fit_with_bootstrap(synth, {}, 100, 1);
    EXPECT_LE(fit.eps_lo, fit.eps);
    EXPECT_GE(fit.eps_hi, fit.eps);
    EXPECT_NEAR(fit.eps, eps, 0.005);
}
