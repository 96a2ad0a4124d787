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


#include "leakmon/dataset.h"

#include <atomic>
#include <sstream>

#include "gtest/gtest.h"
#include "leakmon/serialize.h"

using namespace leakmon;

namespace {

void expect_same_runs(const Dataset &a, const Dataset &b) {
    ASSERT_EQ(a.runs.size(), b.runs.size());
    for (size_t r = 0; r < a.runs.size(); r++) {
        EXPECT_EQ(a.runs[r].seed, b.runs[r].seed);
        EXPECT_EQ(a.runs[r].outcome, b.runs[r].outcome);
        EXPECT_EQ(a.runs[r].declared, b.runs[r].declared);
        EXPECT_EQ(a.runs[r].analog, b.runs[r].analog);
        EXPECT_EQ(a.runs[r].truth, b.runs[r].truth);
        EXPECT_EQ(a.runs[r].readout, b.runs[r].readout);
    }
}

}  // namespace

TEST(dataset, binary_round_trip) {
    auto layout = build_surface17();
    SimParams p;
    p.leakage.L1 = 0.01;
    auto ds = simulate_dataset(layout, p, 25, 7, 99, 1);
    std::stringstream buf;
    write_dataset(ds, buf);
    auto back = read_dataset(buf);
    EXPECT_EQ(back.master_seed, 99u);
    EXPECT_EQ(back.n_cycles, 7u);
    EXPECT_EQ(back.header.at("schema_version").get<int>(), DATASET_SCHEMA_VERSION);
    expect_same_runs(ds, back);
    auto params = back.params();
    EXPECT_EQ(params.leakage.L1, 0.01);
    EXPECT_EQ(params.iq.mu, p.iq.mu);
}

TEST(dataset, rejects_foreign_and_truncated_input) {
    std::stringstream junk("not a dataset at all");
    EXPECT_THROW(read_dataset(junk), std::runtime_error);

    auto layout = build_surface17();
    auto ds = simulate_dataset(layout, SimParams{}, 3, 4, 1, 1);
    std::stringstream buf;
    write_dataset(ds, buf);
    std::string bytes = buf.str();
    std::stringstream cut(bytes.substr(0, bytes.size() - 10));
    EXPECT_THROW(read_dataset(cut), std::runtime_error);
}

TEST(dataset, workers_do_not_change_results) {
    auto layout = build_surface17();
    SimParams p;
    p.leakage.L1 = 0.01;
    auto one = simulate_dataset(layout, p, 40, 6, 5, 1);
    auto many = simulate_dataset(layout, p, 40, 6, 5, 3);
    expect_same_runs(one, many);
}

TEST(dataset, slice_keeps_run_identity) {
    auto layout = build_surface17();
    auto ds = simulate_dataset(layout, SimParams{}, 10, 3, 2, 1);
    auto part = slice(ds, 3, 7);
    ASSERT_EQ(part.runs.size(), 4u);
    EXPECT_EQ(part.runs[0].seed, 3u);
    EXPECT_EQ(part.runs[0].outcome, ds.runs[3].outcome);
    auto copy = part;
    resample_analog(copy, part.params().iq);
    EXPECT_EQ(copy.runs[2].analog, ds.runs[5].analog);
}

TEST(dataset, csv_export_shape) {
    auto layout = build_surface17();
    auto ds = simulate_dataset(layout, SimParams{}, 2, 3, 1, 1);
    std::stringstream out;
    write_dataset_csv(ds, layout, out);
    std::string line;
    std::getline(out, line);
    EXPECT_EQ(line, "run,cycle,qubit,m,declared,I,truth_state");
    size_t rows = 0;
    while (std::getline(out, line)) {
        rows++;
    }
    EXPECT_EQ(rows, 2 * 3 * (layout.checks.size() + layout.num_data));
}

TEST(dataset, parallel_for_visits_each_index_once) {
    std::vector<std::atomic<int>> hits(101);
    parallel_for(hits.size(), 4, [&](size_t k) { hits[k]++; });
    for (auto &h : hits) {
        EXPECT_EQ(h.load(), 1);
    }
}

TEST(dataset, params_json_round_trip) {
    SimParams p;
    p.leakage.L1 = 0.002;
    p.leakage.phase_mode = PhaseMode::ConstrainedRandom;
    p.leakage.include_L3 = true;
    p.leakage.L3 = 0.1;
    p.coherence.T1_us = 25;
    p.coherence.Tphi_park_us[1] = 7;
    p.coherence.timing.t_c = 900;
    nlohmann::json j = p;
    auto back = j.get<SimParams>();
    EXPECT_EQ(back.leakage.L1, 0.002);
    EXPECT_EQ(back.leakage.phase_mode, PhaseMode::ConstrainedRandom);
    EXPECT_TRUE(back.leakage.include_L3);
    EXPECT_EQ(back.coherence.T1_us, 25);
    EXPECT_EQ(back.coherence.Tphi_park_us[1], 7);
    EXPECT_EQ(back.coherence.timing.t_c, 900);
    EXPECT_EQ(back.iq.mu, p.iq.mu);
}

TEST(dataset, trace_round_trip) {
    TraceFile file;
    file.header = {{"stage", "detect"}, {"seed", 3}};
    file.traces = {{{0.0f, 0.5f, 1.0f}, {0.25f, 0.75f, 0.125f}}, {{1e-7f, 0.999f, 0.0f}, {0.5f, 0.5f, 0.5f}}};
    std::stringstream buf;
    write_traces(file, buf);
    auto back = read_traces(buf);
    EXPECT_EQ(back.traces, file.traces);
    EXPECT_EQ(back.header["stage"], "detect");
    EXPECT_EQ(back.header["n_runs"], 2);

    std::stringstream bad("LEAKMON1junk");
    EXPECT_THROW(read_traces(bad), std::runtime_error);
}
