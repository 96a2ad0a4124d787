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

#include "leakmon/lattice.h"

#include <algorithm>
#include <set>

#include "gtest/gtest.h"

using namespace leakmon;

namespace {

size_t total_cz(const Layout &layout) {
    size_t n = 0;
    for (const auto &slot : layout.schedule) {
        if (auto *cz = std::get_if<CzLayer>(&slot)) {
            n += cz->gates.size();
        }
    }
    return n;
}

}  // namespace

TEST(lattice, qubit_counts) {
    auto layout = build_surface17();
    size_t data = 0, ax = 0, az = 0;
    for (const auto &q : layout.qubits) {
        data += q.id.kind == QubitKind::Data;
        ax += q.id.kind == QubitKind::AncillaX;
        az += q.id.kind == QubitKind::AncillaZ;
    }
    ASSERT_EQ(data, 9);
    ASSERT_EQ(ax, 4);
    ASSERT_EQ(az, 4);
    ASSERT_EQ(layout.num_qubits(), 17);
}

TEST(lattice, cz_count_is_sum_of_weights) {
    auto layout = build_surface17();
    size_t weights = 0;
    for (const auto &c : layout.checks) {
        ASSERT_TRUE(c.support.size() == 2 || c.support.size() == 4);
        weights += c.support.size();
    }
    ASSERT_EQ(weights, 4 * 4 + 4 * 2);
    ASSERT_EQ(total_cz(layout), 24);
}

TEST(lattice, frequency_roles) {
    auto layout = build_surface17();
    std::set<std::string> high;
    for (const auto &q : layout.qubits) {
        if (q.id.kind != QubitKind::Data) {
            ASSERT_EQ(q.role, FrequencyRole::Mid);
        } else if (q.role == FrequencyRole::High) {
            high.insert(q.id.str());
        }
    }
    ASSERT_EQ(high, (std::set<std::string>{"D3", "D4", "D5"}));
    ASSERT_EQ(layout.tracked_qubits().size(), 11);
}

TEST(lattice, flux_counts) {
    auto layout = build_surface17();
    ASSERT_EQ(layout.flux_count[layout.data_qubit("D4")], 4);
    ASSERT_EQ(layout.flux_count[layout.data_qubit("D3")], 3);
    ASSERT_EQ(layout.flux_count[layout.data_qubit("D5")], 3);
    for (size_t q = 0; q < layout.num_data; q++) {
        if (layout.qubits[q].role == FrequencyRole::Low) {
            ASSERT_EQ(layout.flux_count[q], 0);
        }
    }
    // Recount from the schedule, and check that the flux side has the higher role.
    std::vector<size_t> recount(layout.num_qubits(), 0);
    for (const auto &slot : layout.schedule) {
        if (auto *cz = std::get_if<CzLayer>(&slot)) {
            for (const auto &g : cz->gates) {
                ASSERT_GT(layout.qubits[g.flux].role, layout.qubits[g.stat].role);
                recount[g.flux]++;
            }
        }
    }
    ASSERT_EQ(recount, layout.flux_count);
}

TEST(lattice, data_check_membership) {
    auto layout = build_surface17();
    for (size_t q = 0; q < layout.num_data; q++) {
        ASSERT_GE(layout.checks_of[q].size(), 2);
        ASSERT_LE(layout.checks_of[q].size(), 4);
    }
    ASSERT_EQ(layout.checks_of[layout.data_qubit("D4")].size(), 4);
}

TEST(lattice, x_slots_precede_z_slots) {
    auto layout = build_surface17();
    bool seen_z = false;
    size_t measure_x = 0, measure_z = 0;
    for (const auto &slot : layout.schedule) {
        if (auto *cz = std::get_if<CzLayer>(&slot)) {
            for (const auto &g : cz->gates) {
                auto type = layout.checks[g.check].type;
                if (type == CheckType::Z) {
                    seen_z = true;
                } else {
                    ASSERT_FALSE(seen_z);
                }
            }
        } else if (auto *m = std::get_if<MeasureLayer>(&slot)) {
            if (m->type == CheckType::X) {
                ASSERT_FALSE(seen_z);
                measure_x++;
            } else {
                measure_z++;
            }
        }
    }
    ASSERT_EQ(measure_x, 1);
    ASSERT_EQ(measure_z, 1);
    ASSERT_DOUBLE_EQ(layout.cycle_duration_ns(), 800);
}

TEST(lattice, schedule_respects_check_order) {
    auto layout = build_surface17();
    std::vector<std::vector<size_t>> seen(layout.checks.size());
    for (const auto &slot : layout.schedule) {
        if (auto *cz = std::get_if<CzLayer>(&slot)) {
            for (const auto &g : cz->gates) {
                size_t data = layout.is_data(g.flux) ? g.flux : g.stat;
                size_t anc = layout.is_data(g.flux) ? g.stat : g.flux;
                ASSERT_EQ(anc, layout.checks[g.check].ancilla);
                seen[g.check].push_back(data);
            }
        }
    }
    for (size_t c = 0; c < layout.checks.size(); c++) {
        ASSERT_EQ(seen[c], layout.checks[c].support);
    }
}

TEST(lattice, logical_operators) {
    auto layout = build_surface17();
    auto commutes_with_checks = [&](const std::vector<size_t> &op, CheckType anticommuting_type) {
        for (const auto &c : layout.checks) {
            if (c.type != anticommuting_type) {
                continue;
            }
            size_t overlap = 0;
            for (size_t q : op) {
                overlap += std::count(c.support.begin(), c.support.end(), q);
            }
            if (overlap % 2) {
                return false;
            }
        }
        return true;
    };
    ASSERT_TRUE(commutes_with_checks(layout.logical_z, CheckType::X));
    ASSERT_TRUE(commutes_with_checks(layout.logical_x, CheckType::Z));
    std::set<size_t> lx(layout.logical_x.begin(), layout.logical_x.end());
    ASSERT_EQ(
        lx,
        (std::set<size_t>{layout.data_qubit("D2"), layout.data_qubit("D4"), layout.data_qubit("D7")}));
    size_t overlap = 0;
    for (size_t q : layout.logical_z) {
        overlap += lx.count(q);
    }
    ASSERT_EQ(overlap % 2, 1);
}

TEST(lattice, neighbor_observables) {
    auto layout = build_surface17();
    ASSERT_EQ(neighbor_observables(layout, layout.data_qubit("D4")), layout.checks_of[layout.data_qubit("D4")]);
    ASSERT_EQ(neighbor_observables(layout, layout.data_qubit("D4")).size(), 4);
    size_t bulk = 0, boundary = 0;
    for (const auto &c : layout.checks) {
        auto nb = neighbor_observables(layout, c.ancilla);
        for (size_t o : nb) {
            ASSERT_NE(layout.checks[o].type, c.type);
        }
        if (c.support.size() == 4) {
            ASSERT_EQ(nb.size(), 3);
            bulk++;
        } else {
            ASSERT_EQ(nb.size(), 1);
            boundary++;
        }
    }
    ASSERT_EQ(bulk, 4);
    ASSERT_EQ(boundary, 4);
    ASSERT_THROW(neighbor_observables(layout, layout.data_qubit("D0")), std::domain_error);
}

TEST(lattice, layers_are_conflict_free_for_larger_distance) {
    auto layout = build_rotated_surface_code(5);
    ASSERT_EQ(layout.num_qubits(), 25 + 24);
    size_t weights = 0;
    for (const auto &c : layout.checks) {
        weights += c.support.size();
    }
    ASSERT_EQ(total_cz(layout), weights);
}

TEST(lattice, text_document) {
    auto text = build_surface17().str();
    ASSERT_NE(text.find("# qubits"), std::string::npos);
    ASSERT_NE(text.find("# checks"), std::string::npos);
    ASSERT_NE(text.find("# schedule"), std::string::npos);
    ASSERT_NE(text.find("D4 high 1 1 4"), std::string::npos);
}
