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
#include <array>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace leakmon {

namespace {

struct Plaquette {
    int i;
    int j;
    CheckType type;
};

int parity(int v) {
    return ((v % 2) + 2) % 2;
}

const char *role_name(FrequencyRole r) {
    switch (r) {
        case FrequencyRole::Low:
            return "low";
        case FrequencyRole::Mid:
            return "mid";
        case FrequencyRole::High:
            return "high";
    }
    return "?";
}

Layout build_with_labels(size_t distance, const Timing &timing, const std::vector<size_t> &label_at) {
    if (distance < 3 || distance % 2 == 0) {
        throw std::invalid_argument("distance must be odd and at least 3");
    }
    int d = (int)distance;
    Layout layout;
    layout.distance = distance;
    layout.num_data = distance * distance;
    layout.timing = timing;
    layout.qubits.resize(layout.num_data);
    for (int r = 0; r < d; r++) {
        for (int c = 0; c < d; c++) {
            size_t label = label_at[r * d + c];
            layout.qubits[label] = QubitInfo{
                QubitId{QubitKind::Data, (uint8_t)label},
                (r % 2 == 1) ? FrequencyRole::High : FrequencyRole::Low,
                r,
                c};
        }
    }
    auto data_at = [&](int r, int c) -> size_t {
        return label_at[r * d + c];
    };

    std::vector<Plaquette> plaquettes;
    for (int i = -1; i <= d - 1; i++) {
        for (int j = -1; j <= d - 1; j++) {
            bool bulk_i = i >= 0 && i <= d - 2;
            bool bulk_j = j >= 0 && j <= d - 2;
            int p = parity(i + j);
            if (bulk_i && bulk_j) {
                plaquettes.push_back({i, j, p == 0 ? CheckType::Z : CheckType::X});
            } else if ((i == -1 || i == d - 1) && bulk_j && p == 1) {
                plaquettes.push_back({i, j, CheckType::X});
            } else if ((j == -1 || j == d - 1) && bulk_i && p == 0) {
                plaquettes.push_back({i, j, CheckType::Z});
            }
        }
    }
    std::stable_sort(plaquettes.begin(), plaquettes.end(), [](const Plaquette &a, const Plaquette &b) {
        return a.type == CheckType::X && b.type == CheckType::Z;
    });

    std::array<std::vector<CzGate>, 4> x_layers;
    std::array<std::vector<CzGate>, 4> z_layers;
    uint8_t nx = 0;
    uint8_t nz = 0;
    for (const auto &pl : plaquettes) {
        size_t anc = layout.qubits.size();
        uint8_t idx = pl.type == CheckType::X ? nx++ : nz++;
        layout.qubits.push_back(QubitInfo{
            QubitId{pl.type == CheckType::X ? QubitKind::AncillaX : QubitKind::AncillaZ, idx},
            FrequencyRole::Mid,
            pl.i,
            pl.j});
        // X checks sweep rows first, Z checks sweep columns first, keeping hook errors
        // perpendicular to the logical operator they could shorten.
        std::array<std::pair<int, int>, 4> corners;
        if (pl.type == CheckType::X) {
            corners = {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
        } else {
            corners = {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
        }
        Check check{pl.type, anc, {}};
        size_t check_index = layout.checks.size();
        for (size_t k = 0; k < 4; k++) {
            int r = pl.i + corners[k].first;
            int c = pl.j + corners[k].second;
            if (r < 0 || r >= d || c < 0 || c >= d) {
                continue;
            }
            size_t q = data_at(r, c);
            check.support.push_back(q);
            FrequencyRole rq = layout.qubits[q].role;
            FrequencyRole ra = FrequencyRole::Mid;
            if (rq == ra) {
                throw std::logic_error("CZ between qubits of equal frequency role");
            }
            CzGate g = rq > ra ? CzGate{q, anc, check_index} : CzGate{anc, q, check_index};
            (pl.type == CheckType::X ? x_layers : z_layers)[k].push_back(g);
        }
        layout.checks.push_back(std::move(check));
    }

    std::vector<size_t> x_anc;
    std::vector<size_t> z_anc;
    std::vector<size_t> x_checks;
    std::vector<size_t> z_checks;
    for (size_t c = 0; c < layout.checks.size(); c++) {
        if (layout.checks[c].type == CheckType::X) {
            x_anc.push_back(layout.checks[c].ancilla);
            x_checks.push_back(c);
        } else {
            z_anc.push_back(layout.checks[c].ancilla);
            z_checks.push_back(c);
        }
    }
    std::vector<size_t> h_x(layout.num_data);
    std::iota(h_x.begin(), h_x.end(), 0);
    h_x.insert(h_x.end(), x_anc.begin(), x_anc.end());

    double cz_time = timing.t_int + timing.t_cor;
    double busy = 0;
    layout.schedule.push_back(SingleQubitLayer{h_x, timing.t_single});
    busy += timing.t_single;
    for (auto &layer : x_layers) {
        layout.schedule.push_back(CzLayer{layer, cz_time});
        busy += cz_time;
    }
    layout.schedule.push_back(SingleQubitLayer{h_x, timing.t_single});
    busy += timing.t_single;
    layout.schedule.push_back(MeasureLayer{CheckType::X, x_checks});
    layout.schedule.push_back(SingleQubitLayer{z_anc, timing.t_single});
    busy += timing.t_single;
    for (auto &layer : z_layers) {
        layout.schedule.push_back(CzLayer{layer, cz_time});
        busy += cz_time;
    }
    layout.schedule.push_back(SingleQubitLayer{z_anc, timing.t_single});
    busy += timing.t_single;
    layout.schedule.push_back(MeasureLayer{CheckType::Z, z_checks});
    if (timing.t_c < busy) {
        throw std::invalid_argument("cycle time shorter than the gate sequence");
    }
    layout.schedule.push_back(IdleGap{timing.t_c - busy});

    size_t n = layout.qubits.size();
    layout.flux_count.assign(n, 0);
    for (const auto &slot : layout.schedule) {
        if (auto *cz = std::get_if<CzLayer>(&slot)) {
            std::vector<uint8_t> busy_q(n, 0);
            for (const auto &g : cz->gates) {
                if (busy_q[g.flux]++ || busy_q[g.stat]++) {
                    throw std::logic_error("qubit used twice in one CZ layer");
                }
                layout.flux_count[g.flux]++;
            }
        }
    }

    layout.checks_of.assign(n, {});
    layout.check_of_ancilla.assign(n, SIZE_MAX);
    for (size_t c = 0; c < layout.checks.size(); c++) {
        layout.check_of_ancilla[layout.checks[c].ancilla] = c;
        layout.checks_of[layout.checks[c].ancilla].push_back(c);
        for (size_t q : layout.checks[c].support) {
            layout.checks_of[q].push_back(c);
        }
    }
    for (int c = 0; c < d; c++) {
        layout.logical_z.push_back(data_at(0, c));
    }
    for (int r = 0; r < d; r++) {
        layout.logical_x.push_back(data_at(r, d / 2));
    }
    return layout;
}

}  // namespace

std::string QubitId::str() const {
    const char *prefix = kind == QubitKind::Data ? "D" : kind == QubitKind::AncillaX ? "X" : "Z";
    return prefix + std::to_string(index);
}

size_t Layout::num_checks(CheckType type) const {
    return (size_t)std::count_if(checks.begin(), checks.end(), [&](const Check &c) {
        return c.type == type;
    });
}

std::vector<size_t> Layout::checks_of_type(CheckType type) const {
    std::vector<size_t> out;
    for (size_t c = 0; c < checks.size(); c++) {
        if (checks[c].type == type) {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<size_t> Layout::tracked_qubits() const {
    std::vector<size_t> out;
    for (size_t q = 0; q < qubits.size(); q++) {
        if (is_tracked(q)) {
            out.push_back(q);
        }
    }
    return out;
}

size_t Layout::qubit_by_name(const std::string &name) const {
    for (size_t q = 0; q < qubits.size(); q++) {
        if (qubits[q].id.str() == name) {
            return q;
        }
    }
    throw std::invalid_argument("unknown qubit name: " + name);
}

size_t Layout::data_qubit(const std::string &name) const {
    size_t q = qubit_by_name(name);
    if (!is_data(q)) {
        throw std::invalid_argument("not a data qubit: " + name);
    }
    return q;
}

double Layout::cycle_duration_ns() const {
    double t = 0;
    for (const auto &slot : schedule) {
        if (auto *a = std::get_if<SingleQubitLayer>(&slot)) {
            t += a->duration_ns;
        } else if (auto *b = std::get_if<CzLayer>(&slot)) {
            t += b->duration_ns;
        } else if (auto *c = std::get_if<IdleGap>(&slot)) {
            t += c->duration_ns;
        }
    }
    return t;
}

std::string Layout::str() const {
    std::stringstream out;
    out << "# qubits\n";
    out << "name role row col flux_count\n";
    for (size_t q = 0; q < qubits.size(); q++) {
        const auto &info = qubits[q];
        out << info.id.str() << ' ' << role_name(info.role) << ' ' << info.row << ' ' << info.col << ' '
            << flux_count[q] << '\n';
    }
    out << "# checks\n";
    out << "index type ancilla support\n";
    for (size_t c = 0; c < checks.size(); c++) {
        const auto &check = checks[c];
        out << c << ' ' << (check.type == CheckType::X ? 'X' : 'Z') << ' ' << qubits[check.ancilla].id.str();
        for (size_t q : check.support) {
            out << ' ' << qubits[q].id.str();
        }
        out << '\n';
    }
    out << "# schedule\n";
    for (const auto &slot : schedule) {
        if (auto *a = std::get_if<SingleQubitLayer>(&slot)) {
            out << "H " << a->duration_ns << "ns";
            for (size_t q : a->qubits) {
                out << ' ' << qubits[q].id.str();
            }
        } else if (auto *b = std::get_if<CzLayer>(&slot)) {
            out << "CZ " << b->duration_ns << "ns";
            for (const auto &g : b->gates) {
                out << ' ' << qubits[g.flux].id.str() << '>' << qubits[g.stat].id.str();
            }
        } else if (auto *m = std::get_if<MeasureLayer>(&slot)) {
            out << "M" << (m->type == CheckType::X ? 'X' : 'Z');
            for (size_t c : m->checks) {
                out << ' ' << qubits[checks[c].ancilla].id.str();
            }
        } else if (auto *i = std::get_if<IdleGap>(&slot)) {
            out << "IDLE " << i->duration_ns << "ns";
        }
        out << '\n';
    }
    return out.str();
}

Layout build_rotated_surface_code(size_t distance, const Timing &timing) {
    std::vector<size_t> labels(distance * distance);
    std::iota(labels.begin(), labels.end(), 0);
    return build_with_labels(distance, timing, labels);
}

Layout build_surface17(const Timing &timing) {
    return build_with_labels(3, timing, {0, 2, 1, 3, 4, 5, 6, 7, 8});
}

std::vector<size_t> neighbor_observables(const Layout &layout, size_t qubit) {
    if (qubit >= layout.num_qubits()) {
        throw std::out_of_range("qubit index out of range");
    }
    if (!layout.is_tracked(qubit)) {
        throw std::domain_error("qubit " + layout.qubits[qubit].id.str() + " is not leakage-tracked");
    }
    if (layout.is_data(qubit)) {
        auto out = layout.checks_of[qubit];
        std::sort(out.begin(), out.end());
        return out;
    }
    const Check &own = layout.checks[layout.check_of_ancilla[qubit]];
    std::vector<size_t> out;
    for (size_t c = 0; c < layout.checks.size(); c++) {
        const Check &other = layout.checks[c];
        if (other.type == own.type) {
            continue;
        }
        bool shares = std::any_of(other.support.begin(), other.support.end(), [&](size_t q) {
            return std::find(own.support.begin(), own.support.end(), q) != own.support.end();
        });
        if (shares) {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<size_t> same_type_checks(const Layout &layout, size_t data_qubit, CheckType type) {
    std::vector<size_t> out;
    for (size_t c : layout.checks_of[data_qubit]) {
        if (layout.checks[c].type == type) {
            out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace leakmon
