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

#ifndef _LEAKMON_LATTICE_H
#define _LEAKMON_LATTICE_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace leakmon {

enum class QubitKind : uint8_t { Data, AncillaX, AncillaZ };
enum class FrequencyRole : uint8_t { Low = 0, Mid = 1, High = 2 };
enum class CheckType : uint8_t { X, Z };

struct QubitId {
    QubitKind kind;
    uint8_t index;

    bool operator==(const QubitId &other) const = default;
    std::string str() const;
};

struct QubitInfo {
    QubitId id;
    FrequencyRole role;
    /// Grid position. Data qubits sit on integer sites, ancillas at plaquette corners.
    int row;
    int col;
};

struct Check {
    CheckType type;
    size_t ancilla;
    /// Data qubits in the order they interact with the ancilla.
    std::vector<size_t> support;
};

struct SingleQubitLayer {
    std::vector<size_t> qubits;
    double duration_ns;
};

struct CzGate {
    size_t flux;
    size_t stat;
    size_t check;
};

struct CzLayer {
    std::vector<CzGate> gates;
    double duration_ns;
};

struct MeasureLayer {
    CheckType type;
    /// Check indices, measured simultaneously.
    std::vector<size_t> checks;
};

struct IdleGap {
    double duration_ns;
};

using CycleSlot = std::variant<SingleQubitLayer, CzLayer, MeasureLayer, IdleGap>;

struct Timing {
    double t_single = 20;
    double t_int = 30;
    double t_cor = 10;
    double t_m = 600;
    double t_c = 800;
};

/// Qubit numbering: data qubits first, then X ancillas, then Z ancillas.
struct Layout {
    size_t distance = 0;
    size_t num_data = 0;
    std::vector<QubitInfo> qubits;
    std::vector<Check> checks;
    std::vector<CycleSlot> schedule;
    std::vector<size_t> flux_count;
    /// For each qubit, the checks that contain it (data) or that it measures (ancilla).
    std::vector<std::vector<size_t>> checks_of;
    /// check index of each ancilla qubit, or SIZE_MAX for data qubits.
    std::vector<size_t> check_of_ancilla;
    /// Data qubits whose Z parity is the logical Z operator.
    std::vector<size_t> logical_z;
    /// Data qubits of a minimal logical X operator.
    std::vector<size_t> logical_x;
    Timing timing;

    size_t num_qubits() const {
        return qubits.size();
    }
    bool is_data(size_t q) const {
        return q < num_data;
    }
    bool is_tracked(size_t q) const {
        return qubits[q].role != FrequencyRole::Low;
    }
    size_t num_checks(CheckType type) const;
    /// Check indices of the given type, in increasing order.
    std::vector<size_t> checks_of_type(CheckType type) const;
    /// Leakage-tracked qubits: high-frequency data qubits followed by all ancillas.
    std::vector<size_t> tracked_qubits() const;
    size_t data_qubit(const std::string &name) const;
    size_t qubit_by_name(const std::string &name) const;
    double cycle_duration_ns() const;
    std::string str() const;
};

/// Rotated surface code of odd distance with row-major data labels.
Layout build_rotated_surface_code(size_t distance, const Timing &timing = {});

/// Distance-3 rotated surface code with the standard 17-qubit labels.
///
/// Data labels (row, col):
///     D0 D2 D1
///     D3 D4 D5
///     D6 D7 D8
/// so D4 is central, the middle row is high frequency, and D2, D4, D7 form a logical X.
Layout build_surface17(const Timing &timing = {});

/// Checks whose outcome carries information about the given tracked qubit.
///
/// Data qubit: every check containing it. Ancilla: every check of the opposite type
/// sharing at least one data qubit with its own check.
std::vector<size_t> neighbor_observables(const Layout &layout, size_t qubit);

/// Same-type checks that contain the data qubit, grouped per type.
std::vector<size_t> same_type_checks(const Layout &layout, size_t data_qubit, CheckType type);

}  // namespace leakmon

#endif
