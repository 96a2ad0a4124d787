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
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "leakmon/serialize.h"

namespace leakmon {

namespace {

constexpr char MAGIC[8] = {'L', 'E', 'A', 'K', 'M', 'O', 'N', '1'};
constexpr char TRACE_MAGIC[8] = {'L', 'E', 'A', 'K', 'T', 'R', 'C', '1'};

template <typename T>
void write_pod(std::ostream &out, const T &v) {
    out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
void write_vec(std::ostream &out, const std::vector<T> &v) {
    out.write(reinterpret_cast<const char *>(v.data()), (std::streamsize)(v.size() * sizeof(T)));
}

template <typename T>
T read_pod(std::istream &in) {
    T v;
    in.read(reinterpret_cast<char *>(&v), sizeof(T));
    if (!in) {
        throw std::runtime_error("truncated dataset");
    }
    return v;
}

template <typename T>
void read_vec(std::istream &in, std::vector<T> &v, size_t n) {
    v.resize(n);
    in.read(reinterpret_cast<char *>(v.data()), (std::streamsize)(n * sizeof(T)));
    if (!in) {
        throw std::runtime_error("truncated dataset");
    }
}

}  // namespace

SimParams Dataset::params() const {
    return header.at("params").get<SimParams>();
}

void parallel_for(size_t count, size_t workers, const std::function<void(size_t)> &fn) {
    if (workers <= 1 || count <= 1) {
        for (size_t k = 0; k < count; k++) {
            fn(k);
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> threads;
    for (size_t w = 0; w < std::min(workers, count); w++) {
        threads.emplace_back([&]() {
            while (true) {
                size_t k = next.fetch_add(1);
                if (k >= count) {
                    return;
                }
                fn(k);
            }
        });
    }
    for (auto &t : threads) {
        t.join();
    }
}

Dataset simulate_dataset(
    const Layout &layout,
    const SimParams &params,
    size_t n_runs,
    size_t n_cycles,
    uint64_t master_seed,
    size_t workers,
    const SimOptions &options) {
    FrameSimulator sim(layout, params);
    Dataset ds;
    ds.master_seed = master_seed;
    ds.n_cycles = n_cycles;
    ds.runs.resize(n_runs);
    parallel_for(n_runs, workers, [&](size_t k) {
        ds.runs[k] = sim.run(n_cycles, master_seed, k, options);
    });
    ds.header = {
        {"schema_version", DATASET_SCHEMA_VERSION},
        {"master_seed", master_seed},
        {"n_runs", n_runs},
        {"n_cycles", n_cycles},
        {"num_checks", layout.checks.size()},
        {"num_tracked", layout.tracked_qubits().size()},
        {"distance", layout.distance},
        {"params", params},
    };
    return ds;
}

void resample_analog(Dataset &dataset, const IqModel &iq) {
    for (auto &run : dataset.runs) {
        resample_analog(run, iq, dataset.master_seed, run.seed);
    }
    dataset.header["params"]["iq"] = iq;
}

void write_dataset(const Dataset &dataset, std::ostream &out) {
    nlohmann::json header = dataset.header;
    header["n_runs"] = dataset.runs.size();
    std::string text = header.dump();
    out.write(MAGIC, sizeof(MAGIC));
    write_pod<uint64_t>(out, text.size());
    out.write(text.data(), (std::streamsize)text.size());
    for (const auto &run : dataset.runs) {
        write_pod<uint64_t>(out, run.seed);
        write_vec(out, run.outcome);
        write_vec(out, run.declared);
        write_vec(out, run.analog);
        write_vec(out, run.truth);
        write_vec(out, run.readout);
    }
}

void write_dataset(const Dataset &dataset, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_dataset(dataset, out);
}

Dataset read_dataset(std::istream &in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, MAGIC, sizeof(MAGIC)) != 0) {
        throw std::runtime_error("not a leakmon dataset");
    }
    auto len = read_pod<uint64_t>(in);
    std::string text(len, '\0');
    in.read(text.data(), (std::streamsize)len);
    Dataset ds;
    ds.header = nlohmann::json::parse(text);
    if (ds.header.at("schema_version").get<int>() != DATASET_SCHEMA_VERSION) {
        throw std::runtime_error("dataset schema version mismatch");
    }
    ds.master_seed = ds.header.at("master_seed").get<uint64_t>();
    ds.n_cycles = ds.header.at("n_cycles").get<size_t>();
    size_t n_runs = ds.header.at("n_runs").get<size_t>();
    size_t num_checks = ds.header.at("num_checks").get<size_t>();
    size_t num_tracked = ds.header.at("num_tracked").get<size_t>();
    ds.runs.resize(n_runs);
    for (auto &run : ds.runs) {
        run.n_cycles = ds.n_cycles;
        run.num_checks = num_checks;
        run.num_tracked = num_tracked;
        run.seed = read_pod<uint64_t>(in);
        read_vec(in, run.outcome, ds.n_cycles * num_checks);
        read_vec(in, run.declared, ds.n_cycles * num_checks);
        read_vec(in, run.analog, ds.n_cycles * num_checks);
        read_vec(in, run.truth, ds.n_cycles * num_tracked);
        read_vec(in, run.readout, ds.n_cycles);
    }
    return ds;
}

Dataset read_dataset(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return read_dataset(in);
}

void write_traces(const TraceFile &file, std::ostream &out) {
    nlohmann::json header = file.header;
    size_t n_tracked = file.traces.empty() ? 0 : file.traces[0].size();
    size_t n_cycles = n_tracked == 0 ? 0 : file.traces[0][0].size();
    header["schema_version"] = DATASET_SCHEMA_VERSION;
    header["n_runs"] = file.traces.size();
    header["num_tracked"] = n_tracked;
    header["n_cycles"] = n_cycles;
    std::string text = header.dump();
    out.write(TRACE_MAGIC, sizeof(TRACE_MAGIC));
    write_pod<uint64_t>(out, text.size());
    out.write(text.data(), (std::streamsize)text.size());
    for (const auto &run : file.traces) {
        if (run.size() != n_tracked) {
            throw std::invalid_argument("ragged trace table");
        }
        for (const auto &tr : run) {
            if (tr.size() != n_cycles) {
                throw std::invalid_argument("ragged trace table");
            }
            write_vec(out, tr);
        }
    }
}

void write_traces(const TraceFile &file, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_traces(file, out);
}

TraceFile read_traces(std::istream &in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, TRACE_MAGIC, sizeof(TRACE_MAGIC)) != 0) {
        throw std::runtime_error("not a leakmon trace file");
    }
    auto len = read_pod<uint64_t>(in);
    std::string text(len, '\0');
    in.read(text.data(), (std::streamsize)len);
    TraceFile file;
    file.header = nlohmann::json::parse(text);
    if (file.header.at("schema_version").get<int>() != DATASET_SCHEMA_VERSION) {
        throw std::runtime_error("trace schema version mismatch");
    }
    size_t n_runs = file.header.at("n_runs").get<size_t>();
    size_t n_tracked = file.header.at("num_tracked").get<size_t>();
    size_t n_cycles = file.header.at("n_cycles").get<size_t>();
    file.traces.assign(n_runs, std::vector<std::vector<float>>(n_tracked));
    for (auto &run : file.traces) {
        for (auto &tr : run) {
            read_vec(in, tr, n_cycles);
        }
    }
    return file;
}

TraceFile read_traces(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return read_traces(in);
}

void write_dataset_csv(const Dataset &dataset, const Layout &layout, std::ostream &out) {
    auto tracked = layout.tracked_qubits();
    std::vector<size_t> tracked_index(layout.num_qubits(), SIZE_MAX);
    for (size_t k = 0; k < tracked.size(); k++) {
        tracked_index[tracked[k]] = k;
    }
    out << "run,cycle,qubit,m,declared,I,truth_state\n";
    for (size_t r = 0; r < dataset.runs.size(); r++) {
        const auto &run = dataset.runs[r];
        for (size_t n = 0; n < run.n_cycles; n++) {
            for (size_t c = 0; c < run.num_checks; c++) {
                size_t anc = layout.checks[c].ancilla;
                out << r << ',' << n << ',' << layout.qubits[anc].id.str() << ',' << (int)run.m(n, c) << ','
                    << (int)run.decl(n, c) << ',' << run.I(n, c) << ','
                    << (int)run.state(n, tracked_index[anc]) << '\n';
            }
            for (size_t q = 0; q < layout.num_data; q++) {
                int truth = tracked_index[q] == SIZE_MAX ? 0 : (int)run.state(n, tracked_index[q]);
                out << r << ',' << n << ',' << layout.qubits[q].id.str() << ",," << ((run.readout[n] >> q) & 1)
                    << ",," << truth << '\n';
            }
        }
    }
}

Dataset slice(const Dataset &dataset, size_t begin, size_t end) {
    Dataset out;
    out.header = dataset.header;
    out.master_seed = dataset.master_seed;
    out.n_cycles = dataset.n_cycles;
    out.runs.assign(dataset.runs.begin() + (ptrdiff_t)begin, dataset.runs.begin() + (ptrdiff_t)end);
    out.header["n_runs"] = out.runs.size();
    return out;
}

}  // namespace leakmon
