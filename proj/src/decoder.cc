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
#include <map>

#include "leakmon/matching.h"

namespace leakmon {

namespace {

constexpr int64_t INF = std::numeric_limits<int64_t>::max() / 4;

}  // namespace

DetectorLayout detector_layout(const Layout &layout, size_t n_cycles) {
    DetectorLayout out;
    out.z_checks = layout.checks_of_type(CheckType::Z);
    out.n_cycles = n_cycles;
    return out;
}

std::vector<uint8_t> extract_detectors(
    const Layout &layout, const RunRecord &record, const DefectStream &defects, size_t n_cycles) {
    if (n_cycles == 0 || n_cycles > record.n_cycles) {
        throw std::out_of_range("truncation outside the recorded run");
    }
    auto z = layout.checks_of_type(CheckType::Z);
    size_t nz = z.size();
    std::vector<uint8_t> out((n_cycles + 1) * nz, 0);
    for (size_t r = 0; r < n_cycles; r++) {
        for (size_t k = 0; k < nz; k++) {
            out[r * nz + k] = defects.at(r, z[k]);
        }
    }
    uint64_t bits = record.readout[n_cycles - 1];
    for (size_t k = 0; k < nz; k++) {
        uint8_t s = 0;
        for (size_t d : layout.checks[z[k]].support) {
            s ^= (uint8_t)((bits >> d) & 1);
        }
        uint8_t prev1 = record.decl(n_cycles - 1, z[k]);
        uint8_t prev2 = n_cycles >= 2 ? record.decl(n_cycles - 2, z[k]) : 0;
        out[n_cycles * nz + k] = s ^ prev1 ^ prev2;
    }
    return out;
}

uint8_t readout_logical(const Layout &layout, const RunRecord &record, size_t n_cycles) {
    uint64_t bits = record.readout[n_cycles - 1];
    uint8_t s = 0;
    for (size_t d : layout.logical_z) {
        s ^= (uint8_t)((bits >> d) & 1);
    }
    return s;
}

EdgeCatalog enumerate_fault_edges(const Layout &layout, size_t max_cycles) {
    SimParams params;
    params.leakage.L1 = 0;
    params.leakage.Lm = 0;
    params.leakage.L3 = 0;
    params.coherence.damping = false;
    FrameSimulator sim(layout, params);

    EdgeCatalog catalog;
    catalog.max_cycles = max_cycles;
    catalog.edges.assign(max_cycles + 1, {});
    // (u, v) -> counts of non-flipping / flipping faults.
    std::vector<std::map<std::pair<size_t, size_t>, std::pair<size_t, size_t>>> seen(max_cycles + 1);

    size_t num_slots = layout.schedule.size() + 1;
    for (size_t c = 0; c < max_cycles; c++) {
        for (size_t s = 0; s < num_slots; s++) {
            for (size_t q = 0; q < layout.num_qubits(); q++) {
                for (int pauli = 1; pauli <= 3; pauli++) {
                    SimOptions options;
                    options.random_initial_frames = false;
                    options.faults.push_back({c, s, q, (pauli & 1) != 0, (pauli & 2) != 0});
                    RunRecord record = sim.run(max_cycles, 0, 0, options);
                    DefectStream defects = compute_defects(layout, record);
                    for (size_t n = c + 1; n <= max_cycles; n++) {
                        auto det = extract_detectors(layout, record, defects, n);
                        uint8_t flip = readout_logical(layout, record, n);
                        std::vector<size_t> hot;
                        for (size_t i = 0; i < det.size(); i++) {
                            if (det[i]) {
                                hot.push_back(i);
                            }
                        }
                        if (hot.empty()) {
                            catalog.irregular += flip;
                            continue;
                        }
                        if (hot.size() > 2) {
                            catalog.irregular++;
                            continue;
                        }
                        std::pair<size_t, size_t> key{hot[0], hot.size() == 2 ? hot[1] : BOUNDARY};
                        auto &cnt = seen[n][key];
                        (flip ? cnt.second : cnt.first)++;
                    }
                }
            }
        }
    }
    for (size_t n = 1; n <= max_cycles; n++) {
        for (const auto &[key, cnt] : seen[n]) {
            if (cnt.first && cnt.second) {
                catalog.irregular++;
            }
            catalog.edges[n].push_back({key.first, key.second, cnt.second > cnt.first});
        }
    }
    return catalog;
}

double edge_weight(double p) {
    return std::log((1 - p) / p);
}

void DefectGraph::finalize() {
    size_t m = num_nodes + 1;
    dist.assign(m * m, INF);
    parity.assign(m * m, 0);
    for (size_t i = 0; i < m; i++) {
        dist[i * m + i] = 0;
    }
    for (const auto &e : edges) {
        size_t u = e.u;
        size_t v = e.v == BOUNDARY ? num_nodes : e.v;
        int64_t w = std::max<int64_t>(1, std::llround(e.weight * WEIGHT_SCALE));
        if (w < dist[u * m + v]) {
            dist[u * m + v] = dist[v * m + u] = w;
            parity[u * m + v] = parity[v * m + u] = e.logical;
        }
    }
    for (size_t k = 0; k < m; k++) {
        for (size_t i = 0; i < m; i++) {
            int64_t dik = dist[i * m + k];
            if (dik >= INF) {
                continue;
            }
            for (size_t j = 0; j < m; j++) {
                int64_t d = dik + dist[k * m + j];
                if (d < dist[i * m + j]) {
                    dist[i * m + j] = d;
                    parity[i * m + j] = parity[i * m + k] ^ parity[k * m + j];
                }
            }
        }
    }
}

int64_t DefectGraph::distance(size_t a, size_t b) const {
    size_t m = num_nodes + 1;
    if (a == BOUNDARY) {
        a = num_nodes;
    }
    if (b == BOUNDARY) {
        b = num_nodes;
    }
    return dist[a * m + b];
}

uint8_t DefectGraph::path_parity(size_t a, size_t b) const {
    size_t m = num_nodes + 1;
    if (a == BOUNDARY) {
        a = num_nodes;
    }
    if (b == BOUNDARY) {
        b = num_nodes;
    }
    return parity[a * m + b];
}

EdgeEstimate estimate_edge_probs(
    const std::vector<CandidateEdge> &edges,
    size_t num_nodes,
    const std::vector<std::vector<uint8_t>> &samples,
    double floor) {
    EdgeEstimate out;
    out.p.assign(edges.size(), floor);
    if (samples.empty()) {
        out.clipped = edges.size();
        return out;
    }
    double ns = (double)samples.size();
    std::vector<double> mean(num_nodes, 0);
    std::vector<double> joint(edges.size(), 0);
    for (const auto &s : samples) {
        for (size_t i = 0; i < num_nodes; i++) {
            mean[i] += s[i];
        }
        for (size_t k = 0; k < edges.size(); k++) {
            if (edges[k].v != BOUNDARY && s[edges[k].u] && s[edges[k].v]) {
                joint[k] += 1;
            }
        }
    }
    for (auto &m : mean) {
        m /= ns;
    }
    double ceiling = 0.5 - 1e-6;
    auto clip = [&](double p) {
        if (!std::isfinite(p) || p < floor) {
            out.clipped++;
            return floor;
        }
        if (p > ceiling) {
            out.clipped++;
            return ceiling;
        }
        return p;
    };

    std::vector<double> survive(num_nodes, 1.0);
    for (size_t k = 0; k < edges.size(); k++) {
        const auto &e = edges[k];
        if (e.v == BOUNDARY) {
            continue;
        }
        double xi = mean[e.u];
        double xj = mean[e.v];
        double xij = joint[k] / ns;
        double den = 1 - 2 * xi - 2 * xj + 4 * xij;
        double p = std::numeric_limits<double>::quiet_NaN();
        if (den > 0) {
            double inner = 1 - 4 * (xij - xi * xj) / den;
            if (inner >= 0) {
                p = 0.5 - 0.5 * std::sqrt(inner);
            }
        }
        out.p[k] = clip(p);
        survive[e.u] *= 1 - 2 * out.p[k];
        survive[e.v] *= 1 - 2 * out.p[k];
    }
    for (size_t k = 0; k < edges.size(); k++) {
        const auto &e = edges[k];
        if (e.v != BOUNDARY) {
            continue;
        }
        double p = 0.5 - 0.5 * (1 - 2 * mean[e.u]) / survive[e.u];
        out.p[k] = clip(p);
    }
    return out;
}

DefectGraph build_graph(size_t num_nodes, const std::vector<CandidateEdge> &edges, const std::vector<double> &p) {
    DefectGraph g;
    g.num_nodes = num_nodes;
    for (size_t k = 0; k < edges.size(); k++) {
        g.edges.push_back({edges[k].u, edges[k].v, p[k], edge_weight(p[k]), edges[k].logical});
    }
    g.finalize();
    return g;
}

Matching mwpm(const DefectGraph &graph, std::vector<size_t> defects) {
    std::sort(defects.begin(), defects.end());
    Matching out;
    size_t k = defects.size();
    if (k == 0) {
        return out;
    }
    for (size_t d : defects) {
        if (d >= graph.num_nodes) {
            throw std::out_of_range("defect outside the graph");
        }
    }
    std::vector<std::tuple<size_t, size_t, int64_t>> raw;
    int64_t wmax = 0;
    for (size_t i = 0; i < k; i++) {
        for (size_t j = i + 1; j < k; j++) {
            int64_t d = graph.distance(defects[i], defects[j]);
            if (d < INF) {
                raw.emplace_back(i, j, d);
                wmax = std::max(wmax, d);
            }
        }
        int64_t b = graph.distance(defects[i], BOUNDARY);
        if (b < INF) {
            raw.emplace_back(i, k + i, b);
            wmax = std::max(wmax, b);
        }
    }
    for (size_t i = 0; i < k; i++) {
        for (size_t j = i + 1; j < k; j++) {
            raw.emplace_back(k + i, k + j, 0);
        }
    }
    int64_t big = wmax + 1;
    std::vector<WeightedEdge> edges;
    edges.reserve(raw.size());
    for (auto [u, v, w] : raw) {
        edges.push_back({u, v, big - w});
    }
    auto mate = max_weight_matching(2 * k, edges, true);
    for (size_t i = 0; i < k; i++) {
        int64_t m = mate[i];
        if (m < 0) {
            throw std::runtime_error("defect set admits no perfect matching");
        }
        if ((size_t)m >= k) {
            out.pairs.emplace_back(defects[i], BOUNDARY);
            out.weight += graph.distance(defects[i], BOUNDARY);
            out.parity ^= graph.path_parity(defects[i], BOUNDARY);
        } else if ((size_t)m > i) {
            out.pairs.emplace_back(defects[i], defects[m]);
            out.weight += graph.distance(defects[i], defects[m]);
            out.parity ^= graph.path_parity(defects[i], defects[m]);
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

LogicalResult decode_detectors(const DefectGraph &graph, const std::vector<uint8_t> &detectors, uint8_t observed) {
    std::vector<size_t> defects;
    for (size_t i = 0; i < detectors.size(); i++) {
        if (detectors[i]) {
            defects.push_back(i);
        }
    }
    LogicalResult out;
    out.matching = mwpm(graph, defects);
    out.logical = observed ^ out.matching.parity;
    return out;
}

Decoder train_decoder(const Layout &layout, const Dataset &leakage_free, const EdgeCatalog &catalog, double floor) {
    Decoder decoder;
    size_t n_max = std::min(catalog.max_cycles, leakage_free.n_cycles);
    decoder.graphs.resize(n_max + 1);
    std::vector<DefectStream> defects;
    defects.reserve(leakage_free.runs.size());
    for (const auto &r : leakage_free.runs) {
        defects.push_back(compute_defects(layout, r));
    }
    for (size_t n = 1; n <= n_max; n++) {
        std::vector<std::vector<uint8_t>> samples;
        samples.reserve(leakage_free.runs.size());
        for (size_t r = 0; r < leakage_free.runs.size(); r++) {
            samples.push_back(extract_detectors(layout, leakage_free.runs[r], defects[r], n));
        }
        size_t num_nodes = detector_layout(layout, n).num_detectors();
        auto est = estimate_edge_probs(catalog.edges[n], num_nodes, samples, floor);
        decoder.clipped += est.clipped;
        decoder.graphs[n] = build_graph(num_nodes, catalog.edges[n], est.p);
    }
    return decoder;
}

LogicalResult decode_run(const Layout &layout, const Decoder &decoder, const RunRecord &record, size_t n_cycles) {
    if (n_cycles == 0 || n_cycles > decoder.max_cycles()) {
        throw std::out_of_range("no trained graph for this truncation");
    }
    DefectStream defects = compute_defects(layout, record);
    auto det = extract_detectors(layout, record, defects, n_cycles);
    return decode_detectors(decoder.graphs[n_cycles], det, readout_logical(layout, record, n_cycles));
}

SuccessTable decode_dataset(const Layout &layout, const Decoder &decoder, const Dataset &dataset, size_t workers) {
    size_t n_max = std::min(decoder.max_cycles(), dataset.n_cycles);
    SuccessTable out(dataset.runs.size());
    parallel_for(dataset.runs.size(), workers, [&](size_t r) {
        const auto &record = dataset.runs[r];
        DefectStream defects = compute_defects(layout, record);
        out[r].resize(n_max);
        for (size_t n = 1; n <= n_max; n++) {
            auto det = extract_detectors(layout, record, defects, n);
            auto res = decode_detectors(decoder.graphs[n], det, readout_logical(layout, record, n));
            out[r][n - 1] = res.logical == 0;
        }
    });
    return out;
}

nlohmann::json decoder_to_json(const Decoder &decoder) {
    nlohmann::json graphs = nlohmann::json::array();
    for (size_t n = 1; n < decoder.graphs.size(); n++) {
        const auto &g = decoder.graphs[n];
        nlohmann::json edges = nlohmann::json::array();
        for (const auto &e : g.edges) {
            edges.push_back({e.u, e.v == BOUNDARY ? -1 : (int64_t)e.v, e.p, e.logical ? 1 : 0});
        }
        graphs.push_back({{"n_cycles", n}, {"num_nodes", g.num_nodes}, {"edges", edges}});
    }
    return {{"clipped", decoder.clipped}, {"graphs", graphs}};
}

Decoder decoder_from_json(const nlohmann::json &j) {
    Decoder decoder;
    decoder.clipped = j.value("clipped", (size_t)0);
    const auto &graphs = j.at("graphs");
    decoder.graphs.resize(graphs.size() + 1);
    for (const auto &gj : graphs) {
        size_t n = gj.at("n_cycles").get<size_t>();
        if (n == 0 || n > graphs.size()) {
            throw std::runtime_error("decoder graph table is not contiguous");
        }
        std::vector<CandidateEdge> edges;
        std::vector<double> p;
        for (const auto &e : gj.at("edges")) {
            int64_t v = e.at(1).get<int64_t>();
            edges.push_back({e.at(0).get<size_t>(), v < 0 ? BOUNDARY : (size_t)v, e.at(3).get<int>() != 0});
            p.push_back(e.at(2).get<double>());
        }
        decoder.graphs[n] = build_graph(gj.at("num_nodes").get<size_t>(), edges, p);
    }
    return decoder;
}

namespace {

struct CurveFit {
    double a;  // ln(1 - 2 eps)
    double n0;
    double rms;
};

CurveFit least_squares(const std::vector<double> &n, const std::vector<double> &f) {
    size_t m = n.size();
    // Log-linear start on points that are clearly above the mixed value.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t used = 0;
    for (size_t i = 0; i < m; i++) {
        double y = 2 * f[i] - 1;
        if (y > 0.02) {
            double ly = std::log(y);
            sx += n[i];
            sy += ly;
            sxx += n[i] * n[i];
            sxy += n[i] * ly;
            used++;
        }
    }
    double a = -0.05;
    double n0 = 0;
    if (used >= 2 && sxx * used - sx * sx > 0) {
        double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
        double icpt = (sy - slope * sx) / used;
        a = std::min(slope, 0.0);
        n0 = a < -1e-12 ? icpt / -a : 0;
    }
    auto residuals = [&](double aa, double nn, std::vector<double> &r) {
        double ss = 0;
        for (size_t i = 0; i < m; i++) {
            r[i] = 0.5 * (1 + std::exp(aa * (n[i] - nn))) - f[i];
            ss += r[i] * r[i];
        }
        return ss;
    };
    std::vector<double> r(m);
    double ss = residuals(a, n0, r);
    double lambda = 1e-3;
    for (int iter = 0; iter < 200; iter++) {
        double jtj00 = 0, jtj01 = 0, jtj11 = 0, g0 = 0, g1 = 0;
        for (size_t i = 0; i < m; i++) {
            double e = std::exp(a * (n[i] - n0));
            double da = 0.5 * e * (n[i] - n0);
            double dn = -0.5 * e * a;
            jtj00 += da * da;
            jtj01 += da * dn;
            jtj11 += dn * dn;
            g0 += da * r[i];
            g1 += dn * r[i];
        }
        bool improved = false;
        for (int inner = 0; inner < 30; inner++) {
            double m00 = jtj00 * (1 + lambda) + 1e-15;
            double m11 = jtj11 * (1 + lambda) + 1e-15;
            double det = m00 * m11 - jtj01 * jtj01;
            if (det <= 0) {
                lambda *= 10;
                continue;
            }
            double step_a = -(m11 * g0 - jtj01 * g1) / det;
            double step_n = -(m00 * g1 - jtj01 * g0) / det;
            double na = std::min(0.0, a + step_a);
            double nn = n0 + step_n;
            std::vector<double> nr(m);
            double nss = residuals(na, nn, nr);
            if (std::isfinite(nss) && nss <= ss) {
                bool tiny = ss - nss < 1e-16 * (1 + ss);
                a = na;
                n0 = nn;
                ss = nss;
                r = nr;
                lambda = std::max(lambda / 10, 1e-12);
                improved = !tiny;
                break;
            }
            lambda *= 10;
        }
        if (!improved) {
            break;
        }
    }
    if (a > -1e-12) {
        n0 = 0;
    }
    return {a, n0, std::sqrt(ss / m)};
}

}  // namespace

FitResult fit_error_rate(const std::vector<double> &cycles, const std::vector<double> &fidelity) {
    if (cycles.size() != fidelity.size()) {
        throw FitError("cycle and fidelity lengths differ");
    }
    if (cycles.size() < 3) {
        throw FitError("fit needs at least 3 points, got " + std::to_string(cycles.size()));
    }
    const double tol = 0.05;
    for (size_t i = 0; i < fidelity.size(); i++) {
        if (!std::isfinite(fidelity[i]) || fidelity[i] < 0.5 - tol || fidelity[i] > 1 + 1e-12) {
            throw FitError("fidelity " + std::to_string(fidelity[i]) + " at n=" + std::to_string(cycles[i]) +
                           " outside [0.5, 1]");
        }
    }
    FitResult out;
    bool mixed = std::all_of(fidelity.begin(), fidelity.end(), [](double f) { return f <= 0.5 + 1e-12; });
    if (mixed) {
        out.eps = out.eps_lo = out.eps_hi = 0.5;
        return out;
    }
    CurveFit fit = least_squares(cycles, fidelity);
    out.eps = 0.5 * (1 - std::exp(fit.a));
    out.n0 = fit.n0;
    out.rms = fit.rms;
    out.eps_lo = out.eps_hi = out.eps;
    out.n0_lo = out.n0_hi = out.n0;

    // A decaying model with this residual cannot describe the data.
    if (fit.rms > 0.1) {
        throw FitError("fit residual " + std::to_string(fit.rms) + " too large; eps=" + std::to_string(out.eps) +
                       " n0=" + std::to_string(out.n0));
    }
    double first = fidelity.front();
    double last = fidelity.back();
    if (out.eps < 1e-9 && last < first - 0.1) {
        throw FitError("curve decays but the fit found no decay");
    }
    return out;
}

std::vector<double> fidelity_curve(const SuccessTable &success, const std::vector<size_t> &runs) {
    if (success.empty()) {
        return {};
    }
    size_t n = success[0].size();
    std::vector<double> f(n, 0);
    size_t count = 0;
    auto add = [&](size_t r) {
        for (size_t k = 0; k < n; k++) {
            f[k] += success[r][k];
        }
        count++;
    };
    if (runs.empty()) {
        for (size_t r = 0; r < success.size(); r++) {
            add(r);
        }
    } else {
        for (size_t r : runs) {
            add(r);
        }
    }
    for (auto &v : f) {
        v /= (double)std::max<size_t>(count, 1);
    }
    return f;
}

FitResult fit_with_bootstrap(
    const SuccessTable &success, const std::vector<size_t> &runs, size_t n_boot, uint64_t seed, size_t first_cycle) {
    std::vector<size_t> pool = runs;
    if (pool.empty()) {
        for (size_t r = 0; r < success.size(); r++) {
            pool.push_back(r);
        }
    }
    if (pool.empty()) {
        throw FitError("no runs to fit");
    }
    auto fit_of = [&](const std::vector<size_t> &sel) {
        auto f = fidelity_curve(success, sel);
        std::vector<double> xs, ys;
        for (size_t k = first_cycle - 1; k < f.size(); k++) {
            xs.push_back((double)(k + 1));
            ys.push_back(std::min(1.0, std::max(0.5, f[k])));
        }
        return fit_error_rate(xs, ys);
    };
    FitResult out = fit_of(pool);
    if (n_boot == 0) {
        return out;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    std::vector<double> eps, n0;
    std::vector<size_t> sel(pool.size());
    for (size_t b = 0; b < n_boot; b++) {
        for (auto &s : sel) {
            s = pool[pick(rng)];
        }
        try {
            auto fb = fit_of(sel);
            eps.push_back(fb.eps);
            n0.push_back(fb.n0);
        } catch (const FitError &) {
        }
    }
    if (eps.size() < 10) {
        return out;
    }
    std::sort(eps.begin(), eps.end());
    std::sort(n0.begin(), n0.end());
    auto q = [](const std::vector<double> &v, double p) {
        return v[std::min(v.size() - 1, (size_t)std::floor(p * (double)(v.size() - 1) + 0.5))];
    };
    out.eps_lo = q(eps, 0.025);
    out.eps_hi = q(eps, 0.975);
    out.n0_lo = q(n0, 0.025);
    out.n0_hi = q(n0, 0.975);
    return out;
}

}  // namespace leakmon
