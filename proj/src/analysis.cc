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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace leakmon {

namespace {

constexpr double NaN = std::numeric_limits<double>::quiet_NaN();

std::vector<size_t> all_runs(size_t n) {
    std::vector<size_t> out(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

double quantile(std::vector<double> &v, double p) {
    if (v.empty()) {
        return NaN;
    }
    std::sort(v.begin(), v.end());
    double pos = p * (double)(v.size() - 1);
    size_t lo = (size_t)std::floor(pos);
    size_t hi = std::min(v.size() - 1, lo + 1);
    double frac = pos - (double)lo;
    return v[lo] * (1 - frac) + v[hi] * frac;
}

}  // namespace

size_t Scored::positives() const {
    return (size_t)std::count(truth.begin(), truth.end(), 1);
}

Scored collect_scores(const Dataset &dataset, const Traces &traces, size_t tracked, const std::vector<size_t> &runs) {
    Scored out;
    auto sel = runs.empty() ? all_runs(dataset.runs.size()) : runs;
    for (size_t r : sel) {
        const auto &rec = dataset.runs[r];
        const auto &tr = traces[r][tracked];
        for (size_t n = 0; n < rec.n_cycles; n++) {
            out.score.push_back(tr[n]);
            out.truth.push_back(rec.leaked(n, tracked) ? 1 : 0);
        }
    }
    return out;
}

std::optional<double> precision(const std::vector<float> &score, const std::vector<uint8_t> &truth, double threshold) {
    size_t flagged = 0;
    size_t hit = 0;
    for (size_t i = 0; i < score.size(); i++) {
        if (score[i] > threshold) {
            flagged++;
            hit += truth[i];
        }
    }
    if (flagged == 0) {
        return std::nullopt;
    }
    return (double)hit / (double)flagged;
}

std::optional<double> recall(const std::vector<float> &score, const std::vector<uint8_t> &truth, double threshold) {
    size_t leaked = 0;
    size_t hit = 0;
    for (size_t i = 0; i < score.size(); i++) {
        if (truth[i]) {
            leaked++;
            hit += score[i] > threshold;
        }
    }
    if (leaked == 0) {
        return std::nullopt;
    }
    return (double)hit / (double)leaked;
}

PrCurve pr_curve(const Scored &scored) {
    PrCurve out;
    size_t n = scored.score.size();
    size_t total_pos = scored.positives();
    if (n == 0 || total_pos == 0) {
        return out;
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scored.score[a] > scored.score[b]; });
    size_t tp = 0;
    size_t flagged = 0;
    size_t i = 0;
    while (i < n) {
        float s = scored.score[order[i]];
        while (i < n && scored.score[order[i]] == s) {
            tp += scored.truth[order[i]];
            flagged++;
            i++;
        }
        // Largest threshold whose strict comparison flags exactly this prefix.
        double th = std::nextafter((double)s, -std::numeric_limits<double>::infinity());
        out.points.push_back({th, (double)tp / (double)total_pos, (double)tp / (double)flagged});
    }
    double prev_r = 0;
    double prev_p = out.points.front().precision;
    for (const auto &pt : out.points) {
        out.auc += (pt.recall - prev_r) * (pt.precision + prev_p) / 2;
        prev_r = pt.recall;
        prev_p = pt.precision;
    }
    return out;
}

std::optional<double> optimality(const PrCurve &curve, const Scored &scored) {
    if (scored.positives() == 0 || curve.points.empty()) {
        return std::nullopt;
    }
    return curve.auc;
}

std::optional<double> optimality(const Scored &scored) {
    return optimality(pr_curve(scored), scored);
}

std::vector<EventWindow> select_events(
    const std::vector<std::vector<double>> &series, double threshold, size_t k_below, size_t k_above) {
    if (k_below == 0 || k_above == 0) {
        throw std::invalid_argument("event windows need k_below, k_above >= 1");
    }
    std::vector<EventWindow> out;
    for (size_t r = 0; r < series.size(); r++) {
        const auto &s = series[r];
        for (size_t n = k_below; n + k_above <= s.size(); n++) {
            bool ok = true;
            for (size_t k = n - k_below; k < n && ok; k++) {
                ok = s[k] <= threshold;
            }
            for (size_t k = n; k < n + k_above && ok; k++) {
                ok = s[k] > threshold;
            }
            if (ok) {
                out.push_back({r, n});
            }
        }
    }
    return out;
}

ResponseCurve average_response(
    const std::vector<std::vector<double>> &series,
    const std::vector<EventWindow> &events,
    size_t before,
    size_t after,
    size_t n_boot,
    uint64_t seed) {
    ResponseCurve out;
    out.events = events.size();
    if (events.empty()) {
        return out;
    }
    size_t width = before + after;
    std::vector<double> values(events.size() * width, NaN);
    for (size_t e = 0; e < events.size(); e++) {
        const auto &s = series[events[e].run];
        for (size_t k = 0; k < width; k++) {
            int64_t n = (int64_t)events[e].onset - (int64_t)before + (int64_t)k;
            if (n >= 0 && (size_t)n < s.size()) {
                values[e * width + k] = s[(size_t)n];
            }
        }
    }
    auto mean_of = [&](const std::vector<size_t> &pick, std::vector<double> &mean) {
        std::vector<double> sum(width, 0);
        std::vector<size_t> cnt(width, 0);
        for (size_t e : pick) {
            for (size_t k = 0; k < width; k++) {
                double v = values[e * width + k];
                if (!std::isnan(v)) {
                    sum[k] += v;
                    cnt[k]++;
                }
            }
        }
        mean.resize(width);
        for (size_t k = 0; k < width; k++) {
            mean[k] = cnt[k] ? sum[k] / (double)cnt[k] : NaN;
        }
    };
    for (size_t k = 0; k < width; k++) {
        out.offsets.push_back((int)k - (int)before);
    }
    mean_of(all_runs(events.size()), out.mean);
    std::vector<std::vector<double>> boots(width);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, events.size() - 1);
    std::vector<size_t> sel(events.size());
    std::vector<double> m;
    for (size_t b = 0; b < n_boot; b++) {
        for (auto &s : sel) {
            s = pick(rng);
        }
        mean_of(sel, m);
        for (size_t k = 0; k < width; k++) {
            if (!std::isnan(m[k])) {
                boots[k].push_back(m[k]);
            }
        }
    }
    out.lo.resize(width);
    out.hi.resize(width);
    for (size_t k = 0; k < width; k++) {
        out.lo[k] = n_boot ? quantile(boots[k], 0.025) : out.mean[k];
        out.hi[k] = n_boot ? quantile(boots[k], 0.975) : out.mean[k];
    }
    return out;
}

std::vector<std::vector<double>> truth_series(const Dataset &dataset, size_t tracked) {
    std::vector<std::vector<double>> out(dataset.runs.size());
    for (size_t r = 0; r < dataset.runs.size(); r++) {
        const auto &rec = dataset.runs[r];
        out[r].resize(rec.n_cycles);
        for (size_t n = 0; n < rec.n_cycles; n++) {
            out[r][n] = rec.leaked(n, tracked) ? 1.0 : 0.0;
        }
    }
    return out;
}

std::vector<std::vector<double>> trace_series(const Traces &traces, size_t tracked) {
    std::vector<std::vector<double>> out(traces.size());
    for (size_t r = 0; r < traces.size(); r++) {
        out[r].assign(traces[r][tracked].begin(), traces[r][tracked].end());
    }
    return out;
}

std::map<size_t, ResponseCurve> defect_rate_around_events(
    const Dataset &dataset,
    const Layout &layout,
    size_t tracked,
    size_t k_below,
    size_t k_above,
    size_t before,
    size_t after) {
    size_t q = layout.tracked_qubits().at(tracked);
    auto events = select_events(truth_series(dataset, tracked), 0.5, k_below, k_above);
    std::vector<DefectStream> defects;
    defects.reserve(dataset.runs.size());
    for (const auto &rec : dataset.runs) {
        defects.push_back(compute_defects(layout, rec));
    }
    std::map<size_t, ResponseCurve> out;
    for (size_t c : neighbor_observables(layout, q)) {
        bool x_type = layout.checks[c].type == CheckType::X;
        std::vector<std::vector<double>> series(dataset.runs.size());
        for (size_t r = 0; r < dataset.runs.size(); r++) {
            series[r].resize(defects[r].n_cycles);
            for (size_t n = 0; n < defects[r].n_cycles; n++) {
                series[r][n] = x_type && n < 2 ? NaN : (double)defects[r].at(n, c);
            }
        }
        out[c] = average_response(series, events, before, after, 100, 7 + c);
    }
    return out;
}

std::vector<std::vector<double>> crosstalk_matrix(const Dataset &dataset, const Traces &traces) {
    size_t nt = dataset.runs.empty() ? 0 : dataset.runs[0].num_tracked;
    std::vector<std::vector<double>> sum(nt, std::vector<double>(nt, 0));
    std::vector<size_t> cnt(nt, 0);
    for (size_t r = 0; r < dataset.runs.size(); r++) {
        const auto &rec = dataset.runs[r];
        for (size_t q = 0; q < nt; q++) {
            for (size_t n = 1; n + 1 < rec.n_cycles; n++) {
                if (!rec.leaked(n - 1, q) && rec.leaked(n, q)) {
                    cnt[q]++;
                    for (size_t q2 = 0; q2 < nt; q2++) {
                        sum[q][q2] += traces[r][q2][n + 1];
                    }
                }
            }
        }
    }
    for (size_t q = 0; q < nt; q++) {
        for (size_t q2 = 0; q2 < nt; q2++) {
            sum[q][q2] = cnt[q] ? sum[q][q2] / (double)cnt[q] : NaN;
        }
    }
    return sum;
}

std::vector<BudgetEntry> optimality_budget(const Dataset &dataset, const Layout &layout, const Traces &traces) {
    auto tracked = layout.tracked_qubits();
    size_t nt = tracked.size();
    std::vector<std::vector<uint8_t>> ever(dataset.runs.size(), std::vector<uint8_t>(nt, 0));
    for (size_t r = 0; r < dataset.runs.size(); r++) {
        const auto &rec = dataset.runs[r];
        for (size_t n = 0; n < rec.n_cycles; n++) {
            for (size_t t = 0; t < nt; t++) {
                ever[r][t] |= rec.leaked(n, t) ? 1 : 0;
            }
        }
    }
    std::vector<BudgetEntry> out;
    for (size_t t = 0; t < nt; t++) {
        if (!layout.is_data(tracked[t])) {
            continue;
        }
        BudgetEntry e;
        e.tracked = t;
        std::vector<size_t> a, b, c;
        for (size_t r = 0; r < dataset.runs.size(); r++) {
            a.push_back(r);
            bool anc = false;
            bool other = false;
            for (size_t t2 = 0; t2 < nt; t2++) {
                if (!ever[r][t2]) {
                    continue;
                }
                if (!layout.is_data(tracked[t2])) {
                    anc = true;
                } else if (t2 != t) {
                    other = true;
                }
            }
            if (!anc) {
                b.push_back(r);
                if (!other) {
                    c.push_back(r);
                }
            }
        }
        e.runs_a = a.size();
        e.runs_b = b.size();
        e.runs_c = c.size();
        e.all_runs = optimality(collect_scores(dataset, traces, t, a));
        if (!b.empty()) {
            e.no_ancilla_leak = optimality(collect_scores(dataset, traces, t, b));
        }
        if (!c.empty()) {
            e.no_other_leak = optimality(collect_scores(dataset, traces, t, c));
        }
        out.push_back(e);
    }
    return out;
}

bool pi_pulse_parity(size_t cycle) {
    return (cycle / 2) % 2 == 0;
}

Dataset pi_pulse_postprocess(const Dataset &dataset, const Layout &layout) {
    Dataset out = dataset;
    auto tracked = layout.tracked_qubits();
    std::vector<int64_t> tracked_of_check(layout.checks.size(), -1);
    for (size_t c = 0; c < layout.checks.size(); c++) {
        auto it = std::find(tracked.begin(), tracked.end(), layout.checks[c].ancilla);
        if (it != tracked.end()) {
            tracked_of_check[c] = it - tracked.begin();
        }
    }
    for (auto &rec : out.runs) {
        for (size_t n = 0; n < rec.n_cycles; n++) {
            if (!pi_pulse_parity(n)) {
                continue;
            }
            for (size_t c = 0; c < rec.num_checks; c++) {
                if (tracked_of_check[c] >= 0 && rec.leaked(n, (size_t)tracked_of_check[c])) {
                    rec.declared[n * rec.num_checks + c] ^= 1;
                }
            }
        }
    }
    out.header["pi_pulse"] = true;
    return out;
}

std::vector<std::vector<float>> run_maxima(const Traces &traces) {
    std::vector<std::vector<float>> out(traces.size());
    for (size_t r = 0; r < traces.size(); r++) {
        for (const auto &tr : traces[r]) {
            out[r].push_back(tr.empty() ? 0.0f : *std::max_element(tr.begin(), tr.end()));
        }
    }
    return out;
}

std::vector<std::vector<float>> truth_maxima(const Dataset &dataset) {
    std::vector<std::vector<float>> out(dataset.runs.size());
    for (size_t r = 0; r < dataset.runs.size(); r++) {
        const auto &rec = dataset.runs[r];
        out[r].assign(rec.num_tracked, 0.0f);
        for (size_t n = 0; n < rec.n_cycles; n++) {
            for (size_t t = 0; t < rec.num_tracked; t++) {
                if (rec.leaked(n, t)) {
                    out[r][t] = 1.0f;
                }
            }
        }
    }
    return out;
}

Selection postselect(const std::vector<std::vector<float>> &maxima, const std::vector<double> &thresholds) {
    Selection out;
    for (size_t r = 0; r < maxima.size(); r++) {
        if (maxima[r].size() != thresholds.size()) {
            throw std::invalid_argument("threshold count does not match tracked qubits");
        }
        bool keep = true;
        for (size_t t = 0; t < thresholds.size() && keep; t++) {
            keep = maxima[r][t] < thresholds[t];
        }
        if (keep) {
            out.survivors.push_back(r);
        }
    }
    out.discarded = maxima.empty() ? 0 : 1 - (double)out.survivors.size() / (double)maxima.size();
    return out;
}

void GaConfig::validate() const {
    if (population < 4 || population % 2 != 0) {
        throw std::invalid_argument("GA population must be even and at least 4");
    }
    if (generations == 0) {
        throw std::invalid_argument("GA needs at least one generation");
    }
    if (!(crossover_prob >= 0 && crossover_prob <= 1) || eta_crossover < 0 || eta_mutation < 0 || mutation_prob > 1) {
        throw std::invalid_argument("GA operator parameters out of range");
    }
    if (!(threshold_min > 0 && threshold_min < threshold_max && threshold_max <= 1)) {
        throw std::invalid_argument("GA threshold bounds must satisfy 0 < min < max <= 1");
    }
    if (first_cycle == 0) {
        throw std::invalid_argument("first fitted cycle must be >= 1");
    }
}

double selection_error_rate(const SuccessTable &success, const std::vector<size_t> &survivors, const GaConfig &config) {
    if (survivors.size() < std::max<size_t>(config.min_survivors, 1)) {
        return 0.5;
    }
    auto f = fidelity_curve(success, survivors);
    std::vector<double> xs, ys;
    for (size_t k = config.first_cycle - 1; k < f.size(); k++) {
        xs.push_back((double)(k + 1));
        ys.push_back(std::clamp(f[k], 0.5, 1.0));
    }
    try {
        return fit_error_rate(xs, ys).eps;
    } catch (const FitError &) {
        return 0.5;
    }
}

bool dominates(const ParetoPoint &a, const ParetoPoint &b) {
    return a.discarded <= b.discarded && a.eps <= b.eps && (a.discarded < b.discarded || a.eps < b.eps);
}

namespace {

struct Individual {
    std::vector<double> genes;
    ParetoPoint point;
    size_t rank = 0;
    double crowding = 0;
};

std::vector<std::vector<size_t>> nondominated_sort(std::vector<Individual> &pop) {
    size_t n = pop.size();
    std::vector<std::vector<size_t>> dominated(n);
    std::vector<size_t> count(n, 0);
    std::vector<std::vector<size_t>> fronts(1);
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            if (i == j) {
                continue;
            }
            if (dominates(pop[i].point, pop[j].point)) {
                dominated[i].push_back(j);
            } else if (dominates(pop[j].point, pop[i].point)) {
                count[i]++;
            }
        }
        if (count[i] == 0) {
            pop[i].rank = 0;
            fronts[0].push_back(i);
        }
    }
    for (size_t k = 0; !fronts[k].empty(); k++) {
        std::vector<size_t> next;
        for (size_t i : fronts[k]) {
            for (size_t j : dominated[i]) {
                if (--count[j] == 0) {
                    pop[j].rank = k + 1;
                    next.push_back(j);
                }
            }
        }
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

void assign_crowding(std::vector<Individual> &pop, const std::vector<size_t> &front) {
    for (size_t i : front) {
        pop[i].crowding = 0;
    }
    if (front.size() <= 2) {
        for (size_t i : front) {
            pop[i].crowding = std::numeric_limits<double>::infinity();
        }
        return;
    }
    for (int obj = 0; obj < 2; obj++) {
        auto val = [&](size_t i) { return obj == 0 ? pop[i].point.discarded : pop[i].point.eps; };
        std::vector<size_t> sorted = front;
        std::sort(sorted.begin(), sorted.end(), [&](size_t a, size_t b) { return val(a) < val(b); });
        double span = val(sorted.back()) - val(sorted.front());
        pop[sorted.front()].crowding = pop[sorted.back()].crowding = std::numeric_limits<double>::infinity();
        if (span <= 0) {
            continue;
        }
        for (size_t k = 1; k + 1 < sorted.size(); k++) {
            pop[sorted[k]].crowding += (val(sorted[k + 1]) - val(sorted[k - 1])) / span;
        }
    }
}

}  // namespace

std::vector<ParetoPoint> pareto_front(
    const SuccessTable &success, const std::vector<std::vector<float>> &maxima, const GaConfig &config) {
    config.validate();
    if (maxima.empty()) {
        return {};
    }
    size_t genes = maxima[0].size();
    double lo = config.threshold_min;
    double hi = config.threshold_max;
    double pm = config.mutation_prob < 0 ? 1.0 / (double)std::max<size_t>(genes, 1) : config.mutation_prob;
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unif(0, 1);

    auto evaluate = [&](std::vector<Individual> &pop) {
        parallel_for(pop.size(), config.workers, [&](size_t i) {
            auto &ind = pop[i];
            auto sel = postselect(maxima, ind.genes);
            ind.point.thresholds = ind.genes;
            ind.point.discarded = sel.discarded;
            ind.point.survivors = sel.survivors.size();
            ind.point.eps = selection_error_rate(success, sel.survivors, config);
        });
    };

    std::vector<Individual> pop(config.population);
    for (size_t i = 0; i < pop.size(); i++) {
        pop[i].genes.resize(genes);
        for (auto &g : pop[i].genes) {
            // Log-uniform start covers the low-threshold region where most trade-off happens.
            g = lo * std::pow(hi / lo, unif(rng));
        }
    }
    std::fill(pop[0].genes.begin(), pop[0].genes.end(), hi);
    std::fill(pop[1].genes.begin(), pop[1].genes.end(), lo);
    evaluate(pop);
    for (const auto &front : nondominated_sort(pop)) {
        assign_crowding(pop, front);
    }

    auto better = [](const Individual &a, const Individual &b) {
        return a.rank < b.rank || (a.rank == b.rank && a.crowding > b.crowding);
    };
    std::uniform_int_distribution<size_t> pick(0, pop.size() - 1);
    auto tournament = [&]() -> const Individual & {
        const auto &a = pop[pick(rng)];
        const auto &b = pop[pick(rng)];
        return better(a, b) ? a : b;
    };

    for (size_t gen = 0; gen < config.generations; gen++) {
        std::vector<Individual> children;
        while (children.size() < config.population) {
            Individual c1;
            Individual c2;
            c1.genes = tournament().genes;
            c2.genes = tournament().genes;
            if (unif(rng) < config.crossover_prob) {
                for (size_t k = 0; k < genes; k++) {
                    if (unif(rng) > 0.5) {
                        continue;
                    }
                    double x1 = c1.genes[k];
                    double x2 = c2.genes[k];
                    if (std::abs(x1 - x2) < 1e-14) {
                        continue;
                    }
                    double y1 = std::min(x1, x2);
                    double y2 = std::max(x1, x2);
                    double u = unif(rng);
                    double eta = config.eta_crossover;
                    auto beta_q = [&](double beta) {
                        double alpha = 2 - std::pow(beta, -(eta + 1));
                        return u <= 1 / alpha ? std::pow(u * alpha, 1 / (eta + 1))
                                              : std::pow(1 / (2 - u * alpha), 1 / (eta + 1));
                    };
                    double b1 = beta_q(1 + 2 * (y1 - lo) / (y2 - y1));
                    double b2 = beta_q(1 + 2 * (hi - y2) / (y2 - y1));
                    double n1 = std::clamp(0.5 * ((y1 + y2) - b1 * (y2 - y1)), lo, hi);
                    double n2 = std::clamp(0.5 * ((y1 + y2) + b2 * (y2 - y1)), lo, hi);
                    if (unif(rng) < 0.5) {
                        std::swap(n1, n2);
                    }
                    c1.genes[k] = n1;
                    c2.genes[k] = n2;
                }
            }
            for (auto *c : {&c1, &c2}) {
                for (auto &g : c->genes) {
                    if (unif(rng) >= pm) {
                        continue;
                    }
                    double d1 = (g - lo) / (hi - lo);
                    double d2 = (hi - g) / (hi - lo);
                    double u = unif(rng);
                    double eta = config.eta_mutation;
                    double dq;
                    if (u < 0.5) {
                        double v = 2 * u + (1 - 2 * u) * std::pow(1 - d1, eta + 1);
                        dq = std::pow(v, 1 / (eta + 1)) - 1;
                    } else {
                        double v = 2 * (1 - u) + 2 * (u - 0.5) * std::pow(1 - d2, eta + 1);
                        dq = 1 - std::pow(v, 1 / (eta + 1));
                    }
                    g = std::clamp(g + dq * (hi - lo), lo, hi);
                }
            }
            children.push_back(std::move(c1));
            children.push_back(std::move(c2));
        }
        children.resize(config.population);
        evaluate(children);

        std::vector<Individual> merged = std::move(pop);
        for (auto &c : children) {
            merged.push_back(std::move(c));
        }
        auto fronts = nondominated_sort(merged);
        std::vector<Individual> next;
        for (const auto &front : fronts) {
            assign_crowding(merged, front);
            if (next.size() + front.size() <= config.population) {
                for (size_t i : front) {
                    next.push_back(merged[i]);
                }
                continue;
            }
            std::vector<size_t> sorted = front;
            std::sort(sorted.begin(), sorted.end(),
                      [&](size_t a, size_t b) { return merged[a].crowding > merged[b].crowding; });
            for (size_t i : sorted) {
                if (next.size() == config.population) {
                    break;
                }
                next.push_back(merged[i]);
            }
            break;
        }
        pop = std::move(next);
    }

    std::vector<ParetoPoint> front;
    for (const auto &ind : pop) {
        bool dominated = false;
        for (const auto &other : pop) {
            if (dominates(other.point, ind.point)) {
                dominated = true;
                break;
            }
        }
        bool duplicate = std::any_of(front.begin(), front.end(), [&](const ParetoPoint &p) {
            return p.discarded == ind.point.discarded && p.eps == ind.point.eps;
        });
        if (!dominated && !duplicate) {
            front.push_back(ind.point);
        }
    }
    std::sort(front.begin(), front.end(), [](const ParetoPoint &a, const ParetoPoint &b) {
        return a.discarded < b.discarded;
    });
    for (size_t i = 0; i < front.size(); i++) {
        auto &p = front[i];
        p.eps_lo = p.eps_hi = p.eps;
        if (config.n_boot == 0 || p.survivors < std::max<size_t>(config.min_survivors, 1)) {
            continue;
        }
        auto sel = postselect(maxima, p.thresholds);
        try {
            auto fit = fit_with_bootstrap(success, sel.survivors, config.n_boot, config.seed + 1 + i, config.first_cycle);
            p.eps_lo = fit.eps_lo;
            p.eps_hi = fit.eps_hi;
        } catch (const FitError &) {
        }
    }
    return front;
}

SteadyState steady_state(const TransitionRates &r) {
    SteadyState out;
    if (r.gamma_l2l3 == 0 && r.gamma_l3l2 == 0) {
        double den = r.gamma_cl + r.gamma_lc;
        if (den <= 0) {
            return out;
        }
        out.p_c = r.gamma_lc / den;
        out.p_l2 = r.gamma_cl / den;
        return out;
    }
    double den = r.gamma_cl * r.gamma_l3l2 + r.gamma_lc * r.gamma_l3l2 + r.gamma_cl * r.gamma_l2l3;
    if (den <= 0) {
        return out;
    }
    out.p_c = r.gamma_lc * r.gamma_l3l2 / den;
    out.p_l2 = r.gamma_cl * r.gamma_l3l2 / den;
    out.p_l3 = r.gamma_cl * r.gamma_l2l3 / den;
    return out;
}

std::vector<double> leak_evolution(const TransitionRates &rates, size_t n_cycles) {
    std::vector<double> out(n_cycles, 0);
    double total = rates.gamma_cl + rates.gamma_lc;
    if (total <= 0) {
        return out;
    }
    double pss = rates.gamma_cl / total;
    for (size_t n = 1; n <= n_cycles; n++) {
        out[n - 1] = pss * (1 - std::exp(-total * (double)n));
    }
    return out;
}

PopulationCurve leak_population(const Dataset &dataset, size_t tracked, size_t n_boot, uint64_t seed) {
    PopulationCurve out;
    size_t runs = dataset.runs.size();
    size_t nc = dataset.n_cycles;
    out.mean.assign(nc, 0);
    out.lo.assign(nc, 0);
    out.hi.assign(nc, 0);
    if (runs == 0) {
        return out;
    }
    std::vector<uint8_t> bits(runs * nc);
    for (size_t r = 0; r < runs; r++) {
        for (size_t n = 0; n < nc; n++) {
            bits[r * nc + n] = dataset.runs[r].leaked(n, tracked) ? 1 : 0;
            out.mean[n] += bits[r * nc + n];
        }
    }
    for (auto &m : out.mean) {
        m /= (double)runs;
    }
    std::vector<std::vector<double>> boots(nc);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, runs - 1);
    std::vector<uint32_t> sum(nc);
    for (size_t b = 0; b < n_boot; b++) {
        std::fill(sum.begin(), sum.end(), 0);
        for (size_t k = 0; k < runs; k++) {
            const uint8_t *row = &bits[pick(rng) * nc];
            for (size_t n = 0; n < nc; n++) {
                sum[n] += row[n];
            }
        }
        for (size_t n = 0; n < nc; n++) {
            boots[n].push_back((double)sum[n] / (double)runs);
        }
    }
    for (size_t n = 0; n < nc; n++) {
        out.lo[n] = n_boot ? quantile(boots[n], 0.025) : out.mean[n];
        out.hi[n] = n_boot ? quantile(boots[n], 0.975) : out.mean[n];
    }
    return out;
}

double effective_coupling(double j1, double anharmonicity) {
    if (anharmonicity == 0) {
        throw std::domain_error("effective coupling needs a nonzero anharmonicity");
    }
    return 2 * std::sqrt(3.0) * j1 * j1 / std::abs(anharmonicity);
}

}  // namespace leakmon
